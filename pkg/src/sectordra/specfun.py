"""Bessel functions of the first kind with real order, and their zeros.

Everything downstream keys off J_v, its derivative, and its positive zeros,
with v real and non-negative (sector geometries need non-integer orders).
The evaluator is self-contained: an ascending power series below
x = max(12, 2v), a normalized backward recurrence (Miller's algorithm) above,
and a Lanczos approximation for the gamma factors. When the alternating
series cancels too heavily for double precision to honor the accuracy
contract, the same series is re-run on arbitrary-precision floats.

Zeros are located by a sign-change scan with a step well below the minimal
spacing of consecutive zeros (about 3.11, attained near v = 0), so the
ordinal index n is counted correctly for any order, then polished with a
bracket-guarded Newton iteration.
"""

from __future__ import annotations

import math

from .errors import ConvergenceError

__all__ = ["bessel_j", "bessel_j_prime", "bessel_zero", "ConvergenceError"]

# x <= max(_SERIES_CUT, 2 v) goes to the ascending series
_SERIES_CUT = 12.0

# accept the double-precision series only when the cancellation estimate
# keeps the relative error under this bound
_SERIES_REL_TOL = 1e-13

_TWO_PI = 2.0 * math.pi

# Lanczos approximation, g = 7, 9 terms; relative error ~1e-14 on the
# positive real axis
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _gamma(x: float) -> float:
    """Gamma function for real positive arguments via Lanczos."""
    if x < 0.5:
        # reflection keeps the approximation on its accurate half-plane
        return math.pi / (math.sin(math.pi * x) * _gamma(1.0 - x))
    y = x - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[i] / (y + i)
    t = y + _LANCZOS_G + 0.5
    return math.sqrt(_TWO_PI) * t ** (y + 0.5) * math.exp(-t) * acc


def _validate(v: float, x: float) -> None:
    if not (math.isfinite(v) and math.isfinite(x)):
        raise ValueError(f"bessel_j needs finite arguments, got v={v}, x={x}")
    if v < 0:
        raise ValueError(f"bessel order must be >= 0, got {v}")
    if x < 0:
        raise ValueError(f"bessel argument must be >= 0, got {x}")


def _series_double(v: float, x: float) -> tuple[float, float]:
    """Ascending series in doubles with a Neumaier-compensated sum.

    Returns (J_v(x), absolute error estimate). The estimate tracks the
    accumulated magnitude of the alternating terms, which is what limits
    double precision here.
    """
    q = 0.25 * x * x
    total = 1.0
    comp = 0.0
    sum_abs = 1.0
    term = 1.0
    k = 1
    k_min = 0.5 * x
    while k < 400:
        term *= -q / (k * (v + k))
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        sum_abs += abs(term)
        if k > k_min and abs(term) <= 1e-17 * abs(total) + 1e-300:
            break
        k += 1
    value = total + comp
    pref = (0.5 * x) ** v / _gamma(v + 1.0)
    # formation error grows ~3 k eps per term; bound it across the sum
    err = pref * sum_abs * (3.0 * k + 6.0) * 1.2e-16
    return pref * value, err


def _series_mp(v: float, x: float) -> float:
    """Same ascending series on arbitrary-precision floats."""
    from mpmath import mp, mpf

    dps = 30 + int(0.55 * x + 0.35 * v)
    with mp.workdps(dps):
        xv = mpf(x)
        vv = mpf(v)
        half = xv / 2
        q = -(half * half)
        # mp gamma keeps the prefactor consistent with the working precision
        term = half ** vv / mp.gamma(vv + 1)
        total = term
        for k in range(1, 5000):
            term = term * q / (k * (vv + k))
            total += term
            if abs(term) < abs(total) * mpf(10) ** (-dps) + mpf(10) ** (-dps - 320):
                break
        return float(total)


def _miller(v: float, x: float) -> float:
    """Backward recurrence from a damped start order, series-normalized.

    Recursing J_{u-1} = (2u/x) J_u - J_{u+1} downward is stable; the trial
    sequence is scaled to the true one with the Neumann sum
    (x/2)^v = sum_k (v+2k) Gamma(v+k)/k! J_{v+2k}(x).
    """
    m_start = int(x + 16.0 * x ** (1.0 / 3.0) + 22.0)
    if m_start % 2:
        m_start += 1
    # c_j = (v+2j) Gamma(v+j)/j!, built by ratio so nothing overflows;
    # c_0 = v Gamma(v) = Gamma(v+1) covers v = 0 too
    half = m_start // 2
    c = [0.0] * (half + 1)
    g1 = _gamma(v + 1.0)
    c[0] = g1
    t = g1
    for j in range(1, half + 1):
        c[j] = (v + 2.0 * j) * t
        t *= (v + j) / (j + 1.0)
    jp = 0.0
    jc = 1e-30
    norm = c[half] * jc
    k = m_start
    while k > 0:
        jm = (2.0 * (v + k) / x) * jc - jp
        jp, jc = jc, jm
        k -= 1
        if k % 2 == 0:
            norm += c[k // 2] * jc
        if abs(jc) > 1e250:
            jp *= 1e-250
            jc *= 1e-250
            norm *= 1e-250
    return jc * (0.5 * x) ** v / norm


def _raw_j(v: float, x: float) -> float:
    """J_v(x) for the zero-refinement path: absolute-error criterion.

    Root polishing needs small absolute error near the root, where the
    relative criterion of the public entry point always fires. The series'
    own absolute estimate stays tiny for moderate orders, so the slow
    substrate only engages at large v where the alternating sum really has
    lost the digits (the terms grow like a modified Bessel function there).
    """
    if x == 0.0:
        return 1.0 if v == 0.0 else 0.0
    if x <= max(_SERIES_CUT, 2.0 * v):
        value, err = _series_double(v, x)
        # the estimate is deliberately pessimistic; 1e-12 keeps every
        # low-order zero on the fast path and still catches the large-v
        # wipeout, which arrives orders of magnitude above this line
        if err > 1e-12:
            return _series_mp(v, x)
        return value
    return _miller(v, x)


def bessel_j(v: float, x: float) -> float:
    """Bessel function of the first kind J_v(x).

    Args:
        v: order, real and >= 0.
        x: argument, >= 0.

    Returns:
        J_v(x) as a float, accurate to about 1e-13 relative away from zeros
        of J_v.

    Raises:
        ValueError: if v < 0, x < 0, or either argument is not finite.
    """
    _validate(v, x)
    if x == 0.0:
        return 1.0 if v == 0.0 else 0.0
    if x <= max(_SERIES_CUT, 2.0 * v):
        value, err = _series_double(v, x)
        if err > _SERIES_REL_TOL * abs(value):
            return _series_mp(v, x)
        return value
    return _miller(v, x)


def bessel_j_prime(v: float, x: float) -> float:
    """Derivative dJ_v/dx via the standard order recurrences.

    Uses J_v' = J_{v-1} - (v/x) J_v for v >= 1 and the equivalent
    J_v' = (v/x) J_v - J_{v+1} below order 1, which keeps every evaluation
    at a non-negative order. At x = 0 only v = 0 and v = 1 have series
    limits (0 and 1/2); other orders require x > 0.
    """
    _validate(v, x)
    if x == 0.0:
        if v == 0.0:
            return 0.0
        if v == 1.0:
            return 0.5
        raise ValueError(f"derivative at x=0 is only handled for v=0 and v=1, got v={v}")
    if v >= 1.0:
        return bessel_j(v - 1.0, x) - (v / x) * bessel_j(v, x)
    return (v / x) * bessel_j(v, x) - bessel_j(v + 1.0, x)


def _raw_j_prime(v: float, x: float) -> float:
    if v >= 1.0:
        return _raw_j(v - 1.0, x) - (v / x) * _raw_j(v, x)
    return (v / x) * _raw_j(v, x) - _raw_j(v + 1.0, x)


def bessel_zero(v: float, n: int, tol: float = 1e-12) -> float:
    """n-th positive zero X_vn of J_v, n = 1, 2, ...

    The asymptotic spacing of consecutive zeros is pi (McMahon: X_vn
    approaches (n + v/2 - 1/4) pi) and the spacing never drops below about
    3.11 for any v >= 0, so marching in steps of 1.5 from just below the
    first zero counts every sign change. The n-th bracket is then polished
    by Newton steps that are rejected whenever they leave the bracket, with
    bisection as the fallback.

    Args:
        v: order, real and >= 0.
        n: 1-based zero index.
        tol: absolute tolerance on the zero location.

    Raises:
        ValueError: on a bad order or index.
        ConvergenceError: if the scan or the refinement exhausts its
            iteration budget (indicates a bug, not a user error).
    """
    _validate(v, 0.0)
    if not float(n).is_integer() or n < 1:
        raise ValueError(f"zero index must be a positive integer, got {n}")
    n = int(n)
    # J_v > 0 on (0, X_v1) and X_v1 > v, so start in the positive region
    x = max(0.9 * v, 0.05)
    step = 1.5
    neg = _raw_j(v, x) < 0.0
    count = 0
    lo = hi = None
    for _ in range(100000):
        x2 = x + step
        neg2 = _raw_j(v, x2) < 0.0
        if neg2 != neg:
            count += 1
            if count == n:
                lo, hi = x, x2
                break
        x, neg = x2, neg2
    if lo is None:
        raise ConvergenceError(f"zero scan failed for v={v}, n={n}")
    f_lo = _raw_j(v, lo)
    xk = 0.5 * (lo + hi)
    for it in range(80):
        f = _raw_j(v, xk)
        if (f < 0.0) != (f_lo < 0.0):
            hi = xk
        else:
            lo, f_lo = xk, f
        fp = _raw_j_prime(v, xk)
        x_new = xk - f / fp if fp != 0.0 else 0.5 * (lo + hi)
        # convergence is judged on the raw Newton step, before the bracket
        # guard: an iterate that lands on the root becomes an endpoint, and
        # the strict inequality would otherwise reject the (tiny) next step
        # and bisect away from the best point found
        if abs(x_new - xk) <= tol:
            return x_new
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        xk = x_new
        if hi - lo <= 2.0 * tol:
            return 0.5 * (lo + hi)
    raise ConvergenceError(f"zero refinement for v={v}, n={n} did not converge in {it + 1} iterations")
