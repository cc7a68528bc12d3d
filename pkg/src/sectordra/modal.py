"""Geometry, mode bookkeeping, and resonant frequencies for sector DRAs.

A sectoral cylindrical dielectric resonator of radius a, height h, and sector
angle phi0 supports TE/EH modes whose transverse behavior is J_v(k_r r) with
the azimuthal order set by the perfectly conducting faces:

    v = m pi / phi0,    m = 0, 1, 2, ...

so a quarter sector (phi0 = pi/2) has even integer orders v = 2m. The sector
faces also admit a lower family of hybrid modes whose order is an explicit
integer (EH_110 has v = 1 on the quarter sector); those are represented with
an explicit-v override rather than a derived m.

The resonance condition composes radial, azimuthal, and axial wavenumbers,

    k_r = X_vn / a,  k_phi = v / a,  k_z = p pi / h,
    f = c / (2 pi sqrt(eps_r)) * sqrt(k_r^2 + k_phi^2 + k_z^2)

with X_vn the n-th positive zero of J_v. All quantities are SI internally;
unit conversion (mm, degrees, GHz) happens only at the CLI boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from .specfun import bessel_zero

__all__ = [
    "C_LIGHT",
    "MU_0",
    "ModeFamily",
    "SectorGeometry",
    "ModeSpec",
    "Wavenumbers",
    "azimuthal_order",
    "wavenumbers",
    "resonant_frequency",
    "enumerate_modes",
    "geometry_from_json",
    "mode_from_json",
]

C_LIGHT = 299_792_458.0  # m/s, exact
MU_0 = 4.0e-7 * math.pi  # H/m

# tolerance for "this float is the integer it claims to be" checks
_ORDER_TOL = 1e-9


class ModeFamily(enum.Enum):
    """Mode family label. TE and EH share the same field equations (E_z = 0);
    the distinction is metadata carried through reports and exports."""

    TE = "TE"
    EH = "EH"


def azimuthal_order(m: int, phi0: float) -> float:
    """Azimuthal order v = m pi / phi0 imposed by the conducting faces.

    Args:
        m: non-negative integer azimuthal index.
        phi0: sector angle in radians, > 0.
    """
    if not float(m).is_integer() or m < 0:
        raise ValueError(f"azimuthal index must be a non-negative integer, got {m}")
    if not (phi0 > 0.0 and math.isfinite(phi0)):
        raise ValueError(f"sector angle must be positive and finite, got {phi0}")
    return m * math.pi / phi0


@dataclass(frozen=True)
class SectorGeometry:
    """Sector resonator geometry, SI units.

    Attributes:
        a: radius in meters.
        h: height in meters.
        phi0: sector angle in radians, 0 < phi0 <= 2 pi.
        eps_r: relative permittivity, >= 1.
    """

    a: float
    h: float
    phi0: float
    eps_r: float

    def __post_init__(self) -> None:
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise ValueError(f"radius must be positive, got {self.a}")
        if not (self.h > 0.0 and math.isfinite(self.h)):
            raise ValueError(f"height must be positive, got {self.h}")
        if not (0.0 < self.phi0 <= 2.0 * math.pi):
            raise ValueError(f"sector angle must lie in (0, 2 pi], got {self.phi0}")
        if not (self.eps_r >= 1.0 and math.isfinite(self.eps_r)):
            raise ValueError(f"relative permittivity must be >= 1, got {self.eps_r}")

    @classmethod
    def quarter(cls, a: float, h: float, eps_r: float) -> "SectorGeometry":
        """Quarter-sector geometry, phi0 fixed to pi/2."""
        return cls(a=a, h=h, phi0=math.pi / 2.0, eps_r=eps_r)


@dataclass(frozen=True)
class ModeSpec:
    """One resonant mode: family label, azimuthal order, radial and axial index.

    The order v either derives from an integer m through the face condition
    (m is then recorded) or is set explicitly (m is None), which is how the
    lower EH family on sector geometries is expressed.
    """

    family: ModeFamily
    v: float
    n: int
    p: int
    m: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.family, ModeFamily):
            raise ValueError(f"family must be a ModeFamily, got {self.family!r}")
        if not (self.v >= 0.0 and math.isfinite(self.v)):
            raise ValueError(f"azimuthal order must be >= 0, got {self.v}")
        if not float(self.n).is_integer() or self.n < 1:
            raise ValueError(f"radial index must be a positive integer, got {self.n}")
        if not float(self.p).is_integer() or self.p < 0:
            raise ValueError(f"axial index must be a non-negative integer, got {self.p}")
        if self.m is not None and (not float(self.m).is_integer() or self.m < 0):
            raise ValueError(f"azimuthal index must be a non-negative integer, got {self.m}")

    @property
    def v_source(self) -> str:
        return "explicit" if self.m is None else "derived_from_m"

    @classmethod
    def derived(cls, family: ModeFamily, m: int, n: int, p: int,
                phi0: float) -> "ModeSpec":
        """Mode with v = m pi / phi0 from the face boundary condition."""
        return cls(family=family, v=azimuthal_order(m, phi0), n=n, p=p, m=m)

    @classmethod
    def explicit(cls, family: ModeFamily, v: float, n: int, p: int) -> "ModeSpec":
        """Mode with a directly assigned azimuthal order."""
        return cls(family=family, v=float(v), n=n, p=p, m=None)


@dataclass(frozen=True)
class Wavenumbers:
    """Radial, azimuthal, axial wavenumbers and their composition (rad/m)."""

    k_r: float
    k_phi: float
    k_z: float
    k: float

    @classmethod
    def compose(cls, k_r: float, k_phi: float, k_z: float) -> "Wavenumbers":
        if min(k_r, k_phi, k_z) < 0.0:
            raise ValueError("wavenumber components must be >= 0")
        k = math.sqrt(k_r * k_r + k_phi * k_phi + k_z * k_z)
        return cls(k_r=k_r, k_phi=k_phi, k_z=k_z, k=k)


@lru_cache(maxsize=4096)
def _zero(v: float, n: int) -> float:
    return bessel_zero(v, n)


def _check_mode_geometry(geom: SectorGeometry, mode: ModeSpec) -> None:
    # a derived mode is only meaningful against the sector angle it was built for
    if mode.m is not None:
        expected = azimuthal_order(mode.m, geom.phi0)
        if abs(mode.v - expected) > _ORDER_TOL * max(1.0, expected):
            raise ValueError(
                f"mode order v={mode.v} does not match m={mode.m} for "
                f"sector angle {geom.phi0} (expected v={expected})")


def wavenumbers(geom: SectorGeometry, mode: ModeSpec) -> Wavenumbers:
    """Wavenumbers of a mode on a geometry.

    k_r = X_vn / a, k_phi = v / a, k_z = p pi / h, composed into
    k = sqrt(k_r^2 + k_phi^2 + k_z^2).
    """
    _check_mode_geometry(geom, mode)
    k_r = _zero(mode.v, mode.n) / geom.a
    k_phi = mode.v / geom.a
    k_z = mode.p * math.pi / geom.h
    return Wavenumbers.compose(k_r, k_phi, k_z)


def resonant_frequency(geom: SectorGeometry, mode: ModeSpec) -> float:
    """Resonant frequency in Hz, f = c k / (2 pi sqrt(eps_r))."""
    k = wavenumbers(geom, mode).k
    return C_LIGHT / (2.0 * math.pi * math.sqrt(geom.eps_r)) * k


def enumerate_modes(geom: SectorGeometry, f_max: float, m_max: int,
                    n_max: int, p_max: int) -> list[tuple[ModeSpec, float]]:
    """All modes with resonant frequency <= f_max within the index bounds.

    Two families are generated: the derived family v = m pi / phi0 for
    m = 0..m_max (labeled TE), and the explicit integer family v = 1..m_max
    (labeled EH) for orders the derived map cannot produce, which is what
    admits the lower sector modes such as v = 1 on a quarter sector. The
    result is sorted ascending by frequency with ties broken lexicographically
    by (m, n, p), where the explicit family sorts with v in the m slot.

    Returns:
        list of (ModeSpec, frequency_hz) pairs.
    """
    if not (f_max > 0.0 and math.isfinite(f_max)):
        raise ValueError(f"frequency cutoff must be positive, got {f_max}")
    for name, bound, least in (("m_max", m_max, 1), ("n_max", n_max, 1),
                               ("p_max", p_max, 0)):
        if not float(bound).is_integer() or bound < least:
            raise ValueError(f"{name} must be an integer >= {least}, got {bound}")

    entries: list[tuple[ModeSpec, float]] = []

    def _collect(mode: ModeSpec) -> None:
        f = resonant_frequency(geom, mode)
        if f <= f_max:
            entries.append((mode, f))

    derived_orders = []
    for m in range(0, m_max + 1):
        derived_orders.append(azimuthal_order(m, geom.phi0))
        for n in range(1, n_max + 1):
            for p in range(0, p_max + 1):
                _collect(ModeSpec.derived(ModeFamily.TE, m, n, p, geom.phi0))
    for v_int in range(1, m_max + 1):
        if any(abs(v_int - dv) <= _ORDER_TOL for dv in derived_orders):
            continue
        for n in range(1, n_max + 1):
            for p in range(0, p_max + 1):
                _collect(ModeSpec.explicit(ModeFamily.EH, float(v_int), n, p))

    def _key(item: tuple[ModeSpec, float]):
        mode, f = item
        m_slot = mode.m if mode.m is not None else int(round(mode.v))
        return (f, m_slot, mode.n, mode.p)

    return sorted(entries, key=_key)


_GEOMETRY_KEYS = ("radius_mm", "height_mm", "sector_deg", "eps_r")
_MODE_KEYS = ("family", "m", "v", "n", "p")


def _require_number(data: dict, key: str) -> float:
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"key {key!r} must be a number, got {value!r}")
    return float(value)


def geometry_from_json(data: dict) -> SectorGeometry:
    """Geometry from its JSON document form (mm and degrees at this boundary).

    The document must carry exactly the keys radius_mm, height_mm,
    sector_deg, eps_r; unknown keys are rejected.
    """
    if not isinstance(data, dict):
        raise ValueError(f"geometry document must be an object, got {type(data).__name__}")
    unknown = sorted(set(data) - set(_GEOMETRY_KEYS))
    if unknown:
        raise ValueError(f"unknown geometry keys: {', '.join(unknown)}")
    missing = [k for k in _GEOMETRY_KEYS if k not in data]
    if missing:
        raise ValueError(f"missing geometry keys: {', '.join(missing)}")
    return SectorGeometry(
        a=_require_number(data, "radius_mm") / 1000.0,
        h=_require_number(data, "height_mm") / 1000.0,
        phi0=math.radians(_require_number(data, "sector_deg")),
        eps_r=_require_number(data, "eps_r"),
    )


def mode_from_json(data: dict, geom: SectorGeometry) -> ModeSpec:
    """Mode from its JSON document form, {family, m | v, n, p}.

    An explicit "v" takes precedence over "m"; with only "m" the order is
    derived from the geometry's sector angle. Unknown keys are rejected.
    """
    if not isinstance(data, dict):
        raise ValueError(f"mode document must be an object, got {type(data).__name__}")
    unknown = sorted(set(data) - set(_MODE_KEYS))
    if unknown:
        raise ValueError(f"unknown mode keys: {', '.join(unknown)}")
    try:
        family = ModeFamily(data["family"])
    except KeyError:
        raise ValueError("mode document needs a 'family' key") from None
    except ValueError:
        raise ValueError(f"family must be TE or EH, got {data['family']!r}") from None
    for key in ("n", "p"):
        if key not in data:
            raise ValueError(f"mode document needs an {key!r} key")
    n = int(_require_number(data, "n"))
    p = int(_require_number(data, "p"))
    if "v" in data:
        return ModeSpec.explicit(family, _require_number(data, "v"), n, p)
    if "m" in data:
        m = _require_number(data, "m")
        if not m.is_integer():
            raise ValueError(f"azimuthal index must be an integer, got {m}")
        return ModeSpec.derived(family, int(m), n, p, geom.phi0)
    raise ValueError("mode document needs either 'v' or 'm'")
