"""Parameter sweeps and inverse design over the closed-form modal model.

A sweep varies exactly one geometry parameter over a uniform inclusive
range and tabulates resonant frequency for a list of modes. Modes whose
azimuthal order is derived from the sector angle are re-derived at every
step, so sweeping sector_angle moves v along with the geometry instead of
freezing it at the base value.

solve_radius inverts f(a) = target for the radius by bisection. For fixed
mode indices every wavenumber component scales as 1/a (k_z only enters
through p/h and is unaffected, but p is part of the mode, not the swept
parameter), so f is strictly decreasing in a and the bracket test is
simply a sign check of f - target at the two ends.
"""

from __future__ import annotations

import enum
import io
import csv
from dataclasses import dataclass

from .modal import ModeSpec, SectorGeometry, resonant_frequency

__all__ = [
    "SweepParameter",
    "SweepSpec",
    "SweepResult",
    "sweep",
    "sweep_csv",
    "solve_radius",
]

_REL_TOL = 1e-10
_MAX_BISECT = 200


class SweepParameter(enum.Enum):
    RADIUS = "radius"
    HEIGHT = "height"
    EPS_R = "eps_r"
    SECTOR_ANGLE = "sector_angle"


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter over [start, stop] in `steps` uniform points."""

    parameter: SweepParameter
    start: float
    stop: float
    steps: int
    modes: tuple[ModeSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "parameter",
                           self.parameter if isinstance(self.parameter, SweepParameter)
                           else SweepParameter(self.parameter))
        object.__setattr__(self, "modes", tuple(self.modes))
        if not (self.start < self.stop):
            raise ValueError(
                f"sweep needs start < stop, got [{self.start}, {self.stop}]")
        if self.steps < 2:
            raise ValueError(f"sweep needs at least 2 steps, got {self.steps}")
        if not self.modes:
            raise ValueError("sweep needs at least one mode")

    def values(self) -> list[float]:
        n = self.steps
        span = self.stop - self.start
        return [self.start + span * (i / (n - 1)) for i in range(n)]


@dataclass(frozen=True)
class SweepResult:
    """One (parameter value, mode) row of a sweep table."""

    parameter: SweepParameter
    value: float
    mode: ModeSpec
    f_hz: float


def _geometry_at(base: SectorGeometry, parameter: SweepParameter,
                 value: float, step: int) -> SectorGeometry:
    kwargs = {"a": base.a, "h": base.h, "phi0": base.phi0, "eps_r": base.eps_r}
    key = {SweepParameter.RADIUS: "a", SweepParameter.HEIGHT: "h",
           SweepParameter.SECTOR_ANGLE: "phi0", SweepParameter.EPS_R: "eps_r"}
    kwargs[key[parameter]] = value
    try:
        return SectorGeometry(**kwargs)
    except ValueError as exc:
        raise ValueError(
            f"step {step} ({parameter.value} = {value}) is not a valid "
            f"geometry: {exc}") from exc


def _mode_at(mode: ModeSpec, geom: SectorGeometry) -> ModeSpec:
    # re-derive v when it came from the sector angle, keep explicit v as-is
    if mode.m is not None:
        return ModeSpec.derived(mode.family, mode.m, mode.n, mode.p, geom.phi0)
    return mode


def sweep(base: SectorGeometry, spec: SweepSpec) -> list[SweepResult]:
    """Frequency table over the swept parameter, one row per (step, mode).

    Rows are ordered by step then by the position of the mode in
    spec.modes. Deterministic: identical inputs give bitwise identical
    frequencies.
    """
    rows = []
    for step, value in enumerate(spec.values()):
        geom = _geometry_at(base, spec.parameter, value, step)
        for mode in spec.modes:
            local = _mode_at(mode, geom)
            rows.append(SweepResult(parameter=spec.parameter, value=value,
                                    mode=local,
                                    f_hz=resonant_frequency(geom, local)))
    return rows


def sweep_csv(rows: list[SweepResult]) -> str:
    """Render sweep rows as CSV with a fixed header."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["param_name", "param_value", "family", "v", "n", "p", "f_hz"])
    for row in rows:
        writer.writerow([row.parameter.value, repr(row.value),
                         row.mode.family.value, repr(row.mode.v),
                         row.mode.n, row.mode.p, repr(row.f_hz)])
    return buf.getvalue()


def solve_radius(base: SectorGeometry, mode: ModeSpec, target_f_hz: float,
                 a_min: float, a_max: float) -> float:
    """Radius at which the given mode of base (height, angle, eps_r kept)
    resonates at target_f_hz, found by bisection on [a_min, a_max].

    Raises ValueError when the bracket does not straddle the target or the
    frequency fails to decrease across it.
    """
    if not (0.0 < a_min < a_max):
        raise ValueError(f"need 0 < a_min < a_max, got [{a_min}, {a_max}]")
    if target_f_hz <= 0.0:
        raise ValueError(f"target frequency must be positive, got {target_f_hz}")

    def f_of(a: float) -> float:
        geom = SectorGeometry(a=a, h=base.h, phi0=base.phi0, eps_r=base.eps_r)
        return resonant_frequency(geom, _mode_at(mode, geom))

    f_lo = f_of(a_min)   # frequency at the small radius: the high end
    f_hi = f_of(a_max)
    if f_lo <= f_hi:
        raise ValueError(
            f"frequency is not decreasing over [{a_min}, {a_max}]: "
            f"f({a_min}) = {f_lo}, f({a_max}) = {f_hi}")
    if not (f_hi <= target_f_hz <= f_lo):
        raise ValueError(
            f"target {target_f_hz} Hz is outside [{f_hi}, {f_lo}] Hz "
            f"reached on radii [{a_min}, {a_max}]")
    lo, hi = a_min, a_max
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        f_mid = f_of(mid)
        if f_mid > target_f_hz:
            lo = mid      # too small a radius, frequency still high
        else:
            hi = mid
        if hi - lo <= _REL_TOL * hi:
            break
    return 0.5 * (lo + hi)
