"""Specific absorption rate: point values, mass averages, power budgets.

Local SAR in tissue is sigma |E|^2 / rho. Regulatory limits constrain its
average over a reference mass (1 g or 10 g), so the mass average is computed
per voxel by growing a centered cube until it holds the target mass, then
mass-weighting the point SAR over that cube; the reported value is the peak
over all centers. With a SAR figure achieved at reference input power P_in,
the largest input power that still meets a limit L is

    P_max = P_in * L / SAR_achieved

The limit table is closed: it contains exactly the published rows
(IEEE C95.1 average 1 g / 10 g and peak 1 g, ECC/CEPT average 1 g / 10 g)
and any other combination is an error rather than a guess.

Tissue data arrives from files; computing in-tissue fields is a full-wave
problem outside this model's scope.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SarStandard",
    "AveragingMass",
    "LimitKind",
    "SarLimit",
    "TissueGrid",
    "AveragedSar",
    "point_sar",
    "averaged_sar",
    "limit_lookup",
    "max_allowed_power",
    "tissue_grid_from_json",
    "tissue_grid_from_csv",
]


class SarStandard(enum.Enum):
    IEEE_C95_1 = "ieee"
    ECC_CEPT = "ecc"


class AveragingMass(enum.Enum):
    ONE_G = "1g"
    TEN_G = "10g"

    @property
    def kilograms(self) -> float:
        return 0.001 if self is AveragingMass.ONE_G else 0.010


class LimitKind(enum.Enum):
    AVERAGE = "average"
    PEAK = "peak"


@dataclass(frozen=True)
class SarLimit:
    """One row of the regulatory limit table."""

    standard: SarStandard
    mass: AveragingMass
    kind: LimitKind
    value: float


_LIMIT_TABLE = {
    (SarStandard.IEEE_C95_1, AveragingMass.ONE_G, LimitKind.AVERAGE): 1.6,
    (SarStandard.IEEE_C95_1, AveragingMass.TEN_G, LimitKind.AVERAGE): 2.0,
    (SarStandard.IEEE_C95_1, AveragingMass.ONE_G, LimitKind.PEAK): 4.0,
    (SarStandard.ECC_CEPT, AveragingMass.ONE_G, LimitKind.AVERAGE): 1.6,
    (SarStandard.ECC_CEPT, AveragingMass.TEN_G, LimitKind.AVERAGE): 2.0,
}


def _coerce(enum_cls, value):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(value)
    except ValueError:
        options = ", ".join(e.value for e in enum_cls)
        raise ValueError(f"{value!r} is not one of: {options}") from None


def limit_lookup(standard, mass, kind=LimitKind.AVERAGE) -> SarLimit:
    """Published SAR limit for a standard, averaging mass, and kind.

    Accepts the enums or their string values ("ieee"/"ecc", "1g"/"10g",
    "average"/"peak"). Raises ValueError for combinations with no published
    row (for example an ECC peak limit).
    """
    standard = _coerce(SarStandard, standard)
    mass = _coerce(AveragingMass, mass)
    kind = _coerce(LimitKind, kind)
    try:
        value = _LIMIT_TABLE[(standard, mass, kind)]
    except KeyError:
        raise ValueError(
            f"no published limit for standard={standard.value}, "
            f"mass={mass.value}, kind={kind.value}") from None
    return SarLimit(standard=standard, mass=mass, kind=kind, value=value)


def point_sar(sigma: float, e_mag: float, rho: float) -> float:
    """Local SAR sigma * e_mag^2 / rho in W/kg."""
    if rho <= 0.0 or not math.isfinite(rho):
        raise ValueError(f"mass density must be positive, got {rho}")
    if sigma < 0.0:
        raise ValueError(f"conductivity must be >= 0, got {sigma}")
    if e_mag < 0.0:
        raise ValueError(f"field magnitude must be >= 0, got {e_mag}")
    return sigma * e_mag ** 2 / rho


def max_allowed_power(p_in: float, sar_achieved: float, limit: SarLimit) -> float:
    """Input power that scales a computed SAR figure onto its limit."""
    if not (p_in > 0.0 and math.isfinite(p_in)):
        raise ValueError(f"input power must be positive, got {p_in}")
    if not (sar_achieved > 0.0 and math.isfinite(sar_achieved)):
        raise ValueError(f"achieved SAR must be positive, got {sar_achieved}")
    return p_in * (limit.value / sar_achieved)


class TissueGrid:
    """Voxelized tissue block: conductivity, density, field magnitude.

    Arrays share one (nx, ny, nz) shape; e_mag is the field magnitude
    obtained at reference input power p_in_w. Linear voxel indices are
    x-major, matching the file format.
    """

    def __init__(self, voxel_m: float, sigma, rho, e_mag, p_in_w: float = 1.0):
        sigma = np.asarray(sigma, dtype=float)
        rho = np.asarray(rho, dtype=float)
        e_mag = np.asarray(e_mag, dtype=float)
        if not (sigma.shape == rho.shape == e_mag.shape) or sigma.ndim != 3:
            raise ValueError(
                f"sigma, rho, e_mag must share one 3-D shape, got "
                f"{sigma.shape}, {rho.shape}, {e_mag.shape}")
        if not (voxel_m > 0.0 and math.isfinite(voxel_m)):
            raise ValueError(f"voxel edge must be positive, got {voxel_m}")
        if not (p_in_w > 0.0 and math.isfinite(p_in_w)):
            raise ValueError(f"reference power must be positive, got {p_in_w}")
        if np.any(sigma < 0.0):
            raise ValueError("conductivity must be >= 0 everywhere")
        if np.any(rho <= 0.0):
            raise ValueError("mass density must be positive everywhere")
        if np.any(e_mag < 0.0):
            raise ValueError("field magnitude must be >= 0 everywhere")
        self.voxel_m = float(voxel_m)
        self.sigma = sigma
        self.rho = rho
        self.e_mag = e_mag
        self.p_in_w = float(p_in_w)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.sigma.shape

    def scaled_field(self, factor: float) -> "TissueGrid":
        """Same tissue with every field magnitude multiplied by factor."""
        return TissueGrid(self.voxel_m, self.sigma, self.rho,
                          self.e_mag * factor, self.p_in_w)


@dataclass(frozen=True)
class AveragedSar:
    """Peak mass-averaged SAR with the winning cube's center voxel."""

    peak_avg_w_per_kg: float
    center_index: int
    center: tuple[int, int, int]


def averaged_sar(grid: TissueGrid, mass_target_kg: float) -> AveragedSar:
    """Peak cube-averaged SAR over all voxel centers.

    For each center the cube grows one voxel layer at a time (clipped at the
    grid boundary) until it holds at least mass_target_kg, then point SAR is
    averaged over the cube weighted by voxel mass. Ties in the peak are
    broken toward the lowest linear (x-major) index, so the result is fully
    deterministic.
    """
    if not (mass_target_kg > 0.0 and math.isfinite(mass_target_kg)):
        raise ValueError(f"mass target must be positive, got {mass_target_kg}")
    voxel_mass = grid.rho * grid.voxel_m ** 3
    total = float(voxel_mass.sum())
    if total < mass_target_kg:
        raise ValueError(
            f"grid holds {total:.6g} kg, below the averaging mass "
            f"{mass_target_kg:.6g} kg")
    psar = grid.sigma * grid.e_mag ** 2 / grid.rho
    weighted = psar * voxel_mass
    nx, ny, nz = grid.shape
    w_max = max(nx, ny, nz)
    best = -math.inf
    best_lin = -1
    best_center = (0, 0, 0)
    for ix in range(nx):
        for iy in range(ny):
            for iz in range(nz):
                avg = None
                for w in range(w_max + 1):
                    xs, xe = max(0, ix - w), min(nx, ix + w + 1)
                    ys, ye = max(0, iy - w), min(ny, iy + w + 1)
                    zs, ze = max(0, iz - w), min(nz, iz + w + 1)
                    m = np.sum(voxel_mass[xs:xe, ys:ye, zs:ze])
                    if m >= mass_target_kg:
                        avg = float(np.sum(weighted[xs:xe, ys:ye, zs:ze]) / m)
                        break
                if avg > best:
                    best = avg
                    best_lin = (ix * ny + iy) * nz + iz
                    best_center = (ix, iy, iz)
    return AveragedSar(peak_avg_w_per_kg=best, center_index=best_lin,
                       center=best_center)


def tissue_grid_from_json(text: str) -> TissueGrid:
    """Parse the JSON tissue file: header keys shape, voxel_m, p_in_w and
    flat sigma/rho/e_mag arrays in x-major order."""
    data = json.loads(text)
    try:
        shape = tuple(int(x) for x in data["shape"])
        voxel = float(data["voxel_m"])
        p_in = float(data["p_in_w"])
        arrays = {k: np.array(data[k], dtype=float) for k in ("sigma", "rho", "e_mag")}
    except KeyError as exc:
        raise ValueError(f"tissue grid document is missing key {exc}") from None
    if len(shape) != 3:
        raise ValueError(f"shape must have three entries, got {shape}")
    n = shape[0] * shape[1] * shape[2]
    for name, arr in arrays.items():
        if arr.size != n:
            raise ValueError(f"{name} holds {arr.size} values, expected {n}")
    return TissueGrid(voxel, arrays["sigma"].reshape(shape),
                      arrays["rho"].reshape(shape),
                      arrays["e_mag"].reshape(shape), p_in)


def tissue_grid_from_csv(csv_text: str, sidecar_text: str) -> TissueGrid:
    """Parse the CSV tissue form: rows index,sigma,rho,e_mag in x-major
    order with shape/voxel_m/p_in_w in a JSON sidecar."""
    meta = json.loads(sidecar_text)
    try:
        shape = tuple(int(x) for x in meta["shape"])
        voxel = float(meta["voxel_m"])
        p_in = float(meta["p_in_w"])
    except KeyError as exc:
        raise ValueError(f"tissue grid sidecar is missing key {exc}") from None
    rows = []
    for line_no, line in enumerate(csv_text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if line_no == 1 and not parts[0].strip().lstrip("-").replace(".", "", 1).isdigit():
            continue  # optional header line
        if len(parts) != 4:
            raise ValueError(f"line {line_no}: expected 4 columns, got {len(parts)}")
        rows.append(tuple(float(p) for p in parts))
    n = shape[0] * shape[1] * shape[2]
    if len(rows) != n:
        raise ValueError(f"CSV holds {len(rows)} voxels, expected {n}")
    for k, row in enumerate(rows):
        if int(row[0]) != k:
            raise ValueError(f"voxel index column out of order at row {k}: {row[0]}")
    data = np.array(rows, dtype=float)
    return TissueGrid(voxel, data[:, 1].reshape(shape), data[:, 2].reshape(shape),
                      data[:, 3].reshape(shape), p_in)
