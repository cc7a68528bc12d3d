import json
import math

import numpy as np
import pytest

from sectordra import (
    CylPoint,
    ModeFamily,
    ModeSpec,
    SectorGeometry,
    boundary_residuals,
    export_grid,
    field_at,
    load_grid_json,
    sample_grid,
    wavenumbers,
)
from sectordra.fields import CSV_COLUMNS

from oracles import helmholtz_residual


def _mode(v, n=1, p=0):
    return ModeSpec.explicit(ModeFamily.TE, v, n, p)


def test_ez_vanishes_everywhere(table1):
    grid = sample_grid(table1, _mode(2.0), 9, 9, 3)
    assert np.all(grid.E_z == 0)
    sample = field_at(table1, _mode(2.0), CylPoint(0.007, 0.5, 0.001))
    assert sample.E_z == 0


def test_normalization(table1):
    grid = sample_grid(table1, _mode(2.0), 17, 17, 5, amplitude=1.0)
    assert np.max(np.abs(grid.H_z)) == pytest.approx(1.0, rel=1e-14)
    scaled = sample_grid(table1, _mode(2.0), 17, 17, 5, amplitude=2.5)
    assert np.max(np.abs(scaled.H_z)) == pytest.approx(2.5, rel=1e-14)
    assert np.allclose(scaled.H_z, 2.5 * grid.H_z, rtol=1e-14, atol=0.0)
    assert np.allclose(scaled.E_phi, 2.5 * grid.E_phi, rtol=1e-14, atol=0.0)


def test_grid_matches_pointwise_evaluation(table1):
    mode = _mode(2.0, 1, 1)
    grid = sample_grid(table1, mode, 7, 7, 5)
    # undo the grid normalization, then both routes express the same formula
    raw_peak = max(
        abs(field_at(table1, mode, CylPoint(float(r), float(p), float(z))).H_z)
        for r in grid.r for p in grid.phi for z in grid.z)
    scale = 1.0 / raw_peak
    for ir in (1, 3, 6):
        for iphi in (0, 2, 5):
            for iz in (0, 2, 4):
                point = CylPoint(float(grid.r[ir]), float(grid.phi[iphi]),
                                 float(grid.z[iz]))
                direct = field_at(table1, mode, point)
                stored = grid.sample(ir, iphi, iz)
                for name in ("E_r", "E_phi", "H_r", "H_phi", "H_z"):
                    assert getattr(stored, name) == pytest.approx(
                        getattr(direct, name) * scale, rel=1e-12, abs=1e-18)


def test_field_domain_validation(table1):
    mode = _mode(2.0)
    for bad in (CylPoint(-0.001, 0.5, 0.001),
                CylPoint(0.013, 0.5, 0.001),
                CylPoint(0.007, -0.1, 0.001),
                CylPoint(0.007, 2.0, 0.001),
                CylPoint(0.007, 0.5, -0.001),
                CylPoint(0.007, 0.5, 0.003)):
        with pytest.raises(ValueError):
            field_at(table1, mode, bad)


def test_axis_behavior(table1):
    # v = 0 and v > 1: all components finite on the axis, E_r limit is 0
    for v in (0.0, 2.0, 3.0):
        s = field_at(table1, _mode(v), CylPoint(0.0, 0.3, 0.0))
        assert math.isfinite(abs(s.H_z))
        assert s.E_r == 0
    # v = 1 keeps a finite nonzero transverse limit on the axis
    s1 = field_at(table1, ModeSpec.explicit(ModeFamily.EH, 1.0, 1, 0),
                  CylPoint(0.0, 0.3, 0.0))
    assert abs(s1.E_r) > 0
    near = field_at(table1, ModeSpec.explicit(ModeFamily.EH, 1.0, 1, 0),
                    CylPoint(1e-9, 0.3, 0.0))
    assert abs(s1.E_r) == pytest.approx(abs(near.E_r), rel=1e-6)
    # fractional orders below 1 have no finite axis value
    with pytest.raises(ValueError):
        field_at(table1, _mode(0.5), CylPoint(0.0, 0.3, 0.0))


def test_boundary_residuals_small(table1):
    for m in range(0, 4):
        for p in (0, 1):
            mode = ModeSpec.derived(ModeFamily.TE, m, 1, p, table1.phi0)
            res = boundary_residuals(table1, mode, resolution=16)
            assert res.face_e_tangential < 1e-9
            assert res.arc_h_phi < 1e-9
            assert res.cap_dhz_dz < 1e-9


def test_boundary_residual_resolution_validation(table1):
    with pytest.raises(ValueError):
        boundary_residuals(table1, _mode(2.0), resolution=4)


def test_helmholtz_residual_shrinks_with_refinement(table1):
    for mode in (_mode(2.0), ModeSpec.derived(ModeFamily.TE, 0, 1, 0,
                                              table1.phi0)):
        wn = wavenumbers(table1, mode)
        k_sq = wn.k_r ** 2 + wn.k_z ** 2
        res = []
        for nodes in (21, 41):
            grid = sample_grid(table1, mode, nodes, nodes, 1)
            res.append(helmholtz_residual(np.real(grid.H_z), grid.r,
                                          grid.phi, grid.z, k_sq))
        assert res[0] / res[1] >= 3.5


def test_grid_count_validation(table1):
    with pytest.raises(ValueError):
        sample_grid(table1, _mode(2.0), 1, 9, 3)
    with pytest.raises(ValueError):
        sample_grid(table1, _mode(2.0, 1, 1), 9, 9, 1)  # p = 1 needs z nodes
    # p = 0 modes may collapse the z axis
    grid = sample_grid(table1, _mode(2.0), 9, 9, 1)
    assert grid.shape == (9, 9, 1)


def test_csv_export_shape(table1):
    grid = sample_grid(table1, _mode(2.0), 3, 3, 9)
    doc = export_grid(grid, "csv")
    lines = doc.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 3 * 3 * 9  # 82 lines, header plus one per node
    first = lines[1].split(",")
    assert len(first) == len(CSV_COLUMNS)
    assert float(first[0]) == grid.r[0]


def test_csv_and_json_agree(table1):
    grid = sample_grid(table1, _mode(2.0), 4, 3, 2)
    doc_csv = export_grid(grid, "csv")
    doc_json = export_grid(grid, "json")
    rows = [line.split(",") for line in doc_csv.splitlines()[1:]]
    data = json.loads(doc_json)
    hz = data["components"]["Hz"]
    for k, row in enumerate(rows):
        assert float(row[CSV_COLUMNS.index("Hz_re")]) == hz["re"][k]
        assert float(row[CSV_COLUMNS.index("Hz_im")]) == hz["im"][k]


def test_json_round_trip_bitwise(table1):
    mode = ModeSpec.derived(ModeFamily.TE, 2, 1, 1, table1.phi0)
    grid = sample_grid(table1, mode, 5, 6, 4, amplitude=1.75)
    back = load_grid_json(export_grid(grid, "json"))
    assert back.geometry == grid.geometry
    assert back.mode == grid.mode
    assert back.amplitude == grid.amplitude
    assert np.array_equal(back.r, grid.r)
    assert np.array_equal(back.phi, grid.phi)
    assert np.array_equal(back.z, grid.z)
    for name in ("E_r", "E_phi", "E_z", "H_r", "H_phi", "H_z"):
        assert np.array_equal(getattr(back, name), getattr(grid, name))


def test_export_rejects_unknown_format(table1):
    grid = sample_grid(table1, _mode(2.0), 3, 3, 1)
    with pytest.raises(ValueError):
        export_grid(grid, "xml")
