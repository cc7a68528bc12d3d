import math
import time

import pytest

from sectordra import FDProblem, SectorGeometry, fd_transverse_eigs


@pytest.fixture(scope="session")
def table1():
    """The reference quarter-sector geometry used throughout the tests."""
    return SectorGeometry.quarter(a=0.012, h=0.00254, eps_r=12.85)


@pytest.fixture(scope="session")
def fd_quarter():
    """Transverse spectra of the unit quarter disk at three refinements.

    Maps grid size to ([k_t ...], solve seconds). Solved once per session;
    the convergence, coverage, and acceptance tests all read from here.
    """
    out = {}
    for grid, count in ((64, 3), (128, 3), (256, 7)):
        problem = FDProblem(a=1.0, phi0=math.pi / 2.0, n_r=grid, n_phi=grid)
        t0 = time.perf_counter()
        kts = fd_transverse_eigs(problem, count)
        out[grid] = (kts, time.perf_counter() - t0)
    return out
