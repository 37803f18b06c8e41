from __future__ import annotations

import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from magnetomech.domain import CantileverSpec, CoilSpec, StripSpec  # noqa: E402
from magnetomech.strip import optimal_coil_width  # noqa: E402


@pytest.fixture
def nb_strip() -> StripSpec:
    """Nb strip of the flagship design."""
    return StripSpec(L=100e-6, w=1e-6, t=50e-9, B_c=0.14, rho=8.57e3, lambda_L=39e-9, xi=38e-9)


@pytest.fixture
def cantilever() -> CantileverSpec:
    return CantileverSpec(t0=0.5e-6, rho0=2.3e3, Omega=2e6 * math.pi,
                          gamma=2 * math.pi, T=0.05)


@pytest.fixture
def optimal_coil(nb_strip) -> CoilSpec:
    return CoilSpec(z_c=nb_strip.w, w_c=optimal_coil_width(1.0) * nb_strip.w, L_c=nb_strip.L)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
