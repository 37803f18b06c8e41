from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from magnetomech.domain import MU_0, CoilSpec, DomainError, StripSpec
from magnetomech.screening import (
    APPROXIMATE,
    eta_lambda_ratio,
    h1,
    h2,
    london_sheet_current,
    sheet_current_finite_lambda,
)
from magnetomech.strip import optimal_coil_width

W = 1e-6
NB = StripSpec(L=100e-6, w=W, t=50e-9, B_c=0.14, rho=8.57e3, lambda_L=39e-9, xi=38e-9)
COIL = CoilSpec(z_c=W, w_c=optimal_coil_width(1.0) * W, L_c=NB.L)


def test_zero_pearl_length_is_exactly_one():
    assert eta_lambda_ratio(0.0, COIL, NB) == 1.0
    assert eta_lambda_ratio(0.0, COIL, NB, model=APPROXIMATE) == 1.0


def test_flagship_ratio():
    assert eta_lambda_ratio(0.03, COIL, NB) == pytest.approx(0.73, abs=0.03)


def test_pinned_values():
    # regression values of both models at z_c = w, w_c = w_c*
    assert eta_lambda_ratio(0.03, COIL, NB) == pytest.approx(0.742300, abs=2e-6)
    assert eta_lambda_ratio(0.03, COIL, NB, model=APPROXIMATE) == pytest.approx(0.410814, abs=2e-6)


def test_small_pearl_length_is_continuous():
    r = [eta_lambda_ratio(x, COIL, NB) for x in (1e-4, 1e-3, 1e-2)]
    assert 1.0 > r[0] > r[1] > r[2]
    assert r[0] > 0.99


@settings(max_examples=15, deadline=None)
@given(st.floats(1e-3, 1.0), st.floats(1.2, 5.0))
def test_ratio_decreases_with_pearl_length(x, k):
    assert eta_lambda_ratio(k * x, COIL, NB, n=400) < eta_lambda_ratio(x, COIL, NB, n=400)


def test_panel_count_convergence():
    a = eta_lambda_ratio(0.03, COIL, NB, n=500)
    b = eta_lambda_ratio(0.03, COIL, NB, n=2000)
    assert a == pytest.approx(b, rel=2e-4)


def test_london_meissner_limit_matches_panel_averages():
    edges, K = london_sheet_current(0.0, 400)
    # exact panel average of 2y / sqrt(1/4 - y^2) is -2 [sqrt(1/4 - y^2)] / h
    s = np.sqrt(np.clip(0.25 - edges**2, 0.0, None))
    exact = -2 * np.diff(s) / np.diff(edges)
    inner = slice(20, -20)
    assert np.allclose(K[inner], exact[inner], rtol=2e-2)


def test_london_current_is_odd():
    edges, K = london_sheet_current(0.05, 301)
    assert np.allclose(K, -K[::-1], rtol=1e-10, atol=1e-12)
    assert np.allclose(edges, -edges[::-1], atol=1e-15)


def test_large_pearl_length_penetrates():
    # for Lambda >> w the field is barely screened and K -> B_a y / (mu0 Lambda)
    lam = 20.0
    edges, K = london_sheet_current(lam, 400)
    mid = 0.5 * (edges[1:] + edges[:-1])
    assert np.allclose(K, mid / lam, rtol=0.03)


def test_approximate_model_meissner_limit():
    y = np.linspace(-0.45, 0.45, 19) * W
    K0 = sheet_current_finite_lambda(y, 1e-3, NB, pearl_length=0.0)
    Ks = sheet_current_finite_lambda(y, 1e-3, NB, pearl_length=1e-12 * W)
    a = W / 2
    assert np.allclose(K0, 1e-3 / MU_0 * 2 * y / np.sqrt(a * a - y * y))
    assert np.allclose(Ks, K0, rtol=1e-4)
    assert h1(0.0) == 0.25 and h2(0.0) == pytest.approx(math.pi / 2)


def test_approximate_current_finite_at_edge():
    K = sheet_current_finite_lambda(W / 2, 1e-3, NB)
    assert math.isfinite(K) and K > 0
    with pytest.raises(DomainError):
        sheet_current_finite_lambda(W / 2, 1e-3, NB, pearl_length=0.0)
    with pytest.raises(DomainError):
        sheet_current_finite_lambda(0.6 * W, 1e-3, NB)


def test_approximate_ratio_matches_direct_quadrature():
    # independent evaluation: flux of both currents through the coil by nested quadrature
    x, u, zc = 0.03, COIL.w_c / W, COIL.z_c / W
    strip = StripSpec(L=1.0, w=1.0, t=1.0, B_c=1.0, rho=1.0, lambda_L=0.0, xi=0.5)

    def flux(current):
        f = lambda yp: current(yp) * math.log(((u / 2 - yp) ** 2 + zc**2) / ((u / 2 + yp) ** 2 + zc**2))
        return integrate.quad(f, 0.0, 0.5, epsrel=1e-12, limit=400)[0]

    lam = lambda yp: sheet_current_finite_lambda(yp, MU_0, strip, pearl_length=x)
    meissner = lambda yp: sheet_current_finite_lambda(yp * (1 - 1e-15), MU_0, strip, pearl_length=0.0)
    ref = flux(lam) / integrate.quad(
        lambda th: meissner(0.5 * math.sin(th)) * 0.5 * math.cos(th)
        * math.log(((u / 2 - 0.5 * math.sin(th)) ** 2 + zc**2) / ((u / 2 + 0.5 * math.sin(th)) ** 2 + zc**2)),
        0.0, math.pi / 2, epsrel=1e-12)[0]
    assert eta_lambda_ratio(x, COIL, NB, model=APPROXIMATE) == pytest.approx(ref, rel=1e-8)


def test_rejects_bad_input():
    with pytest.raises(DomainError):
        eta_lambda_ratio(-0.1, COIL, NB)
    with pytest.raises(DomainError):
        eta_lambda_ratio(0.1, COIL, NB, model="pippard")
    with pytest.raises(DomainError):
        london_sheet_current(0.1, n=4)
