from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from magnetomech.domain import DomainError, StripSpec
from magnetomech.noise import (
    PRINTED,
    NoiseInputs,
    amplification_by_perturbation,
    coil_flux_two_wire,
    flux_noise_psd,
    heating_rate,
    magnetic_force_per_length,
    magnetic_spring,
    noise_amplification,
    trap_fraction,
    zeta,
    zeta_field_geometry,
)
from magnetomech.domain import CoilSpec
from magnetomech.sources import WirePairSpec, z_w_for_gradient
from magnetomech.strip import chi, optimal_coil_width

W = 1e-6
NB = StripSpec(L=100e-6, w=W, t=50e-9, B_c=0.14, rho=8.57e3, lambda_L=39e-9, xi=38e-9)
U = optimal_coil_width(1.0)
COIL = CoilSpec(z_c=W, w_c=U * W, L_c=NB.L)
PINNED = WirePairSpec(1.0, z_w_for_gradient(1.0, 4.1e4))


def test_zeta_forms():
    spec = WirePairSpec(1.0, 5.4e-6)
    assert zeta_field_geometry(COIL, spec) == pytest.approx(zeta(COIL, WirePairSpec(1.0, 2.7e-6)))
    assert zeta(COIL, spec) > 0


@pytest.mark.parametrize("z_w", [2.5e-6, 5.4e-6, 20e-6])
def test_consistent_amplification_matches_perturbation(z_w):
    spec = WirePairSpec(1.0, z_w)
    a = noise_amplification(COIL, spec, chi(U, 1.0), W)
    ref = amplification_by_perturbation(COIL, spec, NB)
    assert a == pytest.approx(ref, rel=1e-3)


def test_printed_amplification_reproduces_published_values():
    a_I, a_B = noise_amplification(COIL, PINNED, chi(U, 1.0), W, form=PRINTED)
    assert a_I == pytest.approx(6.4e3, rel=0.01)
    assert a_B == pytest.approx(1.4e4, rel=0.03)


def test_unknown_form():
    with pytest.raises(DomainError):
        noise_amplification(COIL, PINNED, 0.1, W, form="guess")


def test_coil_flux_linear_in_sources():
    f = lambda I, B: coil_flux_two_wire(COIL, PINNED, NB, I, B)
    assert f(2.0, 0.2) == pytest.approx(f(1.0, 0.1) * 2, rel=1e-9)
    assert f(1.0, 0.1) + f(1.0, 0.05) == pytest.approx(f(2.0, 0.15), rel=1e-9)


def test_flux_noise_psd():
    inputs = NoiseInputs.from_amplitudes(1e-5, 2e-6)
    assert flux_noise_psd((10.0, 20.0), inputs, 1.0) == pytest.approx(100 * 1e-10 + 400 * 4e-12)
    tone = NoiseInputs(lambda w: 1e-10 if w > 1 else 0.0, 0.0)
    assert np.allclose(flux_noise_psd((1.0, 1.0), tone, [0.5, 2.0]), [0.0, 1e-10])
    with pytest.raises(DomainError):
        flux_noise_psd((1.0, 1.0), inputs, -1.0)
    with pytest.raises(DomainError):
        NoiseInputs(-1.0, 0.0)


def test_heating_rate():
    R = heating_rate(2 * math.pi * 1e6, 1e-10)
    assert R == pytest.approx(2 * math.pi * 493.5, rel=1e-3)


def test_spring_is_force_gradient():
    b, M = 4.1e4, 1.5785e-13
    k = -(magnetic_force_per_length(b, W, 1e-9) - magnetic_force_per_length(b, W, -1e-9)) / 2e-9 * NB.L
    assert magnetic_spring(b, NB, M) == pytest.approx(math.sqrt(k / M), rel=1e-12)


def test_spring_validation():
    with pytest.raises(DomainError):
        magnetic_spring(1.0, NB, 0.0)


@given(st.floats(-0.9, 0.9))
def test_trap_fraction(d):
    lin, full = trap_fraction(d)
    # stiffness goes as I^2
    assert full == pytest.approx((1 + d) ** 2 - 1, abs=1e-15)
    assert lin == 2 * d


def test_trap_fraction_limit():
    with pytest.raises(DomainError):
        trap_fraction(1.0)
