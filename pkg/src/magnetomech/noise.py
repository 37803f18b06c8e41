"""Flux noise, magnetic spring and parametric heating of the two-wire source.

Fluctuations of the wire current and of the bias field move flux through
the pick-up coil directly and through the strip's screening response.
With uncorrelated sources the flux noise is

    S_Phi / Phi0^2 = a_I^2 S_I / I_w^2 + a_B^2 S_B / B_b^2.

All spectral densities are one-sided, S_f(w) = (2/pi) int_0^inf <f(t) f(0)>
cos(w t) dt. Relative densities are in 1/Hz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy import integrate

from .domain import FLUX_QUANTUM, MU_0, CoilSpec, DomainError, NumericalError, StripSpec
from .sources import WirePairSpec, bias_field, wire_pair_field
from .strip import vector_potential_quadrature

PSD = Union[float, Callable[[float], float]]
CONSISTENT = "consistent"
PRINTED = "printed"


@dataclass(frozen=True)
class NoiseInputs:
    """Relative one-sided noise densities of the wire current and bias field.

    Each entry is a constant or a callable of the angular frequency.
    """

    S_I_rel: PSD = 0.0
    S_B_rel: PSD = 0.0

    def __post_init__(self) -> None:
        for v in (self.S_I_rel, self.S_B_rel):
            if not callable(v) and not (v >= 0 and math.isfinite(v)):
                raise DomainError("noise densities must be finite and non-negative")

    @staticmethod
    def _eval(psd: PSD, omega: float) -> float:
        val = psd(omega) if callable(psd) else psd
        if not val >= 0:
            raise DomainError("noise density evaluated negative")
        return float(val)

    def current(self, omega: float) -> float:
        return self._eval(self.S_I_rel, omega)

    def bias(self, omega: float) -> float:
        return self._eval(self.S_B_rel, omega)

    @classmethod
    def from_amplitudes(cls, current_asd: float = 0.0, bias_asd: float = 0.0) -> NoiseInputs:
        """Constant densities from relative amplitude densities in 1/sqrt(Hz)."""
        return cls(current_asd**2, bias_asd**2)


def _zeta(w_c: float, z_c: float, depth: float) -> float:
    num = (w_c + 4 * depth) ** 2 + 4 * (z_c + depth) ** 2
    den = (w_c - 4 * depth) ** 2 + 4 * (z_c + depth) ** 2
    if not (num > 0 and den > 0):
        raise DomainError("zeta logarithm has a non-positive argument")
    return math.log(num / den)


def zeta(coil: CoilSpec, spec: WirePairSpec) -> float:
    """ln[((w_c + 4z_w)^2 + 4(z_c + z_w)^2) / ((w_c - 4z_w)^2 + 4(z_c + z_w)^2)].

    This is the wire-flux logarithm for wires at y = +-2 z_w, depth z_w.
    """
    return _zeta(coil.w_c, coil.z_c, spec.z_w)


def zeta_field_geometry(coil: CoilSpec, spec: WirePairSpec) -> float:
    """Wire-flux logarithm for the wire positions of the implemented field.

    The wires of :func:`sources.wire_pair_field` sit at y = +-z_w and depth
    z_w / 2, so this is :func:`zeta` with z_w halved.
    """
    return _zeta(coil.w_c, coil.z_c, spec.z_w / 2)


def noise_amplification(coil: CoilSpec, spec: WirePairSpec, chi_value: float, w: float,
                        B_b: float | None = None, form: str = CONSISTENT):
    """Flux sensitivities a_I = (I/Phi0) dPhi/dI and a_B = (B_b/Phi0) dPhi/dB_b.

    Args:
        coil: Pick-up coil.
        spec: Wire pair.
        chi_value: Geometric factor chi of the coil.
        w: Strip width in m.
        B_b: Bias field, defaults to the cancelling bias.
        form: "consistent" derives both from the implemented wire geometry
            with the strip screening the field change (so its flux opposes
            the direct term):
            a_I = (B_b L_c z_w / Phi0) |5 zeta' / 8 - chi w / z_w| and
            a_B = (B_b L_c w_c / Phi0)(1 - chi w / w_c), with zeta' from
            :func:`zeta_field_geometry`. "printed" returns
            (B_b L_c z_w / Phi0)(5 zeta / 8 + chi w / z_w) and
            (B_b L_c w_c / Phi0)(1 + chi w / w_c) with :func:`zeta`.
    """
    if w <= 0:
        raise DomainError("strip width must be positive")
    Bb = bias_field(spec) if B_b is None else B_b
    if form == CONSISTENT:
        zg = zeta_field_geometry(coil, spec)
        a_I = Bb * coil.L_c * spec.z_w / FLUX_QUANTUM * abs(5 * zg / 8 - chi_value * w / spec.z_w)
        a_B = Bb * coil.L_c * coil.w_c / FLUX_QUANTUM * abs(1 - chi_value * w / coil.w_c)
    elif form == PRINTED:
        z = zeta(coil, spec)
        a_I = Bb * coil.L_c * spec.z_w / FLUX_QUANTUM * (5 * z / 8 + chi_value * w / spec.z_w)
        a_B = Bb * coil.L_c * coil.w_c / FLUX_QUANTUM * (1 + chi_value * w / coil.w_c)
    else:
        raise DomainError(f"unknown amplification form {form!r}")
    return a_I, a_B


def coil_flux_two_wire(coil: CoilSpec, spec: WirePairSpec, strip: StripSpec, I_w: float | None = None,
                       B_b: float | None = None) -> float:
    """Flux through the coil (normal +z) from wires, bias and strip, Wb.

    The wire field is integrated across the coil numerically. The strip at
    z_m = 0 screens the total field at its centre; its flux comes from
    filament quadrature of the Meissner current.
    """
    I = spec.I_w if I_w is None else I_w
    Bb = bias_field(spec) if B_b is None else B_b
    src = WirePairSpec(I, spec.z_w)

    def bz(y):
        return wire_pair_field(y, coil.z_c, src)[1]

    half = coil.w_c / 2
    wires, err = integrate.quad(bz, -half, half, epsabs=0.0, epsrel=1e-12, limit=200)
    if err > 1e-9 * abs(wires):
        raise NumericalError("wire flux quadrature did not converge")
    B0 = wire_pair_field(0.0, 0.0, src)[1] + Bb
    a = strip.w / 2

    def meissner(yp):
        return B0 / MU_0 * 2 * yp / math.sqrt(a * a - yp * yp)

    A = vector_potential_quadrature(half, coil.z_c, meissner, a) if B0 != 0 else 0.0
    return coil.L_c * (wires + coil.w_c * Bb) - 2 * coil.L_c * A


def amplification_by_perturbation(coil: CoilSpec, spec: WirePairSpec, strip: StripSpec,
                                  rel_step: float = 1e-6):
    """a_I and a_B from central differences of :func:`coil_flux_two_wire`."""
    I, Bb = spec.I_w, bias_field(spec)
    dI = rel_step * I
    dB = rel_step * Bb
    dPhi_I = (coil_flux_two_wire(coil, spec, strip, I + dI, Bb)
              - coil_flux_two_wire(coil, spec, strip, I - dI, Bb)) / (2 * dI)
    dPhi_B = (coil_flux_two_wire(coil, spec, strip, I, Bb + dB)
              - coil_flux_two_wire(coil, spec, strip, I, Bb - dB)) / (2 * dB)
    return abs(dPhi_I) * I / FLUX_QUANTUM, abs(dPhi_B) * Bb / FLUX_QUANTUM


def flux_noise_psd(amps, inputs: NoiseInputs, omega):
    """Relative flux noise S_Phi / Phi0^2 at angular frequency ``omega``, 1/Hz."""
    a_I, a_B = amps
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    if np.any(om < 0):
        raise DomainError("frequency must be non-negative")
    out = np.array([a_I**2 * inputs.current(o) + a_B**2 * inputs.bias(o) for o in om])
    return out if np.ndim(omega) else float(out[0])


def magnetic_force_per_length(b: float, w: float, z_m):
    """Vertical Lorentz force per unit length on the screening currents, N/m."""
    return -(math.pi * b * b / MU_0) * (w / 2) ** 2 * np.asarray(z_m, dtype=float)


def magnetic_spring(b: float, strip: StripSpec, mass: float) -> float:
    """Frequency of the magnetic trap, (b w / 2) sqrt(pi L / (mu0 M)), rad/s."""
    if not (mass > 0 and b >= 0):
        raise DomainError("mass must be positive and gradient non-negative")
    return b * strip.w / 2 * math.sqrt(math.pi * strip.L / (MU_0 * mass))


def heating_rate(Omega: float, S_I_rel_at_2Omega: float) -> float:
    """Ground-state parametric heating rate pi Omega^2 S_I(2 Omega) / (4 I_w^2)."""
    if Omega < 0 or S_I_rel_at_2Omega < 0:
        raise DomainError("inputs must be non-negative")
    return math.pi * Omega**2 * S_I_rel_at_2Omega / 4


def trap_fraction(delta_I_over_I: float):
    """Relative trap-stiffness fluctuation: (2 d, (2 + d) d) for d = dI/I."""
    d = delta_I_over_I
    if not abs(d) < 1:
        raise DomainError("relative current fluctuation must be below 1")
    return 2 * d, (2 + d) * d


@dataclass(frozen=True)
class NoiseReport:
    a_I: float
    a_B: float
    zeta: float
    S_Phi_rel: tuple[tuple[float, float], ...]
    Omega_m: float
    R_02: float
