"""From coil flux to circuit frequency shifts: transmon, g0, kappa, cooperativity.

A split transmon with junction energy E_J(Phi) = 2 E_J1 cos(pi Phi / Phi0)
has hbar omega = sqrt(8 E_J E_C) - E_C. Around the flux bias f = Phi(0)/Phi0
its frequency moves by d omega / d f = -omega0 phi(f), with
omega0 = sqrt(8 E_J1 E_C) / hbar and

    phi(f) = pi sin(pi f) / sqrt(2 cos(pi f)).

The single-photon coupling is g0 = phi omega0 eta and the circuit decays at
kappa = omega0 / Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import HBAR, K_B, CantileverSpec, DomainError

TRANSMON_MIN_RATIO = 40.0
CYCLIC = "cyclic"
ANGULAR = "angular"


def _cos_bias(flux_frac: float) -> float:
    c = math.cos(math.pi * flux_frac)
    # cos(pi/2) rounds to 6e-17, so test the bias itself as well
    if not (abs(flux_frac) < 0.5 and c > 0):
        raise DomainError(f"flux bias {flux_frac!r} makes the junction energy non-positive")
    return c


@dataclass(frozen=True)
class CircuitSpec:
    """Flux-tunable transmon.

    Attributes:
        E_J1: Single-junction Josephson energy in J.
        E_C: Charging energy in J.
        flux_bias: Static flux through the SQUID loop over Phi0.
        Q: Quality factor of the circuit.
        beta: Anharmonicity prefactor; carried along but not used.
    """

    E_J1: float
    E_C: float
    flux_bias: float
    Q: float
    beta: float = 0.0

    def __post_init__(self) -> None:
        if not (self.E_J1 > 0 and self.E_C > 0):
            raise DomainError("Josephson and charging energies must be positive")
        if not self.Q > 0:
            raise DomainError("quality factor must be positive")
        if not abs(self.flux_bias) < 0.5:
            raise DomainError("flux bias must satisfy |Phi/Phi0| < 1/2")

    @classmethod
    def from_frequency(cls, omega0: float, ej_over_ec: float, flux_bias: float, Q: float) -> CircuitSpec:
        """Build a circuit from omega0 = sqrt(8 E_J1 E_C)/hbar.

        ``ej_over_ec`` is E_J/E_C at the operating bias, where
        E_J = 2 E_J1 cos(pi flux_bias).
        """
        if not (omega0 > 0 and ej_over_ec > 0):
            raise DomainError("frequency and E_J/E_C must be positive")
        c = _cos_bias(flux_bias)
        E_C = HBAR * omega0 * math.sqrt(c / (4.0 * ej_over_ec))
        E_J1 = ej_over_ec * E_C / (2.0 * c)
        return cls(E_J1, E_C, flux_bias, Q)

    @property
    def omega0(self) -> float:
        return math.sqrt(8 * self.E_J1 * self.E_C) / HBAR

    @property
    def kappa(self) -> float:
        return self.omega0 / self.Q

    @property
    def ej_over_ec(self) -> float:
        """E_J / E_C at the operating bias."""
        return 2 * self.E_J1 * math.cos(math.pi * self.flux_bias) / self.E_C

    @property
    def is_transmon(self) -> bool:
        return self.ej_over_ec >= TRANSMON_MIN_RATIO


def transmon_frequency(circuit: CircuitSpec, flux_frac: float) -> float:
    """Transmon angular frequency at flux ``flux_frac`` Phi0, rad/s."""
    c = _cos_bias(flux_frac)
    return (math.sqrt(16 * circuit.E_J1 * c * circuit.E_C) - circuit.E_C) / HBAR


def phi_sensitivity(flux_frac: float) -> float:
    """Dimensionless flux sensitivity -(d omega / d f) / omega0."""
    c = _cos_bias(flux_frac)
    return math.pi * math.sin(math.pi * flux_frac) / math.sqrt(2 * c)


def single_photon_coupling(phi: float, omega0: float, eta: float) -> float:
    """g0 = phi omega0 eta in rad/s."""
    return phi * omega0 * eta


def coupling_ratio(phi: float, Q: float, eta: float) -> float:
    """g0 / kappa = phi Q eta."""
    if not Q > 0:
        raise DomainError("quality factor must be positive")
    return phi * Q * eta


def mechanical_decoherence(cantilever: CantileverSpec, convention: str = CYCLIC) -> float:
    """Thermal decoherence rate gamma k_B T / (hbar Omega_eff), rad/s.

    Args:
        cantilever: Mechanical mode and bath.
        convention: "cyclic" uses Omega_eff = Omega / 2 pi (the frequency in
            Hz taken as a rate), "angular" uses Omega itself. The two differ
            by 2 pi.
    """
    if convention == CYCLIC:
        omega_eff = cantilever.Omega / (2 * math.pi)
    elif convention == ANGULAR:
        omega_eff = cantilever.Omega
    else:
        raise DomainError(f"unknown decoherence convention {convention!r}")
    return cantilever.gamma * K_B * cantilever.T / (HBAR * omega_eff)


def cooperativity(g0: float, kappa: float, Gamma: float) -> float:
    """Single-photon cooperativity g0^2 / (kappa Gamma)."""
    if not (kappa > 0 and Gamma > 0):
        raise DomainError("decay rates must be positive")
    return g0 * g0 / (kappa * Gamma)


@dataclass(frozen=True)
class CouplingReport:
    eta: float
    eta_star: float
    chi: float
    phi: float
    omega0: float
    g0: float
    kappa: float
    g0_over_kappa: float
    Gamma: float
    cooperativity: float
    source: str
    gamma_convention: str = CYCLIC


def coupling_report(eta: float, eta_star: float, chi_value: float, circuit: CircuitSpec,
                    cantilever: CantileverSpec, source: str, convention: str = CYCLIC) -> CouplingReport:
    """Assemble the coupling chain for one configuration."""
    phi = phi_sensitivity(circuit.flux_bias)
    g0 = single_photon_coupling(phi, circuit.omega0, eta)
    Gamma = mechanical_decoherence(cantilever, convention)
    kappa = circuit.kappa
    return CouplingReport(
        eta=eta, eta_star=eta_star, chi=chi_value, phi=phi, omega0=circuit.omega0, g0=g0,
        kappa=kappa, g0_over_kappa=coupling_ratio(phi, circuit.Q, eta), Gamma=Gamma,
        cooperativity=cooperativity(g0, kappa, Gamma), source=source, gamma_convention=convention,
    )
