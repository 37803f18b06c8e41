"""Physical parameters of the strip, cantilever and pick-up coil.

The containers here are plain frozen dataclasses holding SI values. They
check the basic invariants on construction and raise :class:`DomainError`
when a value is physically meaningless (negative width, and so on).
Whether a configuration is *inside the validity window of the thin-film
Meissner model* is a softer question, answered by :func:`validate_strip`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.constants import e, h, hbar, k as k_B, mu_0

FLUX_QUANTUM = h / (2 * e)
"""Superconducting flux quantum h/2e in Wb."""

MU_0 = mu_0
HBAR = hbar
K_B = k_B


class DomainError(ValueError):
    """An input lies outside the domain where a formula is defined."""


class ConfigurationError(ValueError):
    """A configuration is inconsistent or too degenerate to compute with."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge or produced non-finite output."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)


def _finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class StripSpec:
    """Superconducting strip on top of the cantilever.

    Attributes:
        L: Strip length along x in m.
        w: Strip width along y in m.
        t: Film thickness in m.
        B_c: Critical field in T.
        rho: Mass density in kg/m^3.
        lambda_L: London penetration depth in m.
        xi: Coherence length in m.
    """

    L: float
    w: float
    t: float
    B_c: float
    rho: float
    lambda_L: float
    xi: float

    def __post_init__(self) -> None:
        _finite(L=self.L, w=self.w, t=self.t, B_c=self.B_c, rho=self.rho,
                lambda_L=self.lambda_L, xi=self.xi)
        _require(self.t > 0, f"thickness must be positive, got {self.t!r}")
        _require(self.w >= self.t, "strip width must not be smaller than its thickness")
        _require(self.L >= self.w, "strip length must not be smaller than its width")
        _require(self.B_c > 0, "critical field must be positive")
        _require(self.rho > 0, "density must be positive")
        _require(self.lambda_L >= 0, "penetration depth must be non-negative")
        _require(self.xi > 0, "coherence length must be positive")

    @property
    def pearl_length(self) -> float:
        """Thin-film screening length lambda_L**2 / t."""
        return self.lambda_L**2 / self.t


@dataclass(frozen=True)
class CantileverSpec:
    """Mechanical substrate carrying the strip.

    Attributes:
        t0: Substrate thickness in m (zero for a free-standing strip).
        rho0: Substrate density in kg/m^3.
        Omega: Angular mechanical frequency in rad/s.
        gamma: Angular energy damping rate in rad/s.
        T: Bath temperature in K.
    """

    t0: float
    rho0: float
    Omega: float
    gamma: float
    T: float

    def __post_init__(self) -> None:
        _finite(t0=self.t0, rho0=self.rho0, Omega=self.Omega, gamma=self.gamma, T=self.T)
        _require(self.t0 >= 0, "substrate thickness must be non-negative")
        _require(self.rho0 >= 0, "substrate density must be non-negative")
        _require(self.Omega > 0, "mechanical frequency must be positive")
        _require(self.gamma > 0, "mechanical damping must be positive")
        _require(self.T >= 0, "temperature must be non-negative")

    @property
    def quality_factor(self) -> float:
        return self.Omega / self.gamma


@dataclass(frozen=True)
class CoilSpec:
    """Rectangular pick-up loop centred above the strip.

    Attributes:
        z_c: Height of the loop plane above the strip in m.
        w_c: Loop width along y in m.
        L_c: Loop length along x in m.
    """

    z_c: float
    w_c: float
    L_c: float

    def __post_init__(self) -> None:
        _finite(z_c=self.z_c, w_c=self.w_c, L_c=self.L_c)
        _require(self.z_c > 0, "coil height must be positive")
        _require(self.w_c > 0, "coil width must be positive")
        _require(self.L_c > 0, "coil length must be positive")


@dataclass(frozen=True)
class Check:
    """Outcome of one validity check.

    ``relation`` tells how ``ratio`` is compared with ``threshold``.
    """

    name: str
    passed: bool
    ratio: float
    threshold: float
    relation: str
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def validate_strip(
    strip: StripSpec,
    thin_ratio: float = 0.1,
    screening_ratio: float = 0.1,
    min_aspect: float = 10.0,
) -> ValidationReport:
    """Check the assumptions behind the thin-film Meissner description.

    Four checks are made. The film must be thin (t/w small), screening
    must be strong (either lambda_L/t or the Pearl length over w small),
    the film must be thicker than the coherence length, and the strip
    must be long compared with its width. Failing checks are reported,
    never raised.

    Args:
        strip: Strip parameters.
        thin_ratio: Upper bound on t/w.
        screening_ratio: Upper bound on min(lambda_L/t, Lambda/w).
        min_aspect: Lower bound on L/w.

    Returns:
        A report with one :class:`Check` per condition.
    """
    t_over_w = strip.t / strip.w
    lam_over_t = strip.lambda_L / strip.t
    pearl_over_w = strip.pearl_length / strip.w
    screen = min(lam_over_t, pearl_over_w)
    which = "lambda_L/t" if lam_over_t <= pearl_over_w else "Lambda/w"
    xi_over_t = strip.xi / strip.t
    aspect = strip.L / strip.w
    checks = (
        Check("thin_film", t_over_w <= thin_ratio, t_over_w, thin_ratio, "<=", "t/w"),
        Check("screening", screen <= screening_ratio, screen, screening_ratio, "<=", which),
        Check("coherence", xi_over_t < 1.0, xi_over_t, 1.0, "<", "xi/t"),
        Check("long_strip", aspect >= min_aspect, aspect, min_aspect, ">=", "L/w"),
    )
    return ValidationReport(checks)


def effective_mass(strip: StripSpec, cantilever: CantileverSpec) -> float:
    """Mass of the strip plus the substrate under it, in kg."""
    return strip.L * strip.w * (strip.rho * strip.t + cantilever.rho0 * cantilever.t0)


def zero_point_motion(mass: float, Omega: float) -> float:
    """Zero-point amplitude sqrt(hbar / (2 M Omega)) in m."""
    if not (mass > 0 and Omega > 0):
        raise DomainError("mass and frequency must be positive")
    return math.sqrt(HBAR / (2.0 * mass * Omega))
