"""Two antiparallel wires plus a uniform bias as a practical gradient source.

The wires run along x at (y, z) = (+z_w, -z_w/2) carrying +I_w and
(-z_w, -z_w/2) carrying -I_w. At the origin their field points along -z
with magnitude B_b = 4 mu0 I_w / (5 pi z_w); a uniform bias +B_b cancels it,
leaving a local quadrupole with gradient b = 16 mu0 I_w / (25 pi z_w^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import MU_0, DomainError, StripSpec
from .strip import StripState, b_field, corner_field

ALPHA = 0.72
"""Relative curvature of dBz/dz across the strip: 1 + ALPHA (2y/z_w)^2."""


@dataclass(frozen=True)
class WirePairSpec:
    """Wire current and geometry scale of the two-wire source.

    Attributes:
        I_w: Wire current in A.
        z_w: Geometry scale in m; wires sit at y = +-z_w, z = -z_w/2.
    """

    I_w: float
    z_w: float

    def __post_init__(self) -> None:
        if not (self.I_w > 0 and math.isfinite(self.I_w)):
            raise DomainError("wire current must be positive")
        if not (self.z_w > 0 and math.isfinite(self.z_w)):
            raise DomainError("wire scale must be positive")

    @property
    def B_b(self) -> float:
        return bias_field(self)

    def wires(self):
        """((y, z, current), ...) for both wires."""
        return ((self.z_w, -self.z_w / 2, self.I_w), (-self.z_w, -self.z_w / 2, -self.I_w))


def _scaled(y, z, spec: WirePairSpec):
    Y = np.asarray(y, dtype=float) / spec.z_w
    Z = np.asarray(z, dtype=float) / spec.z_w + 0.5
    return Y, Z


def wire_pair_field(y, z, spec: WirePairSpec):
    """Field (B_y, B_z) of the two wires in T.

    Raises:
        DomainError: At a wire position.
    """
    Y, Z = _scaled(y, z, spec)
    By = np.zeros(np.broadcast(Y, Z).shape)
    Bz = np.zeros_like(By)
    for j in (0, 1):
        s = (-1.0) ** j
        den = (Y - s) ** 2 + Z**2
        if np.any(den == 0):
            raise DomainError("field requested on a wire")
        By = By + s * (-Z / den)
        Bz = Bz + s * ((Y - s) / den)
    pref = MU_0 * spec.I_w / (2 * math.pi * spec.z_w)
    By, Bz = pref * By, pref * Bz
    if By.ndim == 0:
        return float(By), float(Bz)
    return By, Bz


def wire_pair_potential(y, z, spec: WirePairSpec):
    """Vector potential A_x of the wires, T m (zero on the symmetry plane)."""
    Y, Z = _scaled(y, z, spec)
    r2p = (Y - 1) ** 2 + Z**2
    r2m = (Y + 1) ** 2 + Z**2
    with np.errstate(divide="ignore"):
        out = -MU_0 * spec.I_w / (4 * math.pi) * np.log(r2p / r2m)
    return out if np.ndim(out) else float(out)


def field_gradient(y, z, spec: WirePairSpec):
    """Analytic dB_z/dz of the wires in T/m."""
    Y, Z = _scaled(y, z, spec)
    out = 0.0
    for j in (0, 1):
        s = (-1.0) ** j
        den = (Y - s) ** 2 + Z**2
        out = out + s * (-2.0 * (Y - s) * Z / den**2)
    out = MU_0 * spec.I_w / (2 * math.pi * spec.z_w**2) * out
    return out if np.ndim(out) else float(out)


def bias_field(spec: WirePairSpec) -> float:
    """Uniform bias that cancels the wire field at the origin, T."""
    return 4 * MU_0 * spec.I_w / (5 * math.pi * spec.z_w)


def gradient_at_origin(spec: WirePairSpec) -> float:
    """dB_z/dz of the wire pair at the origin, T/m."""
    return 16 * MU_0 * spec.I_w / (25 * math.pi * spec.z_w**2)


def z_w_for_gradient(I_w: float, b: float) -> float:
    """Geometry scale that gives gradient ``b`` at current ``I_w``."""
    if not (I_w > 0 and b > 0):
        raise DomainError("current and gradient must be positive")
    return math.sqrt(16 * MU_0 * I_w / (25 * math.pi * b))


def applied_field(y, z, spec: WirePairSpec):
    """Wires plus bias, (B_y, B_z) in T."""
    By, Bz = wire_pair_field(y, z, spec)
    return By, Bz + bias_field(spec)


def gradient_inhomogeneity(w: float, spec: WirePairSpec):
    """Relative change of dB_z/dz between the strip centre and its edge.

    Returns:
        (series, exact): ALPHA (w / z_w)^2 and the value computed from the
        wire field at y = w/2.
    """
    if w <= 0:
        raise DomainError("strip width must be positive")
    series = ALPHA * (w / spec.z_w) ** 2
    exact = field_gradient(w / 2, 0.0, spec) / gradient_at_origin(spec) - 1.0
    return series, float(exact)


def width_for_inhomogeneity(epsilon: float, spec: WirePairSpec) -> float:
    """Largest strip width keeping the series inhomogeneity below ``epsilon``."""
    if epsilon < 0:
        raise DomainError("tolerance must be non-negative")
    return spec.z_w * math.sqrt(epsilon / ALPHA)


def total_field_with_strip(y, z, spec: WirePairSpec, state: StripState, strip: StripSpec,
                           b: float | None = None):
    """|B| of wires, bias and the strip's screening currents, T.

    The strip responds to the local gradient ``b`` (by default the wire
    pair's gradient at the origin) at the offset ``state.z_m``.
    """
    grad = gradient_at_origin(spec) if b is None else b
    local = StripState(state.z_m, grad, state.mode)
    By, Bz = applied_field(y, z, spec)
    Ky, Kz = b_field(y, z, local, strip)
    out = np.hypot(np.asarray(By) + Ky, np.asarray(Bz) + Kz)
    return out if np.ndim(out) else float(out)


def is_subcritical(strip: StripSpec, b: float) -> bool:
    """Whether the corner field at gradient ``b`` stays below B_c."""
    return corner_field(strip, b) < strip.B_c
