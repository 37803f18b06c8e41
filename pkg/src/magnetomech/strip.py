"""Closed-form magnetostatics of a long thin strip in the Meissner state.

The strip occupies |y| < w/2 at height z_m and is infinitely long along x.
In a quadrupole field b(-y, z) the strip sees, at leading order in t/w, a
uniform out-of-plane field b z_m and screens it with the sheet current

    K_x(y) = (b z_m / mu0) 2y / sqrt((w/2)^2 - y^2).

Everything below follows from the complex potential
F(s) = sign(y) sqrt(s^2 - (w/2)^2), s = y + i (z - z_m), which behaves
like s far from the strip. The vector potential of the screening currents
is A_x = B0 (y - Re F) and the field components come from F' = s / F,
with B0 = b z_m (quadrupole) or B_a (homogeneous).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .domain import (
    FLUX_QUANTUM,
    HBAR,
    MU_0,
    CantileverSpec,
    CoilSpec,
    DomainError,
    NumericalError,
    StripSpec,
    effective_mass,
    zero_point_motion,
)

QUADRUPOLE = "quadrupole"
HOMOGENEOUS = "homogeneous"
_MODES = (QUADRUPOLE, HOMOGENEOUS)


@dataclass(frozen=True)
class StripState:
    """Strip displacement and the amplitude of the applied field.

    Attributes:
        z_m: Vertical displacement of the strip in m.
        b: Field gradient in T/m in quadrupole mode, uniform field B_a in T
            in homogeneous mode.
        mode: "quadrupole" or "homogeneous".
    """

    z_m: float
    b: float
    mode: str = QUADRUPOLE

    def __post_init__(self) -> None:
        if self.mode not in _MODES:
            raise DomainError(f"unknown field mode {self.mode!r}")
        if not (math.isfinite(self.z_m) and math.isfinite(self.b)):
            raise DomainError("z_m and field amplitude must be finite")

    @property
    def screened_field(self) -> float:
        """Uniform out-of-plane field the strip screens, in T."""
        return self.b * self.z_m if self.mode == QUADRUPOLE else self.b


def _complex(re, im):
    # Built component-wise so the sign of a zero imaginary part survives;
    # it selects the correct side of the square-root branch cut on y = 0.
    out = np.empty(np.broadcast(re, im).shape, dtype=complex)
    out.real = re
    out.imag = im
    return out


def _potential(y, d, half_width):
    """Return (s, F) for s = y + i d, F = sign(y) sqrt(s^2 - a^2)."""
    y = np.asarray(y, dtype=float)
    d = np.asarray(d, dtype=float)
    s = _complex(y, d)
    root = np.sqrt(_complex(y * y - d * d - half_width**2, 2.0 * y * d))
    sign = np.copysign(1.0, y)
    return s, sign * root


def sheet_current(y, state: StripState, strip: StripSpec):
    """Screening sheet current K_x(y) in A/m.

    Args:
        y: Transverse position(s) in m, strictly inside the strip.
        state: Strip displacement and field amplitude.
        strip: Strip geometry.

    Raises:
        DomainError: If any |y| >= w/2.
    """
    y = np.asarray(y, dtype=float)
    a = strip.w / 2
    if np.any(np.abs(y) >= a):
        raise DomainError("sheet current is only defined for |y| < w/2")
    out = state.screened_field / MU_0 * 2.0 * y / np.sqrt(a * a - y * y)
    return out if out.ndim else float(out)


def vector_potential(y, z, state: StripState, strip: StripSpec):
    """x-component of the vector potential of the screening currents, T m.

    Continuous everywhere, including across the strip itself where it
    equals B0 * y. The value on y = 0 is zero.
    """
    a = strip.w / 2
    _, F = _potential(y, np.asarray(z, dtype=float) - state.z_m, a)
    out = state.screened_field * (np.asarray(y, dtype=float) - F.real)
    return out if out.ndim else float(out)


def on_cut(y, z, state: StripState, strip: StripSpec):
    """True where (y, z) lies on the current sheet, edges included."""
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    return (z == state.z_m) & (np.abs(y) <= strip.w / 2)


def b_field(y, z, state: StripState, strip: StripSpec):
    """Field (B_y, B_z) of the screening currents in T.

    Uses the analytic derivative of the complex potential.

    Raises:
        DomainError: If a point lies on the current sheet.
    """
    if np.any(on_cut(y, z, state, strip)):
        raise DomainError("field is undefined on the current sheet")
    s, F = _potential(y, np.asarray(z, dtype=float) - state.z_m, strip.w / 2)
    dF = s / F
    B0 = state.screened_field
    By = B0 * dF.imag
    Bz = -B0 * (1.0 - dF.real)
    if np.ndim(By) == 0:
        return float(By), float(Bz)
    return By, Bz


def vector_potential_quadrature(y, z, current, half_width, z_m=0.0, epsabs=0.0, epsrel=1e-11):
    """Vector potential of an arbitrary sheet current by filament summation.

    Each filament contributes -(mu0 dI / 2 pi) ln r. The inverse square-root
    edge divergence of Meissner currents is removed by y' = a sin(theta).
    The additive gauge constant is fixed so that the potential of an odd
    current vanishes on y = 0.

    Args:
        y, z: Field point in m (scalars).
        current: Callable K_x(y') in A/m, defined on (-a, a).
        half_width: a = w/2 in m.
        z_m: Height of the sheet.

    Raises:
        NumericalError: If QUADPACK reports a poor estimate.
    """
    a = half_width
    d2 = (z - z_m) ** 2

    def integrand(theta):
        yp = a * math.sin(theta)
        # ln r^2 relative to the mirrored filament: odd currents have zero net
        # flux through y = 0, so this fixes the gauge without a reference point
        num = (y - yp) ** 2 + d2
        den = (y + yp) ** 2 + d2
        return current(yp) * a * math.cos(theta) * 0.5 * math.log(num / den)

    pts = []
    if abs(y) < a and d2 == 0.0:
        pts = [math.asin(y / a), -math.asin(y / a)]
    value, err = integrate.quad(integrand, 0.0, math.pi / 2, epsabs=epsabs, epsrel=epsrel,
                                limit=400, points=pts or None)
    if not math.isfinite(value) or err > max(1e-7 * abs(value), 1e-300):
        raise NumericalError(f"filament quadrature did not converge (value={value}, err={err})")
    return -MU_0 / (2 * math.pi) * value


def pickup_flux(coil: CoilSpec, state: StripState, strip: StripSpec) -> float:
    """Flux of the screening currents through the pick-up coil, Wb.

    The coil loop is taken clockwise seen from above so that the flux is
    2 L_c A_x(w_c/2, z_c), positive for a positive gradient and offset.
    """
    if coil.z_c <= strip.t / 2:
        raise DomainError("coil must sit above the strip surface")
    return 2.0 * coil.L_c * vector_potential(coil.w_c / 2, coil.z_c, state, strip)


def chi(wc_over_w, zc_over_w):
    """Geometric coupling factor of the quadrupole configuration, in (0, 1)."""
    wc = np.asarray(wc_over_w, dtype=float)
    zc = np.asarray(zc_over_w, dtype=float)
    if np.any(wc <= 0) or np.any(zc <= 0):
        raise DomainError("coil width and height must be positive")
    out = wc - np.sqrt(_complex(wc * wc - 4 * zc * zc - 1.0, 4 * wc * zc)).real
    return out if out.ndim else float(out)


def homogeneous_factor(wc_over_w, zc_over_w):
    """Re{(-2x + i u) / sqrt((u + 2 i x)^2 - 1)} with u = w_c/w, x = z_c/w.

    The homogeneous-field coupling is eta = (2 B_a L_c z_zp / Phi0) times this.
    """
    u = np.asarray(wc_over_w, dtype=float)
    x = np.asarray(zc_over_w, dtype=float)
    root = np.sqrt(_complex(u * u - 4 * x * x - 1.0, 4 * u * x))
    out = (_complex(-2 * x, u) / root).real
    return out if out.ndim else float(out)


def homogeneous_optimal_width(x):
    """Closed-form optimal w_c/w for a uniform applied field."""
    x = np.asarray(x, dtype=float)
    out = np.sqrt((3 + 20 * x * x - 4 * x * np.sqrt(3 + 16 * x * x)) / 3)
    return out if out.ndim else float(out)


def field_null_width(zc_over_w: float) -> float:
    """w_c/w at which the strip's B_z vanishes at the coil wires.

    Root of 1 - Re F'(w_c/2 + i z_c) on the outward branch. This is where the
    coil's long wires lie on the B_z = 0 field line.
    """
    if zc_over_w <= 0:
        raise DomainError("coil height must be positive")

    def bz(u):
        s = complex(u / 2, zc_over_w)
        return 1.0 - (s / np.sqrt(s * s - 0.25)).real

    hi = 10.0 * (1.0 + zc_over_w)
    return float(optimize.brentq(bz, 1e-6, hi, xtol=1e-14, rtol=1e-14))


def optimal_coil_width(zc_over_w: float, mode: str = QUADRUPOLE, xatol: float = 1e-10) -> float:
    """Coil width (in units of w) that maximises the coupling at height z_c/w.

    Quadrupole mode maximises chi by bounded Brent search over
    [1, 10 (1 + z_c/w)], continued below 1 when the maximum sits on the
    lower bound (low coils); homogeneous mode uses the closed form.
    """
    if not zc_over_w > 0:
        raise DomainError("coil height must be positive")
    if mode == HOMOGENEOUS:
        return homogeneous_optimal_width(zc_over_w)
    if mode != QUADRUPOLE:
        raise DomainError(f"unknown field mode {mode!r}")
    def search(lo, hi):
        res = optimize.minimize_scalar(lambda u: -chi(u, zc_over_w), bounds=(lo, hi),
                                       method="bounded", options={"xatol": xatol, "maxiter": 500})
        if not res.success:
            raise NumericalError(f"coil width optimisation failed: {res.message}")
        return float(res.x)

    u = search(1.0, 10.0 * (1.0 + zc_over_w))
    # below z_c/w ~ 0.27 the best coil is narrower than the strip
    if u - 1.0 < 1e3 * xatol and chi(1.0 - 1e-6, zc_over_w) > chi(1.0, zc_over_w):
        u = search(1e-6, 1.0)
    return u


def corner_factor(t_over_w):
    """f(x) = [1 + (sqrt(2x) + x)(1 + x)]^(-1/2)."""
    x = np.asarray(t_over_w, dtype=float)
    out = 1.0 / np.sqrt(1.0 + (np.sqrt(2 * x) + x) * (1 + x))
    return out if out.ndim else float(out)


def corner_field(strip: StripSpec, b: float) -> float:
    """|B_a + B_K| at the strip corner (w/2, t/2) for gradient b, in T.

    The screening field near the edge is estimated as
    sqrt(w/2t) (b t/2)(z - y), the thin-film edge enhancement.
    """
    s = math.sqrt(strip.w / (2 * strip.t))
    By = -b * strip.w / 2 - s * b * strip.t / 2
    Bz = b * strip.t / 2 + s * b * strip.t / 2
    return math.hypot(By, Bz)


def max_gradient(strip: StripSpec) -> float:
    """Largest quadrupole gradient that keeps the strip below B_c, T/m."""
    return corner_factor(strip.t / strip.w) * 2 * strip.B_c / strip.w


def max_homogeneous_field(strip: StripSpec, convention: str = "edge") -> float:
    """Largest uniform perpendicular field before the edges reach B_c, T.

    Args:
        strip: Strip parameters.
        convention: "edge" gives sqrt(2t/w) B_c, the thin-strip edge-field
            criterion. "corner" applies the corner estimate used for the
            gradient (sqrt(w/2t) enhancement on both field components) to a
            uniform field and keeps the leading order in t/w, which gives
            sqrt(t/w) B_c.
    """
    x = strip.t / strip.w
    if convention == "edge":
        return math.sqrt(2 * x) * strip.B_c
    if convention == "corner":
        return math.sqrt(x) * strip.B_c
    raise DomainError(f"unknown convention {convention!r}")


def eta_star(z_zp: float, b: float, L_c: float, w: float) -> float:
    """Upper bound z_zp b L_c w / Phi0 of the quadrupole coupling."""
    return z_zp * b * L_c * w / FLUX_QUANTUM


def eta_star_max(strip: StripSpec, cantilever: CantileverSpec, L_c: float | None = None) -> float:
    """eta_star at the maximum gradient, written in material parameters.

    Equivalent to eta_star(z_zp, max_gradient(strip), L_c, w) but evaluated
    from the densities and thicknesses directly.
    """
    L_c = strip.L if L_c is None else L_c
    rt = strip.rho * strip.t
    tot = rt + cantilever.rho0 * cantilever.t0
    f = corner_factor(strip.t / strip.w)
    return (2 * strip.B_c / FLUX_QUANTUM * f
            * math.sqrt(rt / tot * HBAR / (2 * strip.rho * cantilever.Omega))
            * math.sqrt(L_c / (strip.t * strip.w)))


def eta(strip: StripSpec, cantilever: CantileverSpec, coil: CoilSpec, amplitude: float,
        mode: str = QUADRUPOLE) -> float:
    """Linear magnetomechanical coupling eta = (z_zp / Phi0) dPhi/dz_m.

    Args:
        strip, cantilever, coil: System description.
        amplitude: Gradient b in T/m (quadrupole) or B_a in T (homogeneous).
        mode: "quadrupole" or "homogeneous".
    """
    z_zp = zero_point_motion(effective_mass(strip, cantilever), cantilever.Omega)
    u = coil.w_c / strip.w
    x = coil.z_c / strip.w
    if mode == QUADRUPOLE:
        return eta_star(z_zp, amplitude, coil.L_c, strip.w) * chi(u, x)
    if mode == HOMOGENEOUS:
        return 2 * amplitude * coil.L_c * z_zp / FLUX_QUANTUM * homogeneous_factor(u, x)
    raise DomainError(f"unknown field mode {mode!r}")
