"""Screening currents and coupling of a strip with finite Pearl length.

When the Pearl length Lambda = lambda_L^2 / t is not negligible, the
edge divergence of the Meissner current is smeared out and less flux
reaches the pick-up coil. Two current models are available.

* ``"london"`` solves the thin-film London equation for a uniform
  perpendicular field,

      Lambda K(y) - (1 / 2 pi) int K(y') ln|y - y'| dy' = B_a y / mu0 + c,

  with piecewise-constant K on cosine-graded panels (c = 0 by symmetry).
* ``"approximate"`` uses the interpolation formula with the fitted
  functions h1 and h2 (:func:`sheet_current_finite_lambda`).

The coupling ratio eta_Lambda / eta only depends on geometry because the
sheet current is linear in the screened field.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .domain import MU_0, CoilSpec, DomainError, NumericalError, StripSpec
from .strip import vector_potential_quadrature

LONDON = "london"
APPROXIMATE = "approximate"


def h1(x):
    return 0.25 - 0.63 * np.sqrt(x) + 1.2 * np.power(x, 0.8)


def h2(x):
    return 0.5 * math.pi + x


def sheet_current_finite_lambda(y, B_a: float, strip: StripSpec, pearl_length: float | None = None):
    """Interpolated sheet current of a strip with finite Pearl length, A/m.

    Args:
        y: Transverse position(s) with |y| <= w/2.
        B_a: Uniform perpendicular field in T.
        strip: Strip parameters.
        pearl_length: Overrides ``strip.pearl_length`` when given.

    Raises:
        DomainError: If |y| > w/2, or |y| = w/2 with zero Pearl length.
    """
    lam = strip.pearl_length if pearl_length is None else pearl_length
    if lam < 0:
        raise DomainError("Pearl length must be non-negative")
    y = np.asarray(y, dtype=float)
    a = strip.w / 2
    if np.any(np.abs(y) > a) or (lam == 0 and np.any(np.abs(y) >= a)):
        raise DomainError("sheet current requested outside the strip")
    x = lam / strip.w
    if lam == 0:
        out = B_a / MU_0 * 2.0 * y / np.sqrt(a * a - y * y)
    else:
        out = B_a / MU_0 * y / np.sqrt(h1(x) * (a * a - y * y) + h2(x) * lam * strip.w)
    return out if out.ndim else float(out)


def _panel_log(u):
    # antiderivative of ln|u|
    au = np.abs(u)
    safe = np.where(au == 0.0, 1.0, au)
    return np.where(au == 0.0, 0.0, u * np.log(safe) - u)


def london_sheet_current(lambda_over_w: float, n: int = 1000):
    """Solve the thin-film London equation for a unit strip in a uniform field.

    Lengths are in units of w and the field is chosen so that B_a / mu0 = 1.
    The Meissner limit of this normalisation is 2y / sqrt(1/4 - y^2).

    Args:
        lambda_over_w: Pearl length over strip width, >= 0.
        n: Number of panels, graded as (1/2) sin(theta) with uniform theta.

    Returns:
        (edges, K): panel edges (n + 1,) and panel currents (n,).
    """
    if lambda_over_w < 0:
        raise DomainError("Pearl length must be non-negative")
    if n < 8:
        raise DomainError("need at least 8 panels")
    theta = np.linspace(-0.5 * math.pi, 0.5 * math.pi, n + 1)
    edges = 0.5 * np.sin(theta)
    edges[0], edges[-1] = -0.5, 0.5
    mid = 0.5 * (edges[1:] + edges[:-1])
    G = _panel_log(mid[:, None] - edges[None, :-1]) - _panel_log(mid[:, None] - edges[None, 1:])
    A = lambda_over_w * np.eye(n) - G / (2 * math.pi)
    try:
        K = np.linalg.solve(A, mid)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"London system is singular: {exc}") from exc
    if not np.all(np.isfinite(K)):
        raise NumericalError("London solve produced non-finite currents")
    return edges, K


def _panel_flux(edges, K, y, z, order: int = 6) -> float:
    """int K(y') ln[((y - y')^2 + z^2) / ((y + y')^2 + z^2)] dy' over the panels."""
    g, wq = np.polynomial.legendre.leggauss(order)
    h = np.diff(edges)
    s = 0.5 * (edges[:-1, None] + edges[1:, None]) + 0.5 * h[:, None] * g[None, :]
    f = np.log(((y - s) ** 2 + z * z) / ((y + s) ** 2 + z * z))
    return float(np.sum(K * 0.5 * h * (f @ wq)))


def _approximate_ratio(x: float, u: float, zc: float) -> float:
    if x == 0:
        return 1.0
    strip = StripSpec(L=1.0, w=1.0, t=1.0, B_c=1.0, rho=1.0, lambda_L=0.0, xi=0.5)

    def meissner(yp):
        return 2.0 * yp / math.sqrt(0.25 - yp * yp)

    # the finite-Lambda current is smooth, so integrate it in y directly
    def integrand(yp):
        K = sheet_current_finite_lambda(yp, MU_0, strip, pearl_length=x)
        return K * 0.5 * math.log(((u / 2 - yp) ** 2 + zc * zc) / ((u / 2 + yp) ** 2 + zc * zc))

    val, err = integrate.quad(integrand, 0.0, 0.5, epsabs=0.0, epsrel=1e-11, limit=400)
    if not math.isfinite(val) or err > 1e-8 * abs(val):
        raise NumericalError(f"coil flux quadrature did not converge (value={val}, err={err})")
    A_lam = -MU_0 / (2 * math.pi) * val
    A_0 = vector_potential_quadrature(u / 2, zc, meissner, 0.5)
    return A_lam / A_0


def eta_lambda_ratio(lambda_over_w: float, coil: CoilSpec, strip: StripSpec,
                     model: str = LONDON, n: int = 1000) -> float:
    """Coupling with finite Pearl length relative to the Meissner value.

    Args:
        lambda_over_w: Pearl length over strip width.
        coil: Pick-up coil; only w_c/w and z_c/w matter.
        strip: Supplies the width.
        model: "london" (integral-equation solve, default) or "approximate".
        n: Panel count for the London solve.

    Returns:
        eta_Lambda / eta, exactly 1 for zero Pearl length.

    Raises:
        DomainError: For negative Pearl length.
        NumericalError: If the flux integration fails.
    """
    if lambda_over_w < 0 or not math.isfinite(lambda_over_w):
        raise DomainError("Pearl length must be non-negative and finite")
    if lambda_over_w == 0:
        return 1.0
    u = coil.w_c / strip.w
    zc = coil.z_c / strip.w
    if model == APPROXIMATE:
        return _approximate_ratio(lambda_over_w, u, zc)
    if model != LONDON:
        raise DomainError(f"unknown screening model {model!r}")
    edges0, K0 = london_sheet_current(0.0, n)
    edges, K = london_sheet_current(lambda_over_w, n)
    # same mesh for both so the discretisation error cancels in the ratio
    f0 = _panel_flux(edges0, K0, u / 2, zc)
    f = _panel_flux(edges, K, u / 2, zc)
    if f0 == 0 or not math.isfinite(f / f0):
        raise NumericalError("flux of the reference solution vanished")
    return f / f0
