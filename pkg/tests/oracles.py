"""Independent reference computations used only by the tests.

Nothing here imports the closed forms under test. Each oracle goes back to
Biot-Savart or Neumann integrals and evaluates them with general-purpose
quadrature.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate
from scipy.constants import mu_0

def meissner_density(B0: float, a: float):
    """K(y') / (a - y')^(-1/2)(a + y')^(-1/2) for the Meissner strip.

    With QUADPACK's algebraic weight the edge singularity is handled exactly,
    without the angle substitution used in the library.
    """
    return lambda yp: (B0 / mu_0) * 2.0 * yp


def _alg(f, a, scale):
    # absolute floor for integrands that vanish by symmetry
    val, _ = integrate.quad(f, -a, a, weight="alg", wvar=(-0.5, -0.5), epsabs=1e-13 * scale,
                            epsrel=1e-11, limit=200)
    return val


def strip_potential(y: float, z: float, B0: float, a: float, z_m: float = 0.0) -> float:
    """A_x of the Meissner sheet current summed over line filaments.

    A = -(mu0 / 2 pi) int K ln r dy' + C. The constant is fixed by the
    requirement that the response vanishes far away, which for an odd
    current is A(0, z) = 0.
    """
    d2 = (z - z_m) ** 2
    k = meissner_density(B0, a)
    f = lambda yp: k(yp) * 0.5 * math.log((y - yp) ** 2 + d2)
    return -mu_0 / (2 * math.pi) * _alg(f, a, abs(B0) / mu_0 * a * (1 + abs(math.log(a))))


def strip_field(y: float, z: float, B0: float, a: float, z_m: float = 0.0):
    """(B_y, B_z) of the Meissner sheet from the Biot-Savart line-current law."""
    d = z - z_m
    k = meissner_density(B0, a)
    # an x-directed filament at (y', z_m) gives B = mu0 I / (2 pi r^2) (-d, y - y')
    fy = lambda yp: k(yp) * (-d) / ((y - yp) ** 2 + d * d)
    fz = lambda yp: k(yp) * (y - yp) / ((y - yp) ** 2 + d * d)
    pref = mu_0 / (2 * math.pi)
    scale = abs(B0) / mu_0
    return pref * _alg(fy, a, scale), pref * _alg(fz, a, scale)


def coil_flux(L_c: float, w_c: float, z_c: float, B0: float, a: float, z_m: float = 0.0) -> float:
    """Flux of the sheet's field through a coil of length L_c and width w_c.

    The coil is traversed clockwise seen from +z, so the flux is minus
    L_c times the integral of B_z across the coil.
    """
    f = lambda y: strip_field(y, z_c, B0, a, z_m)[1]
    val, _ = integrate.quad(f, -w_c / 2, w_c / 2, epsabs=0.0, epsrel=1e-10, limit=100)
    return -L_c * val


def neumann_parallel(p1, p2, q1, q2) -> float:
    """mu0/4pi * int int ds1 . ds2 / r for two straight segments, numerically."""
    p1, p2, q1, q2 = (np.asarray(v, dtype=float) for v in (p1, p2, q1, q2))
    t1, t2 = p2 - p1, q2 - q1

    def f(s, u):
        r = np.linalg.norm(p1 + s * t1 - (q1 + u * t2))
        return 1.0 / r

    val, _ = integrate.dblquad(f, 0.0, 1.0, 0.0, 1.0, epsabs=0.0, epsrel=1e-12)
    return mu_0 / (4 * math.pi) * float(np.dot(t1, t2)) * val


def rectangle_edges(xc, yc, dx, dy, z):
    """Counterclockwise edges of an axis-aligned rectangle as (start, end) pairs."""
    c = [(xc - dx / 2, yc - dy / 2, z), (xc + dx / 2, yc - dy / 2, z),
         (xc + dx / 2, yc + dy / 2, z), (xc - dx / 2, yc + dy / 2, z)]
    return [(c[i], c[(i + 1) % 4]) for i in range(4)]


def loop_mutual_neumann(loop1, loop2) -> float:
    """Mutual inductance of two rectangles ((xc, yc, dx, dy, z) each)."""
    total = 0.0
    for a1, a2 in rectangle_edges(*loop1):
        for b1, b2 in rectangle_edges(*loop2):
            ta = np.subtract(a2, a1)
            tb = np.subtract(b2, b1)
            if abs(np.dot(ta, tb)) == 0.0:
                continue
            total += neumann_parallel(a1, a2, b1, b2)
    return total


def wire_field(y, z, wires):
    """(B_y, B_z) of infinite straight x-directed wires ((y, z, I), ...)."""
    By = Bz = 0.0
    for yw, zw, I in wires:
        dy, dz = y - yw, z - zw
        r2 = dy * dy + dz * dz
        # B = mu0 I / (2 pi r) phi_hat, with x-hat cross r-hat = (-dz, dy) / r
        By += mu_0 * I / (2 * math.pi) * (-dz) / r2
        Bz += mu_0 * I / (2 * math.pi) * dy / r2
    return By, Bz


def richardson_derivative(f, x: float, h: float) -> float:
    """Central difference with one Richardson step, error O(h^4)."""
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3
