"""Magnetic energy minimisation for a strip of finite length.

The strip is tiled with nx x ny equal rectangular cells. Each cell carries
a circulating current I (a discrete stream function), so current is
conserved and no net transport current flows. For a uniform applied field
B0 the Meissner state minimises

    E = 1/2 I^T C I + I^T Phi_a,

where C holds the mutual inductances between cell loops and Phi_a the
applied flux through each cell. The minimiser makes the total flux through
every cell vanish, C I = -Phi_a.

Mutual inductances come from the Neumann integral evaluated in closed form
for parallel straight segments. Coincident segments (a loop's own edges and
the shared edge of neighbouring cells) are regularised with an effective
filament radius. On a uniform grid C depends only on the index offset
between cells, so it is stored as a small table and applied with FFTs;
conjugate gradients then solve grids with 10^5 cells in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import fft, linalg

from .domain import (
    FLUX_QUANTUM,
    MU_0,
    CantileverSpec,
    CoilSpec,
    ConfigurationError,
    DomainError,
    NumericalError,
    StripSpec,
    effective_mass,
    zero_point_motion,
)
from .strip import chi

GMD_FACTOR = 0.2235
"""Geometric-mean distance of a thin flat band, in units of its width."""


@dataclass(frozen=True)
class MemGrid:
    """Uniform cell tiling of [-L/2, L/2] x [-w/2, w/2]."""

    nx: int
    ny: int
    length: float
    width: float

    def __post_init__(self) -> None:
        if self.nx < 2 or self.ny < 2:
            raise DomainError("grid needs at least 2 cells in each direction")
        if not (self.length > 0 and self.width > 0):
            raise DomainError("strip dimensions must be positive")

    @classmethod
    def for_cells(cls, n_cells: int, length: float, width: float, aspect: float = 2.0) -> MemGrid:
        """Grid with about ``n_cells`` cells of shape dx / dy close to ``aspect``."""
        if n_cells < 4 or aspect <= 0:
            raise DomainError("need at least 4 cells and a positive aspect ratio")
        ny = max(2, int(round(math.sqrt(n_cells * aspect * width / length))))
        nx = max(2, int(round(n_cells / ny)))
        return cls(nx, ny, length, width)

    @property
    def dx(self) -> float:
        return self.length / self.nx

    @property
    def dy(self) -> float:
        return self.width / self.ny

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny

    def centers(self):
        """Cell-centre coordinates as (nx, ny) arrays."""
        xc = -self.length / 2 + (np.arange(self.nx) + 0.5) * self.dx
        yc = -self.width / 2 + (np.arange(self.ny) + 0.5) * self.dy
        return np.meshgrid(xc, yc, indexing="ij")


def _g(u, d):
    # Antiderivative of the Neumann integrand for parallel segments at
    # distance d; d = 0 uses the finite part, valid for disjoint segments.
    u = np.abs(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        pos = u * np.arcsinh(u / np.where(d > 0, d, 1.0)) - np.sqrt(u * u + d * d)
        zero = np.where(u > 0, u * np.log(np.where(u > 0, 2.0 * u, 1.0)) - u, 0.0)
    return np.where(d > 0, pos, zero)


def segment_mutual(a1, a2, b1, b2, d):
    """Mutual inductance of parallel segments [a1, a2] and [b1, b2], H.

    Both segments point along +s and lie a distance d apart. Overlapping
    segments at d = 0 diverge; callers regularise d first.
    """
    return MU_0 / (4 * math.pi) * (_g(a2 - b1, d) - _g(a2 - b2, d) - _g(a1 - b1, d) + _g(a1 - b2, d))


def loop_mutual(x1, y1, dx1, dy1, x2, y2, dx2, dy2, dz, reff_x=0.0, reff_y=0.0):
    """Mutual inductance of two axis-aligned rectangular loops, H.

    Loops are centred at (x, y), have sides dx by dy, run counterclockwise
    seen from +z, and lie in planes dz apart. Where two parallel edges
    coincide, the distance is replaced by ``reff_x`` (edges along x) or
    ``reff_y`` (edges along y). Arguments broadcast.
    """
    x1, y1, x2, y2 = (np.asarray(v, dtype=float) for v in (x1, y1, x2, y2))
    M = 0.0
    # edges along x: bottom runs +x, top runs -x
    ax1, ax2 = x1 - dx1 / 2, x1 + dx1 / 2
    bx1, bx2 = x2 - dx2 / 2, x2 + dx2 / 2
    overlap_x = np.minimum(ax2, bx2) - np.maximum(ax1, bx1)
    for s1, o1 in ((1.0, -dy1 / 2), (-1.0, dy1 / 2)):
        for s2, o2 in ((1.0, -dy2 / 2), (-1.0, dy2 / 2)):
            d = np.hypot((y1 + o1) - (y2 + o2), dz)
            hit = (d <= 1e-12 * (dy1 + dy2)) & (overlap_x > 0)
            d = np.where(hit, reff_x, d)
            M = M + s1 * s2 * segment_mutual(ax1, ax2, bx1, bx2, d)
    # edges along y: right runs +y, left runs -y
    ay1, ay2 = y1 - dy1 / 2, y1 + dy1 / 2
    by1, by2 = y2 - dy2 / 2, y2 + dy2 / 2
    overlap_y = np.minimum(ay2, by2) - np.maximum(ay1, by1)
    for s1, o1 in ((1.0, dx1 / 2), (-1.0, -dx1 / 2)):
        for s2, o2 in ((1.0, dx2 / 2), (-1.0, -dx2 / 2)):
            d = np.hypot((x1 + o1) - (x2 + o2), dz)
            hit = (d <= 1e-12 * (dx1 + dx2)) & (overlap_y > 0)
            d = np.where(hit, reff_y, d)
            M = M + s1 * s2 * segment_mutual(ay1, ay2, by1, by2, d)
    return M


def effective_radii(grid: MemGrid, rule: str = "transverse"):
    """Regularisation distances (reff_x, reff_y) for coincident cell edges.

    "transverse" treats each edge filament as a flat band as wide as the
    cell in the transverse direction, r = 0.2235 * width. "sum" uses the
    single value 0.2235 (dx + dy) for both directions.
    """
    if rule == "transverse":
        return GMD_FACTOR * grid.dy, GMD_FACTOR * grid.dx
    if rule == "sum":
        r = GMD_FACTOR * (grid.dx + grid.dy)
        return r, r
    raise DomainError(f"unknown regularisation rule {rule!r}")


@dataclass
class KernelTable:
    """Translation-invariant inductance kernel of a uniform grid.

    ``table[p, q]`` is the mutual inductance between cells whose indices
    differ by (p, q). Products with the full matrix use a 2nx x 2ny circulant
    embedding.
    """

    grid: MemGrid
    table: np.ndarray
    _spectrum: np.ndarray | None = field(default=None, repr=False)

    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            nx, ny = self.grid.nx, self.grid.ny
            T = self.table
            E = np.zeros((2 * nx, 2 * ny))
            E[:nx, :ny] = T
            E[nx + 1:, :ny] = T[:0:-1, :]
            E[:nx, ny + 1:] = T[:, :0:-1]
            E[nx + 1:, ny + 1:] = T[:0:-1, :0:-1]
            self._spectrum = fft.rfft2(E, workers=1)
        return self._spectrum

    def matvec(self, v: np.ndarray) -> np.ndarray:
        nx, ny = self.grid.nx, self.grid.ny
        X = np.zeros((2 * nx, 2 * ny))
        X[:nx, :ny] = np.reshape(v, (nx, ny))
        Y = fft.irfft2(self.spectrum() * fft.rfft2(X, workers=1), s=(2 * nx, 2 * ny), workers=1)
        return Y[:nx, :ny].reshape(np.shape(v))

    def dense(self) -> np.ndarray:
        nx, ny = self.grid.nx, self.grid.ny
        ix, iy = np.divmod(np.arange(nx * ny), ny)
        return self.table[np.abs(ix[:, None] - ix[None, :]), np.abs(iy[:, None] - iy[None, :])]


def kernel_table(grid: MemGrid, rule: str = "transverse") -> KernelTable:
    """Inductance table of ``grid`` for all index offsets."""
    rx, ry = effective_radii(grid, rule)
    p, q = np.meshgrid(np.arange(grid.nx), np.arange(grid.ny), indexing="ij")
    T = loop_mutual(0.0, 0.0, grid.dx, grid.dy, p * grid.dx, q * grid.dy,
                    grid.dx, grid.dy, 0.0, rx, ry)
    return KernelTable(grid, np.asarray(T, dtype=float))


def assemble_kernel(grid: MemGrid, strip: StripSpec | None = None, rule: str = "transverse") -> np.ndarray:
    """Dense, symmetric cell-inductance matrix in H.

    Cells are numbered row-major with y fastest. Positive definiteness is
    checked with a Cholesky factorisation.

    Raises:
        ConfigurationError: If the matrix is not positive definite.
    """
    if strip is not None and not (np.isclose(grid.width, strip.w) and np.isclose(grid.length, strip.L)):
        raise ConfigurationError("grid does not tile the strip")
    C = kernel_table(grid, rule).dense()
    try:
        linalg.cho_factor(C, lower=True, check_finite=True)
    except linalg.LinAlgError as exc:
        raise ConfigurationError(
            f"inductance matrix of the {grid.nx}x{grid.ny} grid is not positive definite") from exc
    return C


@dataclass(frozen=True)
class MemSolution:
    """Cell currents of the Meissner state on a grid.

    ``cell_currents`` has shape (nx, ny). The stream function is even in x
    and in y; the sheet current derived from it is odd in y.
    """

    cell_currents: np.ndarray
    grid: MemGrid
    b: float
    z_m: float
    iterations: int = 0
    residual: float = 0.0

    @property
    def applied_flux(self) -> float:
        """Applied flux through one cell, Wb."""
        return self.b * self.z_m * self.grid.dx * self.grid.dy


def _dot(a, b) -> float:
    # numpy's pairwise summation keeps results independent of threading
    return float(np.sum(a * b))


def conjugate_gradient(matvec, rhs, rtol: float = 1e-10, maxiter: int = 5000):
    """Plain conjugate gradients; returns (x, iterations, relative residual)."""
    x = np.zeros_like(rhs)
    norm_b = math.sqrt(_dot(rhs, rhs))
    if norm_b == 0:
        return x, 0, 0.0
    r = rhs.copy()
    p = r.copy()
    rr = _dot(r, r)
    for it in range(maxiter):
        if math.sqrt(rr) <= rtol * norm_b:
            return x, it, math.sqrt(rr) / norm_b
        Ap = matvec(p)
        pAp = _dot(p, Ap)
        if not pAp > 0:
            raise NumericalError("kernel is not positive definite along a search direction")
        alpha = rr / pAp
        x += alpha * p
        r -= alpha * Ap
        rr_new = _dot(r, r)
        p = r + (rr_new / rr) * p
        rr = rr_new
    raise NumericalError(f"conjugate gradients did not converge in {maxiter} iterations "
                         f"(residual {math.sqrt(rr) / norm_b:.3e})")


def solve_meissner(kernel, grid: MemGrid, b: float, z_m: float, rtol: float = 1e-10) -> MemSolution:
    """Cell currents that expel the uniform field b z_m from every cell.

    Args:
        kernel: Dense matrix from :func:`assemble_kernel` (Cholesky solve) or
            a :class:`KernelTable` (FFT-accelerated conjugate gradients).
        grid: The grid the kernel belongs to.
        b: Field gradient in T/m.
        z_m: Strip offset in m.
        rtol: Relative residual target for conjugate gradients.

    Raises:
        ConfigurationError: If a dense kernel fails to factorise.
        NumericalError: If conjugate gradients fail.
    """
    n = grid.n_cells
    rhs = np.full(n, -b * z_m * grid.dx * grid.dy)
    if isinstance(kernel, KernelTable):
        if kernel.grid != grid:
            raise ConfigurationError("kernel belongs to a different grid")
        I, its, res = conjugate_gradient(kernel.matvec, rhs, rtol=rtol)
    else:
        C = np.asarray(kernel)
        if C.shape != (n, n):
            raise ConfigurationError("kernel shape does not match the grid")
        if b * z_m == 0:
            I, its, res = np.zeros(n), 0, 0.0
        else:
            try:
                factor = linalg.cho_factor(C, lower=True)
            except linalg.LinAlgError as exc:
                raise ConfigurationError("inductance matrix is not positive definite") from exc
            I = linalg.cho_solve(factor, rhs)
            its, res = 1, float(np.linalg.norm(C @ I - rhs) / np.linalg.norm(rhs))
    if not np.all(np.isfinite(I)):
        raise NumericalError("solver returned non-finite currents")
    return MemSolution(I.reshape(grid.nx, grid.ny), grid, b, z_m, its, res)


def energy(sol: MemSolution, kernel) -> float:
    """Magnetic energy 1/2 I^T C I + I^T Phi_a of a solution, J."""
    I = sol.cell_currents.ravel()
    CI = kernel.matvec(I) if isinstance(kernel, KernelTable) else np.asarray(kernel) @ I
    return 0.5 * _dot(I, CI) + sol.applied_flux * float(np.sum(I))


def flux_residual(sol: MemSolution, kernel) -> float:
    """Largest total flux through a cell relative to the applied cell flux."""
    I = sol.cell_currents.ravel()
    CI = kernel.matvec(I) if isinstance(kernel, KernelTable) else np.asarray(kernel) @ I
    return float(np.max(np.abs(CI + sol.applied_flux)) / abs(sol.applied_flux))


def sheet_current_profile(sol: MemSolution, column: int | None = None):
    """K_x on the interior cell edges of one column, A/m.

    Returns (y, K) at the ny - 1 interior edges plus the two strip edges.
    The default column is the middle of the strip (average of the two
    central columns when nx is even).
    """
    g = sol.cell_currents
    grid = sol.grid
    if column is None:
        if grid.nx % 2:
            col = g[grid.nx // 2]
        else:
            col = 0.5 * (g[grid.nx // 2 - 1] + g[grid.nx // 2])
    else:
        col = g[column]
    # the edge between cells k-1 and k carries g_k - g_(k-1) along +x
    padded = np.concatenate(([0.0], col, [0.0]))
    K = np.diff(padded) / grid.dy
    y = -grid.width / 2 + np.arange(grid.ny + 1) * grid.dy
    return y, K


def coil_flux_from_cells(sol: MemSolution, coil: CoilSpec) -> float:
    """Flux of the cell currents through the coil, Wb.

    Uses the same orientation as :func:`strip.pickup_flux` (coil traversed
    clockwise seen from above), so the two agree for long strips.
    """
    X, Y = sol.grid.centers()
    M = loop_mutual(0.0, 0.0, coil.L_c, coil.w_c, X, Y, sol.grid.dx, sol.grid.dy, coil.z_c)
    return -_dot(M, sol.cell_currents)


def strip_reference_ratio(ny: int, wc_over_w: float, zc_over_w: float) -> float:
    """Discrete-to-exact coupling ratio of the infinitely long strip.

    The cross-section is discretised exactly like one column of the 3D
    grid (ny cells, x-directed edge filaments regularised with
    0.2235 dy). Dividing a 3D result by this ratio at the same ny removes
    most of the transverse discretisation error.
    """
    if ny < 2:
        raise DomainError("need at least 2 cells across the strip")
    dy = 1.0 / ny
    yk = -0.5 + np.arange(ny + 1) * dy
    R = np.abs(yk[:, None] - yk[None, :])
    np.fill_diagonal(R, GMD_FACTOR * dy)
    Lf = -np.log(R) / (2 * math.pi)
    D = np.zeros((ny + 1, ny))
    idx = np.arange(ny)
    D[idx, idx] = 1.0
    D[idx + 1, idx] = -1.0
    C = D.T @ Lf @ D
    g = linalg.solve(C, np.full(ny, -dy), assume_a="pos")
    i = D @ g
    u, z = wc_over_w / 2, zc_over_w
    # potential per mu0 of the filaments; ln r of the mirrored point fixes the gauge
    A = -float(np.sum(i * 0.5 * np.log(((u - yk) ** 2 + z * z) / ((u + yk) ** 2 + z * z)))) / (4 * math.pi)
    return 2 * A / chi(wc_over_w, zc_over_w)


@dataclass(frozen=True)
class GridResult:
    n_cells: int
    nx: int
    ny: int
    eta_L: float
    ratio: float
    """eta_L over the analytic infinite-strip eta."""
    reference_ratio: float
    """ratio divided by the same-ny infinite-strip discretisation ratio."""
    iterations: int
    flux_residual: float


@dataclass(frozen=True)
class FiniteLengthResult:
    L_over_w: float
    rows: tuple[GridResult, ...]
    eta_analytic: float
    extrapolated: float | None
    warnings: tuple[str, ...] = ()


def _fit_intercept(h, v) -> float:
    A = np.vstack([np.ones_like(h), h]).T
    coef, *_ = np.linalg.lstsq(A, v, rcond=None)
    return float(coef[0])


def solve_grid(L_over_w: float, n_cells: int, strip: StripSpec, cantilever: CantileverSpec,
               coil: CoilSpec, b: float, aspect: float = 2.0, rule: str = "transverse",
               rtol: float = 1e-10) -> GridResult:
    """Coupling of a strip of length (L/w) w on one grid, with L_c = L."""
    length = L_over_w * strip.w
    grid = MemGrid.for_cells(n_cells, length, strip.w, aspect)
    kern = kernel_table(grid, rule)
    sol = solve_meissner(kern, grid, b, 1.0, rtol=rtol)
    long_coil = replace(coil, L_c=length)
    long_strip = replace(strip, L=length)
    z_zp = zero_point_motion(effective_mass(long_strip, cantilever), cantilever.Omega)
    eta_L = z_zp * coil_flux_from_cells(sol, long_coil) / FLUX_QUANTUM
    u, x = coil.w_c / strip.w, coil.z_c / strip.w
    eta_an = z_zp * b * length * strip.w * chi(u, x) / FLUX_QUANTUM
    ratio = eta_L / eta_an
    return GridResult(grid.n_cells, grid.nx, grid.ny, eta_L, ratio,
                      ratio / strip_reference_ratio(grid.ny, u, x), sol.iterations,
                      flux_residual(sol, kern))


def default_cell_counts(L_over_w: float, aspect: float = 2.0, ny=(16, 32, 64)) -> list[int]:
    """Cell counts giving ny cells across the strip at the given aspect."""
    return [int(round(L_over_w * n * n / aspect)) for n in ny]


def eta_finite_length(L_over_w: float, cell_counts, strip: StripSpec, cantilever: CantileverSpec,
                      coil: CoilSpec, b: float, aspect: float = 2.0, rule: str = "transverse",
                      rtol: float = 1e-10, mapper=map) -> FiniteLengthResult:
    """Coupling of a finite strip and its extrapolation to infinitely fine grids.

    Each grid's coupling is divided by the analytic infinite-strip value and
    by the same-ny discretisation ratio of the infinite strip. The error left
    is first order in the cell size h ~ N^(-1/2), so the three largest grids
    are fitted linearly in N^(-1/2) and the intercept is reported.

    Args:
        L_over_w: Strip aspect ratio.
        cell_counts: Increasing target cell counts N.
        strip, cantilever, coil: System; the coil length is set to L.
        b: Field gradient in T/m.
        aspect: Cell aspect ratio dx / dy.
        rule: Edge regularisation, see :func:`effective_radii`.
        mapper: ``map``-like callable used to run the grids (for thread pools).

    Returns:
        Per-grid rows and the extrapolated eta_L / eta (None with fewer than
        three grids).
    """
    if L_over_w <= 0:
        raise DomainError("L/w must be positive")
    counts = [int(n) for n in cell_counts]
    if not counts:
        raise DomainError("no grid sizes given")
    if any(b2 <= b1 for b1, b2 in zip(counts, counts[1:])):
        raise DomainError("grid sizes must be increasing")
    rows = tuple(mapper(lambda n: solve_grid(L_over_w, n, strip, cantilever, coil, b,
                                             aspect, rule, rtol), counts))
    warnings = []
    vals = np.array([r.reference_ratio for r in rows])
    steps = np.diff(vals)
    if len(steps) and not (np.all(steps >= 0) or np.all(steps <= 0)):
        warnings.append("non-monotone convergence series")
    extrapolated = None
    if len(rows) >= 3:
        tail = rows[-3:]
        h = np.array([1.0 / math.sqrt(r.n_cells) for r in tail])
        extrapolated = _fit_intercept(h, np.array([r.reference_ratio for r in tail]))
    else:
        warnings.append("fewer than three grids, no extrapolation")
    u, x = coil.w_c / strip.w, coil.z_c / strip.w
    length = L_over_w * strip.w
    z_zp = zero_point_motion(effective_mass(replace(strip, L=length), cantilever), cantilever.Omega)
    eta_an = z_zp * b * length * strip.w * chi(u, x) / FLUX_QUANTUM
    return FiniteLengthResult(L_over_w, rows, eta_an, extrapolated, tuple(warnings))
