"""Finite strip length by magnetic energy minimisation.

Solves the Meissner state of strips with L/w = 5 ... 50 on three grids
each, prints the per-grid coupling and the extrapolated ratio to the
infinitely long strip, and times the largest grid.
"""

from __future__ import annotations

import time

from magnetomech import mem
from magnetomech.domain import CoilSpec
from magnetomech.scenario import load_scenario
from magnetomech.strip import max_gradient, optimal_coil_width


def main() -> None:
    sc = load_scenario("paper-flagship")
    strip = sc.strip
    coil = CoilSpec(strip.w, optimal_coil_width(1.0) * strip.w, strip.L)
    b = max_gradient(strip)
    print(f"{'L/w':>5} {'N':>7} {'nx x ny':>10} {'raw':>8} {'normed':>8} {'CG its':>6} {'s':>6}")
    for lw in (5, 10, 20, 50):
        rows = []
        for n in mem.default_cell_counts(lw):
            t = time.perf_counter()
            r = mem.solve_grid(lw, n, strip, sc.cantilever, coil, b)
            rows.append(r)
            print(f"{lw:5g} {r.n_cells:7d} {f'{r.nx}x{r.ny}':>10} {r.ratio:8.4f} {r.reference_ratio:8.4f} "
                  f"{r.iterations:6d} {time.perf_counter() - t:6.2f}")
        res = mem.eta_finite_length(lw, [r.n_cells for r in rows], strip, sc.cantilever, coil, b)
        print(f"      extrapolated eta_L / eta = {res.extrapolated:.4f}")


if __name__ == "__main__":
    main()
