"""Command-line entry point: ``magnetomech {report,sweep,fieldmap,mem}``.

Exit codes: 0 success (possibly with warnings), 2 usage or configuration
error, 3 domain error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

from . import mem as mm
from . import sources as src
from . import units as U
from .domain import ConfigurationError, DomainError, NumericalError
from .report import SWEEP_COLUMNS, evaluate, fmt, render_csv_row, render_text
from .scenario import (
    BUNDLED,
    HOMOGENEOUS,
    QUADRUPOLE,
    ScenarioError,
    load_scenario,
    parameter_units,
    sweepable_parameters,
    with_parameter,
)
from .strip import (
    HOMOGENEOUS as MODE_HOM,
    QUADRUPOLE as MODE_QUAD,
    StripState,
    b_field,
    max_gradient,
    max_homogeneous_field,
    optimal_coil_width,
    vector_potential,
)

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_NUMERICAL = 0, 2, 3, 4
FIELDMAP_COLUMNS = ["y_m", "z_m_coord", "A_x_Tm", "B_y_T", "B_z_T", "masked"]
MEM_COLUMNS = ["L_over_w", "N", "nx", "ny", "eta_L", "eta_L_over_eta_analytic",
               "eta_L_over_eta_same_mesh", "extrapolated_eta_L_over_eta", "status"]


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


@contextmanager
def _pool(threads: int):
    if threads <= 1:
        yield map
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            # Executor.map yields results in submission order
            yield ex.map


def _write_table(out, header, rows, fmt_name: str) -> None:
    if fmt_name == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return
    cols = list(zip(header, *rows)) if rows else [(h,) for h in header]
    widths = [max(len(str(c)) for c in col) for col in cols]
    out.write("  ".join(h.rjust(n) for h, n in zip(header, widths)).rstrip() + "\n")
    for r in rows:
        out.write("  ".join(str(v).rjust(n) for v, n in zip(r, widths)).rstrip() + "\n")


def cmd_report(args, sc, out) -> int:
    ev = evaluate(sc)
    if args.format == "csv":
        keys, vals = render_csv_row(ev)
        _write_table(out, keys, [vals], "csv")
        for f in ev.flags:
            _warn(f)
    else:
        out.write(render_text(ev))
    return EXIT_OK


def _sweep_values(args, units) -> np.ndarray:
    start = U.parse_quantity(args.start, units)
    stop = U.parse_quantity(args.stop, units)
    if args.steps < 0:
        raise ScenarioError("--steps must be non-negative")
    if args.steps == 0:
        return np.empty(0)
    if args.steps == 1:
        return np.array([start])
    if args.log:
        if not (start > 0 and stop > 0):
            raise ScenarioError("a log sweep needs positive bounds")
        return np.geomspace(start, stop, args.steps)
    return np.linspace(start, stop, args.steps)


def cmd_sweep(args, sc, out) -> int:
    try:
        units = parameter_units(args.parameter)
        values = _sweep_values(args, units)
    except U.UnitError as exc:
        raise ScenarioError(str(exc)) from exc
    header = [args.parameter, *SWEEP_COLUMNS]

    def row(v):
        ev = evaluate(with_parameter(sc, args.parameter, float(v)))
        return [fmt(float(v))] + [fmt(ev.value(k)) for k in SWEEP_COLUMNS]

    with _pool(args.threads) as mapper:
        rows = list(mapper(row, values))
    _write_table(out, header, rows, args.format)
    return EXIT_OK


def _field_source(sc):
    """Resolve the applied field: (mode, amplitude, gradient, wire geometry)."""
    strip, source = sc.strip, sc.source
    if source.kind == HOMOGENEOUS:
        B_a = (max_homogeneous_field(strip, source.field_convention)
               if source.field is None else source.field)
        return MODE_HOM, B_a, None, None
    if source.kind == QUADRUPOLE:
        b = max_gradient(strip) if source.gradient is None else source.gradient
        return MODE_QUAD, b, b, None
    wires = src.WirePairSpec(source.current, source.wire_scale)
    b = src.gradient_at_origin(wires) if source.gradient is None else source.gradient
    geometry = wires if source.gradient is None else src.WirePairSpec(wires.I_w,
                                                                      src.z_w_for_gradient(wires.I_w, b))
    return MODE_QUAD, b, b, geometry


def fieldmap_rows(sc, ys, zs, which: str, z_m: float, locus: bool = False, mapper=map):
    """Rows (y, z, A_x, B_y, B_z, masked[, w_c*/2]) in z-major order."""
    strip = sc.strip
    mode, amp, b, geometry = _field_source(sc)
    state = StripState(z_m, amp, mode)
    ys = np.asarray(ys, dtype=float)

    def one_row(z):
        A = np.zeros_like(ys)
        By = np.zeros_like(ys)
        Bz = np.zeros_like(ys)
        masked = np.zeros(ys.shape, dtype=bool)
        if which in ("strip-response", "total"):
            # grid points that round onto the edges count as inside
            masked |= (np.abs(ys) <= strip.w / 2 * (1 + 1e-12)) & (abs(z - z_m) <= strip.t / 2)
        if which in ("applied", "total") and geometry is not None:
            for wy, wz, _ in geometry.wires():
                masked |= np.hypot(ys - wy, z - wz) < 1e-9 * geometry.z_w
        ok = ~masked
        yo = ys[ok]
        if which in ("strip-response", "total") and yo.size:
            A[ok] += vector_potential(yo, z, state, strip)
            by, bz = b_field(yo, np.full(yo.shape, z), state, strip)
            By[ok] += by
            Bz[ok] += bz
        if which in ("applied", "total") and yo.size:
            if geometry is not None:
                A[ok] += src.wire_pair_potential(yo, z, geometry) - src.bias_field(geometry) * yo
                by, bz = src.applied_field(yo, np.full(yo.shape, z), geometry)
                By[ok] += by
                Bz[ok] += bz
            elif mode == MODE_QUAD:
                A[ok] += -b * yo * z
                By[ok] += -b * yo
                Bz[ok] += b * z
            else:
                A[ok] += -amp * yo
                Bz[ok] += amp
        A[masked] = By[masked] = Bz[masked] = np.nan
        extra = []
        if locus:
            if z > z_m:
                extra = [fmt(optimal_coil_width((z - z_m) / strip.w, mode) * strip.w / 2)]
            else:
                extra = ["nan"]
        return [[fmt(y), fmt(z), fmt(a), fmt(p), fmt(q), str(int(m))] + extra
                for y, a, p, q, m in zip(ys, A, By, Bz, masked)]

    rows = []
    for chunk in mapper(one_row, list(zs)):
        rows.extend(chunk)
    return rows


def cmd_fieldmap(args, sc, out) -> int:
    w = sc.strip.w
    ny, nz = args.resolution
    if ny < 1 or nz < 1:
        raise ScenarioError("resolution must be at least 1 x 1")
    ys = np.linspace(args.y_range[0] * w, args.y_range[1] * w, ny) if ny > 1 else np.array([args.y_range[0] * w])
    zs = np.linspace(args.z_range[0] * w, args.z_range[1] * w, nz) if nz > 1 else np.array([args.z_range[0] * w])
    try:
        z_m = U.parse_quantity(args.offset, U.LENGTH)
    except U.UnitError as exc:
        raise ScenarioError(str(exc)) from exc
    with _pool(args.threads) as mapper:
        rows = fieldmap_rows(sc, ys, zs, args.which, z_m, args.locus, mapper)
    header = FIELDMAP_COLUMNS + (["wc_star_half_m"] if args.locus else [])
    _write_table(out, header, rows, args.format)
    return EXIT_OK


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ScenarioError(f"cannot read number list {text!r}") from exc


def cmd_mem(args, sc, out) -> int:
    from .domain import CoilSpec
    from .strip import optimal_coil_width as ocw

    lengths = _float_list(args.lengths)
    if not lengths:
        raise ScenarioError("--lengths is empty")
    cells = [int(v) for v in _float_list(args.cells)] if args.cells else None
    if cells is not None and not cells:
        raise ScenarioError("--cells is empty")
    strip = sc.strip
    mode, amp, b, _ = _field_source(sc)
    if mode != MODE_QUAD:
        raise ScenarioError("the finite-length solver needs a gradient source")
    w_c = sc.coil.w_c if sc.coil.w_c is not None else ocw(sc.coil.z_c / strip.w) * strip.w
    coil = CoilSpec(sc.coil.z_c, w_c, strip.L)
    rows = []
    status = EXIT_OK
    with _pool(args.threads) as mapper:
        for lw in lengths:
            counts = cells if cells is not None else mm.default_cell_counts(lw, args.aspect)
            try:
                res = mm.eta_finite_length(lw, counts, strip, sc.cantilever, coil, b,
                                           aspect=args.aspect, mapper=mapper)
            except (DomainError, NumericalError, ConfigurationError) as exc:
                _warn(f"L/w = {lw:g}: {exc}")
                rows.append([fmt(lw), "", "", "", "", "", "", "", f"error: {exc}"])
                status = EXIT_NUMERICAL if isinstance(exc, NumericalError) else status
                continue
            for msg in res.warnings:
                _warn(f"L/w = {lw:g}: {msg}")
            ext = "" if res.extrapolated is None else fmt(res.extrapolated)
            state = "ok" if not res.warnings else "; ".join(res.warnings)
            for r in res.rows:
                rows.append([fmt(lw), str(r.n_cells), str(r.nx), str(r.ny), fmt(r.eta_L), fmt(r.ratio),
                             fmt(r.reference_ratio), ext, state])
    _write_table(out, MEM_COLUMNS, rows, args.format)
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", default=argparse.SUPPRESS,
                        help=f"scenario file or bundled name ({', '.join(BUNDLED)})")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output file (default: stdout)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads")
    common.add_argument("--format", choices=("csv", "text"), default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="magnetomech", parents=[common],
                                description="Magnetomechanical coupling of a superconducting strip.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("report", parents=[common], help="full coupling and noise report")
    r.set_defaults(func=cmd_report, default_format="text")

    s = sub.add_parser("sweep", parents=[common], help="sweep one parameter")
    s.add_argument("--parameter", required=True,
                   help="parameter path, e.g. coil.height_over_width; one of: " + ", ".join(sweepable_parameters()))
    s.add_argument("--start", required=True, help="first value, unit suffix allowed")
    s.add_argument("--stop", required=True, help="last value, unit suffix allowed")
    s.add_argument("--steps", type=int, default=21)
    s.add_argument("--log", action="store_true", help="geometric spacing")
    s.set_defaults(func=cmd_sweep, default_format="csv")

    f = sub.add_parser("fieldmap", parents=[common], help="vector potential and field on a grid")
    f.add_argument("--which", choices=("strip-response", "applied", "total"), default="strip-response")
    f.add_argument("--y-range", type=float, nargs=2, default=(-3.0, 3.0), metavar=("Y0", "Y1"),
                   help="in units of the strip width")
    f.add_argument("--z-range", type=float, nargs=2, default=(-3.0, 3.0), metavar=("Z0", "Z1"),
                   help="in units of the strip width")
    f.add_argument("--resolution", type=int, nargs=2, default=(201, 201), metavar=("NY", "NZ"))
    f.add_argument("--offset", default="10 nm", help="strip displacement z_m (default 10 nm)")
    f.add_argument("--locus", action="store_true", help="append the optimal half-width w_c*/2 for each z")
    f.set_defaults(func=cmd_fieldmap, default_format="csv")

    m = sub.add_parser("mem", parents=[common], help="finite-length coupling by energy minimisation")
    m.add_argument("--lengths", default="5,10,20,50", help="comma-separated L/w values")
    m.add_argument("--cells", default=None,
                   help="comma-separated increasing cell counts (default: 16, 32, 64 cells across)")
    m.add_argument("--aspect", type=float, default=2.0, help="cell aspect ratio dx/dy")
    m.set_defaults(func=cmd_mem, default_format="csv")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.scenario = getattr(args, "scenario", "paper-flagship")
    args.out = getattr(args, "out", None)
    args.threads = getattr(args, "threads", 1)
    args.format = getattr(args, "format", args.default_format)
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        sc = load_scenario(args.scenario)
        buf = io.StringIO()
        code = args.func(args, sc, buf)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(buf.getvalue())
        else:
            sys.stdout.write(buf.getvalue())
        return code
    except (ScenarioError, U.UnitError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
