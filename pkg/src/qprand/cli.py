"""Command-line front end.

    qprand bh [--samples N --seed S]
    qprand clone-sd --theta T [--delta D | --sweep] [--panel left|right] [--plot fig.svg]
    qprand teleport --p P --theta T [--mu M --nu N]
    qprand report --theta T [--panel left|right]

Exit codes: 0 success, 1 usage or parameter error, 2 internal cross-check failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import cloning, optimize, process, teleport
from .cloning import Panel
from .svgplot import Series, line_plot

EXIT_OK, EXIT_USAGE, EXIT_CROSSCHECK = 0, 1, 2
SWEEP_HEADER = ["delta", "f_bar", "q_bar", "ratio", "marker"]
DEFAULT_SAMPLES = {"bh": 1000, "teleport": 100_000}
POINT_ATOL = 1e-10


class UsageError(Exception):
    pass


class CrossCheckError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x) -> str:
    return repr(float(x))


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--samples", type=int, default=None, help="Monte Carlo sample count")
    p.add_argument("--grid", type=int, default=optimize.DEFAULT_GRID, help="grid points for scans and sweeps")
    p.add_argument("--tol", type=float, default=optimize.DEFAULT_TOL, help="extremum location tolerance")
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--out", type=Path, default=None, help="write data to this file")
    p.add_argument("--degrees", action="store_true", help="angles on the command line are in degrees")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="qprand", description="Fidelity and process randomness of quantum processes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("bh", parents=[common], help="Buzek-Hillery universal cloner")

    sd = sub.add_parser("clone-sd", parents=[common], help="state-dependent cloner")
    sd.add_argument("--theta", type=float, required=True)
    sd.add_argument("--delta", type=float, default=None)
    sd.add_argument("--panel", choices=[p.value for p in Panel], default="left")
    sd.add_argument("--sweep", action="store_true", help="tabulate over delta in [0, pi/2]")
    sd.add_argument("--plot", type=Path, default=None, help="SVG file for the three sweep curves")

    tp = sub.add_parser("teleport", parents=[common], help="teleportation via a noisy resource")
    tp.add_argument("--p", type=float, required=True)
    tp.add_argument("--theta", type=float, required=True)
    tp.add_argument("--mu", type=float, default=None)
    tp.add_argument("--nu", type=float, default=None)

    rp = sub.add_parser("report", parents=[common], help="optimality report for the state-dependent cloner")
    rp.add_argument("--theta", type=float, required=True)
    rp.add_argument("--panel", choices=[p.value for p in Panel], default="left")
    return parser


def _angle(args, value):
    if value is None:
        return None
    return math.radians(value) if args.degrees else float(value)


def _meta(args, **params) -> dict:
    return {
        "command": args.command,
        "seed": args.seed,
        "samples": args.samples,
        "grid_n": args.grid,
        "tol": args.tol,
        "format": args.format,
        "out": None if args.out is None else str(args.out),
        "degrees": args.degrees,
        "params": params,
    }


def _emit_json(obj: dict, args) -> str:
    text = json.dumps(obj, indent=2) + "\n"
    if args.out is not None and args.format == "json":
        args.out.write_text(text)
    return text


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_bh(args) -> str:
    res = cloning.bh_residuals(args.samples, args.seed)
    stats = cloning.bh_stats(args.samples, args.seed)
    merit = process.figure_of_merit(stats.fidelity, stats.randomness)
    record = {
        **_meta(args),
        "f_bar": stats.fidelity,
        "q_bar": stats.randomness,
        "merit": merit.value,
        "rule": merit.rule,
        "residuals": res,
    }
    if args.format == "csv":
        header = ["f_bar", "q_bar", "merit", "rule", *res.keys(), "seed", "samples"]
        row = [_num(stats.fidelity), _num(stats.randomness), _num(merit.value), merit.rule,
               *(_num(v) for v in res.values()), args.seed, args.samples]
        text = _csv_text(header, [row])
        if args.out is not None:
            args.out.write_text(text)
        return text
    return _emit_json(record, args)


def _check_sd_theta(theta: float) -> None:
    try:
        cloning._check_theta(theta, open_interval=True)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def sweep_rows(theta: float, panel: Panel, grid_n: int, tol: float) -> list[list[str]]:
    """Grid rows over [0, pi/2] followed, in delta order, by marked extremum rows."""
    deltas = np.linspace(0.0, math.pi / 2, grid_n)
    f = cloning.sd_fidelity(theta, deltas, panel)
    q = cloning.sd_randomness(theta, deltas, panel)
    rows = [(float(d), float(fv), float(qv), cloning.sd_ratio(theta, float(d), panel), "")
            for d, fv, qv in zip(deltas, f, q)]

    analytic = cloning.sd_stationary_points(theta, panel)
    marks = [(p.delta, "minQ") for p in analytic.minima]
    marks.append((analytic.fidelity_argmax, "maxF"))
    ratio_min = optimize.scan_extrema(
        lambda d: cloning.sd_ratio(theta, d, panel), (0.0, math.pi / 2), grid_n, tol, optimize.Kind.MIN
    )
    marks += [(x, "minRatio") for x in ratio_min.locations]
    for d, label in marks:
        rows.append((d, float(cloning.sd_fidelity(theta, d, panel)),
                     float(cloning.sd_randomness(theta, d, panel)), cloning.sd_ratio(theta, d, panel), label))
    rows.sort(key=lambda r: (r[0], r[4] != "", r[4]))
    return [[_num(d), _num(fv), _num(qv), _num(r), m] for d, fv, qv, r, m in rows]


def render_sweep_svg(theta: float, panel: Panel, grid_n: int) -> str:
    deltas = np.linspace(0.0, math.pi / 2, grid_n)
    f = cloning.sd_fidelity(theta, deltas, panel)
    q = cloning.sd_randomness(theta, deltas, panel)
    r = np.array([cloning.sd_ratio(theta, float(d), panel) for d in deltas])
    xt = [(k * math.pi / 12, lab) for k, lab in enumerate(["0", "π/12", "π/6", "π/4", "π/3", "5π/12", "π/2"])]
    return line_plot(
        [
            Series("F̄ (fidelity)", deltas, f, "#d62728", "dashed"),
            Series("Q̄ (randomness)", deltas, q, "#1f77b4", "solid"),
            Series("Q̄/F̄", deltas, r, "#2ca02c", "dashdot"),
        ],
        xlim=(0.0, math.pi / 2),
        ylim=(0.0, 1.0),
        xlabel="δ",
        title=f"state-dependent cloning, θ = {theta:.6g}, {panel.value} panel",
        xticks=xt,
    )


def cmd_clone_sd(args) -> str:
    theta = _angle(args, args.theta)
    _check_sd_theta(theta)
    panel = Panel(args.panel)
    if args.sweep:
        rows = sweep_rows(theta, panel, args.grid, args.tol)
        text = _csv_text(SWEEP_HEADER, rows)
        if args.plot is not None:
            args.plot.write_text(render_sweep_svg(theta, panel, args.grid))
        if args.out is not None and args.format != "json":
            args.out.write_text(text)
            summary = {
                **_meta(args, theta=theta, panel=panel.value, sweep=True,
                        plot=None if args.plot is None else str(args.plot)),
                "rows": len(rows),
                "markers": [dict(zip(SWEEP_HEADER, r)) for r in rows if r[4]],
            }
            return json.dumps(summary, indent=2) + "\n"
        if args.format == "csv":
            return text
        record = {
            **_meta(args, theta=theta, panel=panel.value, sweep=True,
                    plot=None if args.plot is None else str(args.plot)),
            "columns": SWEEP_HEADER,
            "rows": rows,
        }
        return _emit_json(record, args)

    if args.delta is None:
        raise UsageError("clone-sd needs --delta or --sweep")
    delta = _angle(args, args.delta)
    try:
        geom = cloning.CloneGeometry(theta, delta, panel)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    stats = cloning.sd_stats(geom)
    direct = cloning.sd_stats_from_states(geom)
    merit = process.figure_of_merit(stats.fidelity, stats.randomness)
    resid = max(abs(stats.fidelity - direct.fidelity), abs(stats.randomness - direct.randomness))
    if resid > POINT_ATOL:
        raise CrossCheckError(f"closed form and overlap computation differ by {resid:.3g}")
    record = {
        **_meta(args, theta=theta, delta=delta, panel=panel.value),
        "phi": geom.phi,
        "gamma": geom.gamma,
        "f_bar": stats.fidelity,
        "q_bar": stats.randomness,
        "ratio": merit.value,
        "rule": merit.rule,
        "overlap_residual": resid,
    }
    if args.format == "csv":
        keys = ["theta", "delta", "panel", "f_bar", "q_bar", "ratio", "rule"]
        vals = [_num(theta), _num(delta), panel.value, _num(stats.fidelity), _num(stats.randomness),
                _num(merit.value), merit.rule]
        text = _csv_text(keys, [vals])
        if args.out is not None:
            args.out.write_text(text)
        return text
    return _emit_json(record, args)


def cmd_teleport(args) -> str:
    theta = _angle(args, args.theta)
    mu, nu = _angle(args, args.mu), _angle(args, args.nu)
    try:
        closed = teleport.teleport_averages(args.p, theta)
        mc = teleport.teleport_monte_carlo(args.p, theta, args.samples, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    if mu is not None:
        points = [(mu, 0.0 if nu is None else nu)]
    else:
        points = [(m, n) for m in np.linspace(0, math.pi, 9) for n in (0.0, math.pi / 3)]
    point_resid = 0.0
    for m, n in points:
        cf = teleport.teleport_point_stats(args.p, theta, m, n)
        sim = teleport.simulated_point_stats(args.p, theta, m, n)
        point_resid = max(point_resid, abs(cf.fidelity - sim.fidelity), abs(cf.randomness - sim.randomness))
    if point_resid > POINT_ATOL:
        raise CrossCheckError(f"closed form and channel simulation differ by {point_resid:.3g}")

    def z(a, b, err):
        return (a - b) / err if err > 0 else (0.0 if abs(a - b) < 1e-12 else math.inf)

    record = {
        **_meta(args, p=args.p, theta=theta, mu=mu, nu=nu),
        "f_bar": closed.fidelity,
        "q_bar": closed.randomness,
        "monte_carlo": mc.as_dict(),
        "mc_z_f": z(mc.fidelity, closed.fidelity, mc.fidelity_stderr),
        "mc_z_q": z(mc.randomness, closed.randomness, mc.randomness_stderr),
        "channel_point_residual": point_resid,
    }
    if mu is not None:
        cf = teleport.teleport_point_stats(args.p, theta, *points[0])
        record["point"] = {"mu": cf.mu, "nu": cf.nu, "fidelity": cf.fidelity, "randomness": cf.randomness}
    if args.format == "csv":
        keys = ["p", "theta", "f_bar", "q_bar", "mc_f_bar", "mc_f_stderr", "mc_q_bar", "mc_q_stderr",
                "channel_point_residual", "seed", "samples"]
        vals = [_num(args.p), _num(theta), _num(closed.fidelity), _num(closed.randomness), _num(mc.fidelity),
                _num(mc.fidelity_stderr), _num(mc.randomness), _num(mc.randomness_stderr),
                _num(point_resid), args.seed, args.samples]
        text = _csv_text(keys, [vals])
        if args.out is not None:
            args.out.write_text(text)
        return text
    return _emit_json(record, args)


def cmd_report(args) -> str:
    theta = _angle(args, args.theta)
    _check_sd_theta(theta)
    rep = optimize.optimality_report(theta, args.panel, args.grid, args.tol)
    record = {**_meta(args, theta=theta, panel=args.panel), **rep.to_dict()}
    text = _emit_json(record, args)
    if not rep.crosscheck_ok:
        sys.stdout.write(text)
        raise CrossCheckError(
            f"numeric extrema disagree with analytic stationary points by {rep.crosscheck_error:.3g}"
        )
    return text


COMMANDS = {"bh": cmd_bh, "clone-sd": cmd_clone_sd, "teleport": cmd_teleport, "report": cmd_report}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.samples is None:
        args.samples = DEFAULT_SAMPLES.get(args.command, 0)
    if args.format is None:
        args.format = "csv" if args.out is not None and args.out.suffix == ".csv" else "json"
    if args.samples < 0 or (args.command in DEFAULT_SAMPLES and args.samples < 1):
        parser.error("--samples must be positive")
    try:
        text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qprand {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CrossCheckError as exc:
        print(f"qprand {args.command}: cross-check failed: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
