"""Command-line harness.

Subcommands: norms, verify-ineq, osgood, split, simulate, sweep, rate-fit.
The process exits with status 0 exactly when every inequality the invoked
command asserts holds, and 1 otherwise.

`simulate` and `sweep` read a structured text config of `key = value` lines
(# starts a comment) with keys: grid, nu (comma list for sweep), T, cfl,
seed/ic, stride, sigma, samples, out.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import inviscid, logineq, osgood, splitting
from .flow import SolverConfig, run
from .grid import GridSpec, load_field_csv
from .norms import NormReport, compute_norms


def _parse_config(path: str) -> dict:
    out: dict = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line (expected key = value): {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        out[key] = val
    return out


def _cmd_norms(args) -> int:
    field = load_field_csv(args.field)
    report = compute_norms(field, sigma=args.sigma)
    print(NormReport.csv_header())
    print(report.csv_row())
    return 0


def _cmd_verify_ineq(args) -> int:
    sizes = tuple(int(s) for s in args.sizes.split(","))
    scan = logineq.scan_corpus(sizes=sizes)
    if args.out:
        scan.write_csv(args.out)
        print(f"wrote {len(scan.trials)} trials to {args.out}")
    for n in scan.sizes:
        print(f"size {n:4d}: max ratio {scan.max_ratio_by_size[n]:.6f}")
    slope = scan.ratio_slope
    print(f"overall max ratio {scan.max_ratio:.6f}, refinement log-slope "
          f"{slope if slope is not None else float('nan'):.4f}")
    ok = math.isfinite(scan.max_ratio) and (slope is None or slope <= 0.05)
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _cmd_osgood(args) -> int:
    problem = osgood.OsgoodProblem.constant(
        M=args.f_const, nu=args.nu, horizon=args.T, g=args.g_const, g0=args.g0_const
    )
    traj = osgood.integrate_majorant(problem)
    log_bounds = np.array([osgood.log_gronwall_bound(problem, t) for t in traj.times])
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("t,y,bound\n")
            with np.errstate(over="ignore"):
                for t, ly, lb in zip(traj.times, traj.log_y, log_bounds):
                    fh.write(f"{t:.17g},{math.exp(ly) if ly < 709 else math.inf:.17g},"
                             f"{math.exp(lb) if lb < 709 else math.inf:.17g}\n")
        print(f"wrote trajectory to {args.out}")
    dominated = bool(traj.log_y[-1] <= log_bounds[-1] + 1e-9) and not traj.blow_up
    print(f"y(T) = exp({traj.log_y[-1]:.6f}), bound(T) = exp({log_bounds[-1]:.6f})")
    print("PASS" if dominated else "FAIL")
    return 0 if dominated else 1


def _cmd_split(args) -> int:
    field = load_field_csv(args.field)
    thresholds = (
        np.array([args.threshold])
        if args.threshold is not None
        else np.geomspace(1.0 + 1e-6, max(2.0, 2.0 * float(np.abs(field.values).max())), 20)
    )
    rows = splitting.threshold_sweep(field, args.sigma, thresholds)
    print("threshold,measured_support,cheb_bound,holder_lhs,holder_rhs")
    ok = True
    for row in rows:
        ok = ok and bool(row["satisfied"])
        print(
            f"{row['threshold']:.6g},{row['measured_support']:.6g},{row['cheb_bound']:.6g},"
            f"{row['holder_lhs']:.6g},{row['holder_rhs']:.6g}"
        )
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _cmd_simulate(args) -> int:
    cfgmap = _parse_config(args.config)
    grid = GridSpec(int(cfgmap.get("grid", 64)))
    cfg = SolverConfig(
        grid=grid,
        nu=float(cfgmap.get("nu", 0.0)),
        horizon=float(cfgmap.get("T", 1.0)),
        cfl=float(cfgmap.get("cfl", 0.5)),
        output_stride=int(cfgmap.get("stride", 1)),
        min_samples=int(cfgmap.get("samples", 1)),
        sigma=float(cfgmap.get("sigma", 1.0)),
    )
    ic = cfgmap.get("ic", "taylor_green")
    if ic == "random":
        ic = f"random_{cfgmap.get('seed', 42)}"
    u0 = inviscid.initial_condition(grid, ic)
    result = run(u0, cfg)
    outdir = Path(cfgmap.get("out", "run_output"))
    outdir.mkdir(parents=True, exist_ok=True)
    result.series.write_csv(outdir / "series.csv")
    from .grid import save_field_csv

    save_field_csv(result.states[-1].vorticity, outdir / "final_vorticity.csv")
    e = result.series.energy
    print(f"steps: {round(cfg.horizon / result.dt)}, samples: {len(result.sample_times)}")
    print(f"energy: {e[0]:.9g} -> {e[-1]:.9g}")
    ok = not result.blow_up and (cfg.nu == 0.0 or bool(np.all(np.diff(e) <= 1e-12 + 1e-9 * e[:-1])))
    print("PASS" if ok else "FAIL (blow-up or energy increase under viscosity)")
    return 0 if ok else 1


def _cmd_sweep(args) -> int:
    cfgmap = _parse_config(args.config)
    ic = cfgmap.get("ic", "taylor_green")
    if ic == "random":
        ic = f"random_{cfgmap.get('seed', 42)}"
    cfg = inviscid.ExperimentConfig(
        grid_points=int(cfgmap.get("grid", 64)),
        horizon=float(cfgmap.get("T", 0.5)),
        nu_list=tuple(float(v) for v in cfgmap.get("nu", "1e-1,1e-2,1e-3").split(",")),
        sigma=float(cfgmap.get("sigma", 1.0)),
        initial_condition_id=ic,
        cfl=float(cfgmap.get("cfl", 0.5)),
        min_samples=int(cfgmap.get("samples", 100)),
        output_stride=int(cfgmap.get("stride", 1)),
        output_dir=cfgmap.get("out", "sweep_output"),
    )
    result = inviscid.run_sweep(cfg)
    series = result.series
    print(f"M = {series.M:.6g}, theory exponent = {series.theory_exponent:.6g}")
    for nu, sup in zip(series.nu, series.sup_gap):
        print(f"nu = {nu:>9.3e}: sup gap = {sup:.9g}")
    ok = not result.aborted and series.monotone
    if len(series.nu) >= 3:
        rate = inviscid.verify_rate(series)
        print(f"fitted exponent = {rate.rho:.4f}, violations: {len(rate.violations)}")
        ok = ok and rate.passed
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _cmd_rate_fit(args) -> int:
    data = np.genfromtxt(args.gaps, delimiter=",", names=True)
    nu = np.atleast_1d(data["nu"])
    sup = np.atleast_1d(data["sup_gap"])
    order = np.argsort(nu)[::-1]
    series = inviscid.GapSeries(
        nu=nu[order],
        sup_gap=sup[order],
        M=float(np.atleast_1d(data["M"])[0]),
        theory_exponent=float(np.atleast_1d(data["theory_exponent"])[0]),
        fitted_exponent=inviscid.fit_exponent(nu, sup),
        horizon=args.T,
    )
    rate = inviscid.verify_rate(series)
    print(f"rho = {rate.rho:.6f}, theory exponent = {rate.theory_exponent:.6g}, "
          f"C_fit = {rate.c_fit:.6g}")
    for nu_v, sup_v, bound in rate.violations:
        print(f"violation at nu = {nu_v:.3e}: sup gap {sup_v:.6g} > bound {bound:.6g}")
    print("PASS" if rate.passed else "FAIL")
    return 0 if rate.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="loglimit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norms", help="norm report of a field CSV")
    p.add_argument("field")
    p.add_argument("--sigma", type=float, default=1.0)
    p.set_defaults(func=_cmd_norms)

    p = sub.add_parser("verify-ineq", help="corpus scan of the duality inequality")
    p.add_argument("--sizes", default="32,64,128")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_verify_ineq)

    p = sub.add_parser("osgood", help="integrate the majorant and its envelope")
    p.add_argument("--f-const", type=float, required=True, dest="f_const")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--g-const", type=float, default=0.0, dest="g_const")
    p.add_argument("--g0-const", type=float, default=0.0, dest="g0_const")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_osgood)

    p = sub.add_parser("split", help="truncation split bounds for a field CSV")
    p.add_argument("--field", required=True)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--sigma", type=float, default=1.0)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("simulate", help="run the flow solver from a config file")
    p.add_argument("config")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="viscosity sweep from a config file")
    p.add_argument("config")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("rate-fit", help="fit and check the rate bound on a gaps.csv")
    p.add_argument("gaps")
    p.add_argument("--T", type=float, default=0.5)
    p.set_defaults(func=_cmd_rate_fit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
