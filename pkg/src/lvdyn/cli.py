"""Command-line surface: ``lvdyn fit|analyze|phase|sobol|report``.

Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O
failure.  The sampling seed falls back to the LVDYN_SEED environment
variable when --seed is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import IoError, LvdynError, exit_code_for
from .fitting import FitMode
from .pipeline import AnalysisConfig, run_pipeline

DEFAULT_SEED = 1024

_MODES = {"one-step": FitMode.ONE_STEP_AHEAD, "free-running": FitMode.FREE_RUNNING}

#: Analysis stages each subcommand runs (None = everything).
_COMMAND_STAGES = {
    "analyze": None,
    "fit": {"classify", "mape"},
    "phase": {"classify", "stability", "phase", "trajectories"},
    "sobol": {"classify", "equilibrium", "sobol"},
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="headered CSV input file")
    p.add_argument("--year-col", default="year")
    p.add_argument("--x-col", default="ai_capital")
    p.add_argument("--y-col", default="physical_capital")
    p.add_argument("--unit", default="billion yuan")
    p.add_argument("--mode", choices=sorted(_MODES), default="one-step",
                   help="fitted-trajectory mode reported as primary")
    p.add_argument("--classify-tol", type=float, default=0.0,
                   help="treat cross-coefficients within this of zero as zero")
    p.add_argument("--sobol-n", type=int, default=1024,
                   help="base sample size (power of two >= 64)")
    p.add_argument("--fraction", type=float, default=0.1,
                   help="relative half-width of the sensitivity box")
    p.add_argument("--seed", type=int, default=None,
                   help=f"sampling seed (default: $LVDYN_SEED or {DEFAULT_SEED})")
    p.add_argument("--params-from-paper", action="store_true",
                   help="skip fitting and inject the published baseline estimates")
    p.add_argument("--baseline", choices=["ai_physical", "ai_labor"], default=None,
                   help="which published baseline to inject (default: by y label)")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--format", choices=["json", "csv"], action="append",
                   dest="formats", default=None,
                   help="report format; repeat for both (default: json)")
    p.add_argument("--grid-n", type=int, default=41)


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("LVDYN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise LvdynError(f"LVDYN_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _config(args: argparse.Namespace) -> AnalysisConfig:
    return AnalysisConfig(
        input_path=args.input,
        year_col=args.year_col,
        x_col=args.x_col,
        y_col=args.y_col,
        unit=args.unit,
        mode=_MODES[args.mode],
        classify_tol=args.classify_tol,
        sobol_n=args.sobol_n,
        fraction=args.fraction,
        seed=_resolve_seed(args.seed),
        params_from_paper=args.params_from_paper,
        baseline_key=args.baseline,
        out_dir=args.out,
        formats=tuple(args.formats or ("json",)),
        grid_n=args.grid_n,
    )


def _print_params(d: dict) -> None:
    params = d.get("parameters")
    if not params:
        return
    print(f"parameters ({params['source']}):")
    reg = params["regression"]
    print(f"  regression eq1: intercept={reg['intercept1']:.6g} "
          f"self={reg['self_slope1']:.6g} cross={reg['cross_slope1']:.6g} "
          f"adjR2={reg['adj_r2_1']}")
    print(f"  regression eq2: intercept={reg['intercept2']:.6g} "
          f"self={reg['self_slope2']:.6g} cross={reg['cross_slope2']:.6g} "
          f"adjR2={reg['adj_r2_2']}")
    dis = params["discrete"]
    print(f"  discrete  eq1: alpha={dis['alpha1']:.6g} self={dis['self1']:.6g} "
          f"cross={dis['cross1']:.6g}")
    print(f"  discrete  eq2: alpha={dis['alpha2']:.6g} self={dis['self2']:.6g} "
          f"cross={dis['cross2']:.6g}")
    cont = params["continuous"]
    print("  continuous:  " + "  ".join(f"{k}={v:.6g}" for k, v in cont.items()))


def _print_summary(d: dict) -> None:
    _print_params(d)
    if "interaction" in d:
        ia = d["interaction"]
        prey = f" (prey: {ia['prey_label']})" if ia.get("prey") else ""
        print(f"interaction: {ia['kind']}{prey}")
    if "equilibria" in d and d["equilibria"].get("interior"):
        x, y = d["equilibria"]["interior"]
        print(f"interior equilibrium: ({x:.2f}, {y:.2f})")
    if "stability" in d:
        st = d["stability"]
        eig = ", ".join(f"{z['re']:.4g}{z['im']:+.4g}j" if z["im"] else f"{z['re']:.4g}"
                        for z in st["eigenvalues"])
        print(f"stability: {st['classification']} (eigenvalues: {eig})")
    if "mape" in d:
        m = d["mape"]
        print(f"mape [{m['mode']}]: one-step={m['one_step_ahead']}, "
              f"free-running={m['free_running']}")
    if "sobol" in d:
        for oname, block in d["sobol"]["outputs"].items():
            st_sorted = sorted(block["total_order"].items(), key=lambda kv: -kv[1])
            top = ", ".join(f"{k}={v:.3f}" for k, v in st_sorted[:3])
            print(f"sobol {oname}: sum(S_i)={block['sum_first_order']:.3f}; "
                  f"top S_Ti: {top}")
    if d.get("incomplete"):
        print(f"NOTE: report incomplete, failed at stage {d.get('failed_stage')!r}: "
              f"{d.get('error')}")


def _cmd_pipeline(args: argparse.Namespace) -> int:
    report = run_pipeline(_config(args), stages=_COMMAND_STAGES[args.command])
    _print_summary(report.to_dict())
    if args.out:
        print(f"outputs written to {args.out}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    path = Path(args.report)
    if not path.is_file():
        raise IoError(f"report file not found: {path}")
    try:
        d = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise IoError(f"cannot parse {path}: {exc}") from exc
    _print_summary(d)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lvdyn",
        description="Fit, classify and analyze two-species interaction dynamics "
                    "from paired annual series.")
    sub = parser.add_subparsers(dest="command", required=True)

    helps = {
        "fit": "estimate coefficients and fit quality",
        "analyze": "run the full pipeline and write a report",
        "phase": "export phase-plane geometry and trajectories",
        "sobol": "equilibrium sensitivity indices only",
    }
    for name in ("fit", "analyze", "phase", "sobol"):
        p = sub.add_parser(name, help=helps[name])
        _add_common(p)
        p.set_defaults(fn=_cmd_pipeline)

    p = sub.add_parser("report", help="pretty-print an existing report.json")
    p.add_argument("--report", required=True, help="path to report.json")
    p.set_defaults(fn=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except LvdynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
