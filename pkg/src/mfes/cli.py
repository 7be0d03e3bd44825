"""Command-line interface for campaigns, evaluations, and exports.

Subcommands::

    mfes optimize        --config PATH [--seed INT] [--out DIR]
    mfes baseline-random --config PATH [--budget INT] [--seed INT] [--out DIR]
    mfes evaluate        --x LIST [--scenario NAME | --config PATH]
                         [--fidelity sim|real] [--seed INT]
    mfes export          --result PATH --format NAME [--out PATH]
    mfes fixtures        regenerate [--out PATH]

Exit codes: 0 success, 2 configuration error (also used by argparse for
usage errors), 3 model-fit failure, 4 I/O error. Campaign outputs carry no
wall-clock fields, so rerunning with the same config and seed reproduces
the files byte for byte.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .campaign import make_objective, run_mfes, run_random_search
from .config import ConfigError, load_config
from .export import (
    EXPORT_FORMATS,
    export_result,
    load_result_json,
    save_result_json,
    write_records,
)
from .fixtures import write_golden_costs
from .gp import ModelFitError
from .validation import REAL, SIM

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MODEL_FIT = 3
EXIT_IO = 4


def _load(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, master_seed=args.seed)
    return cfg


def _out_dir(args) -> Path:
    out = Path(args.out) if args.out else Path.cwd()
    out.mkdir(parents=True, exist_ok=True)
    return out


def _summarize(result, json_path, csv_path) -> None:
    x = ", ".join(f"{v:.6g}" for v in result.x_opt)
    print(f"x_opt: [{x}]")
    print(f"predicted_cost: {result.predicted_cost:.6g}")
    print(
        f"iterations: {len(result.records)} "
        f"(sim {result.n_sim}, real {result.n_real}), "
        f"stopped by {result.termination_reason}"
    )
    print(f"wrote {json_path}")
    print(f"wrote {csv_path}")


def cmd_optimize(args) -> int:
    cfg = _load(args)
    out = _out_dir(args)
    result = run_mfes(cfg)
    json_path = out / "result.json"
    csv_path = out / "records.csv"
    save_result_json(result, json_path)
    write_records(result, csv_path)
    _summarize(result, json_path, csv_path)
    return EXIT_OK


def cmd_baseline(args) -> int:
    cfg = _load(args)
    out = _out_dir(args)
    result = run_random_search(cfg, args.budget)
    json_path = out / "baseline_result.json"
    csv_path = out / "baseline_records.csv"
    save_result_json(result, json_path)
    write_records(result, csv_path)
    _summarize(result, json_path, csv_path)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    try:
        x = np.array([float(v) for v in args.x.split(",")])
    except ValueError:
        raise ConfigError(f"--x must be a comma-separated number list, got {args.x!r}")
    if args.config is not None:
        cfg = load_config(args.config)
        obj = make_objective(cfg)
    else:
        obj = make_objective(args.scenario)
    fid = REAL if args.fidelity == "real" else SIM
    cb = obj.evaluate(x, fid, args.seed)
    print(f"fidelity: {args.fidelity}")
    print(f"stability: {cb.stability:.15g}")
    print(f"penalty: {cb.penalty:.15g}")
    print(f"total: {cb.total:.15g}")
    print(f"fell: {str(bool(cb.fell)).lower()}")
    return EXIT_OK


def cmd_export(args) -> int:
    result = load_result_json(args.result)
    out = Path(args.out) if args.out else Path(args.result).parent / f"{args.format}.csv"
    export_result(result, args.format, out)
    print(f"wrote {out}")
    return EXIT_OK


def cmd_fixtures(args) -> int:
    if args.action != "regenerate":
        raise ConfigError(f"unknown fixtures action {args.action!r}; expected 'regenerate'")
    path = write_golden_costs(args.out)
    n = len(path.read_text().strip().split("\n")) - 1
    print(f"wrote {n} fixture rows to {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfes",
        description="Multi-fidelity entropy-search campaigns on the gait testbed.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    opt = sub.add_parser("optimize", help="run one entropy-search campaign")
    opt.add_argument("--config", required=True, help="config file path or bundled name")
    opt.add_argument("--seed", type=int, default=None, help="override master_seed")
    opt.add_argument("--out", default=None, help="output directory (default: cwd)")
    opt.set_defaults(func=cmd_optimize)

    base = sub.add_parser("baseline-random", help="run the random-search baseline")
    base.add_argument("--config", required=True, help="config file path or bundled name")
    base.add_argument("--budget", type=int, default=25, help="number of real evaluations")
    base.add_argument("--seed", type=int, default=None, help="override master_seed")
    base.add_argument("--out", default=None, help="output directory (default: cwd)")
    base.set_defaults(func=cmd_baseline)

    ev = sub.add_parser("evaluate", help="evaluate one gain vector")
    ev.add_argument("--x", required=True, help="comma-separated gain values")
    ev.add_argument("--scenario", default="ankle2d", help="scenario name (default ankle2d)")
    ev.add_argument("--config", default=None, help="config file supplying scenario/penalty/plane")
    ev.add_argument("--fidelity", choices=("sim", "real"), default="real")
    ev.add_argument("--seed", type=int, default=0)
    ev.set_defaults(func=cmd_evaluate)

    ex = sub.add_parser("export", help="write an analysis dataset from a result file")
    ex.add_argument("--result", required=True, help="path to a result.json")
    ex.add_argument("--format", required=True, choices=EXPORT_FORMATS)
    ex.add_argument("--out", default=None, help="output file (default: <format>.csv beside the result)")
    ex.set_defaults(func=cmd_export)

    fx = sub.add_parser("fixtures", help="manage golden cost fixtures")
    fx.add_argument("action", choices=("regenerate",))
    fx.add_argument("--out", default=None, help="fixture file to write (default: shipped file)")
    fx.set_defaults(func=cmd_fixtures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ModelFitError as e:
        print(f"error: model fit failed: {e}", file=sys.stderr)
        return EXIT_MODEL_FIT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
