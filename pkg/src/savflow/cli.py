"""Command line interface.

    savflow run       --problem kepler --scheme sav-rk4 --dt-exp 10 --periods 10 --out runs/
    savflow converge  --problem kdv --scheme sav-cn-euler --exp-range 3:20 --out tables/

Options may also come from a flat key=value config file (--config); explicit
flags win.  Exit codes: 0 success, 1 runtime/scheme error, 2 bad config.
"""
from __future__ import annotations

import argparse
import sys as _sys
from pathlib import Path

from .errors import ConfigError, SavflowError, StepError
from .harness import ExperimentConfig, run_convergence, run_experiment


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file; flags override it")
    p.add_argument("--problem", choices=("kepler", "kdv"))
    p.add_argument("--scheme", choices=("sav-cn-ext", "sav-cn-euler", "sav-rk4"))
    p.add_argument("--n-points", type=int, dest="n_points", help="grid points for kdv (default 16)")
    p.add_argument("--a-plus", type=float, dest="a_plus", help="shift inside sqrt for the added energy part")
    p.add_argument("--a-minus", type=float, dest="a_minus", help="shift inside sqrt for the subtracted energy part")
    p.add_argument("--out", help="output directory (default runs)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="savflow", description="structure-preserving integrator experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="integrate one configuration and write a run CSV")
    _add_common(run_p)
    run_p.add_argument("--dt-exp", type=int, dest="dt_exp", help="dt = base period / 2^dt_exp")
    run_p.add_argument("--dt", type=float, help="explicit step size (alternative to --dt-exp)")
    run_p.add_argument("--periods", type=int, help="integrate this many base periods")
    run_p.add_argument("--steps", type=int, help="integrate this many steps (alternative to --periods)")
    run_p.add_argument("--stride", type=int, help="record every stride-th step (default 1)")
    run_p.add_argument("--snapshots", action="store_true", default=None, help="record state columns")

    conv_p = sub.add_parser("converge", help="sweep dt = T/2^i and write a convergence table")
    _add_common(conv_p)
    conv_p.add_argument("--exp-range", dest="exp_range", help="inclusive sweep range lo:hi for i")
    conv_p.add_argument("--fit-range", dest="fit_range",
                        help="restrict the order fit to exponents lo:hi (default: automatic window)")
    return parser


def _read_config_file(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    items = {}
    for raw in p.read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"bad config line (expected key=value): {raw!r}")
        key, _, value = line.partition("=")
        items[key.strip()] = value.strip()
    return items


def _parse_exp_range(text: str):
    try:
        lo_s, _, hi_s = text.partition(":")
        return int(lo_s), int(hi_s)
    except ValueError:
        raise ConfigError(f"bad exp-range {text!r} (expected lo:hi)") from None


def _collect_config(args: argparse.Namespace) -> ExperimentConfig:
    items = _read_config_file(args.config) if args.config else {}
    if "exp_range" in items:
        lo, hi = _parse_exp_range(items.pop("exp_range"))
        items["exp_lo"], items["exp_hi"] = str(lo), str(hi)
    if "fit_range" in items:
        lo, hi = _parse_exp_range(items.pop("fit_range"))
        items["fit_lo"], items["fit_hi"] = str(lo), str(hi)
    for key in ("problem", "scheme", "dt_exp", "dt", "periods", "steps", "n_points",
                "a_plus", "a_minus", "stride", "snapshots", "out"):
        value = getattr(args, key, None)
        if value is not None:
            items[key] = "true" if value is True else str(value)
    if getattr(args, "exp_range", None) is not None:
        lo, hi = _parse_exp_range(args.exp_range)
        items["exp_lo"], items["exp_hi"] = str(lo), str(hi)
    if getattr(args, "fit_range", None) is not None:
        lo, hi = _parse_exp_range(args.fit_range)
        items["fit_lo"], items["fit_hi"] = str(lo), str(hi)
    return ExperimentConfig.from_items(items)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _collect_config(args)
        if args.command == "run":
            _, paths = run_experiment(cfg)
            for path in paths:
                print(path)
        else:
            table, path = run_convergence(cfg)
            print(path)
            print(f"fitted_order_solution={table.fitted_order_solution:.3f} "
                  f"fitted_order_energy={table.fitted_order_energy:.3f}")
        return 0
    except ConfigError as err:
        print(f"config error: {err}", file=_sys.stderr)
        return 2
    except StepError as err:
        print(f'error kind={err.kind} step={err.step} message="{err.cause}"', file=_sys.stderr)
        return 1
    except SavflowError as err:
        print(f'error kind={err.__class__.__name__} message="{err}"', file=_sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
