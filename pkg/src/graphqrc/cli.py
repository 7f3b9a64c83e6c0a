"""Command-line entry point for experiment sweeps.

Exit codes: 0 on success, 2 on configuration errors, 3 when a sweep aborts
because too many realizations failed at some grid point.
"""

from __future__ import annotations

import argparse
import json
import sys

from .experiments import (
    TASKS,
    ConfigError,
    SweepAbortedError,
    config_from_dict,
)
from .experiments import RUNNERS


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--n-total", type=int, dest="n_total", help="total number of spins")
    parser.add_argument("--k", type=int, nargs="+", dest="degrees", help="graph degree grid")
    parser.add_argument("--dt", type=float, nargs="+", dest="dts", help="step time grid")
    parser.add_argument(
        "--delta-x", type=float, nargs="+", dest="delta_xs", help="x-disorder amplitude grid"
    )
    parser.add_argument("--jx", type=float, nargs="+", dest="jxs", help="xx coupling grid")
    parser.add_argument("--realizations", type=int, help="ensemble size per grid point")
    parser.add_argument("--seed", type=int, dest="master_seed", help="master seed")
    parser.add_argument("--workers", type=int, help="parallel worker processes")
    parser.add_argument("--out", dest="out_dir", help="output directory for CSV/manifest")
    parser.add_argument("--transient", type=int, help="steps discarded before training")
    parser.add_argument("--train", type=int, help="training steps")
    parser.add_argument("--test", type=int, help="evaluation steps")
    parser.add_argument(
        "--ridge-lambda", type=float, dest="ridge_lambda", help="ridge regularization"
    )
    parser.add_argument(
        "--length-scale", type=float, dest="svm_length_scale", help="RBF kernel width"
    )
    parser.add_argument("--penalty", type=float, dest="svm_penalty", help="SVM box constraint")
    parser.add_argument("--tau-max", type=int, dest="tau_max", help="largest delay")
    parser.add_argument(
        "--noise", type=float, dest="encoding_noise", help="input encoding noise half-width"
    )
    parser.add_argument(
        "--threshold", type=float, dest="xor_threshold",
        help="accuracy threshold for the critical-disorder scan",
    )
    parser.add_argument(
        "--times", type=float, nargs="+", help="probe times for diagnostics"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphqrc",
        description="Quantum reservoir computing sweeps on random regular spin networks",
    )
    sub = parser.add_subparsers(dest="task", required=True)
    for task in TASKS:
        task_parser = sub.add_parser(task, help=f"run the {task} experiment")
        _add_common_arguments(task_parser)
    return parser


def config_from_args(args: argparse.Namespace) -> dict:
    data: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must contain a JSON object")
    data["task"] = args.task

    split = dict(data.get("split", {}))
    for flag, key in (("transient", "n_transient"), ("train", "n_train"), ("test", "n_test")):
        value = getattr(args, flag)
        if value is not None:
            split[key] = value
    if split:
        data["split"] = split

    for key in (
        "n_total", "degrees", "dts", "delta_xs", "jxs", "realizations",
        "master_seed", "workers", "out_dir", "ridge_lambda", "svm_length_scale",
        "svm_penalty", "tau_max", "encoding_noise", "xor_threshold", "times",
    ):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    data.setdefault("out_dir", "results")
    return data


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_dict(config_from_args(args))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        RUNNERS[cfg.task](cfg)
    except SweepAbortedError as exc:
        print(f"sweep aborted: {exc}", file=sys.stderr)
        return 3
    print(f"wrote results to {cfg.out_dir}")
    return 0


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
