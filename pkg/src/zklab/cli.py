"""Command-line entry point.

    zklab run <config-file> [--out DIR] [--seed N] [--override key=value]...
    zklab check-estimates [--seed N] [--out DIR] [--fast]
    zklab info <snapshot>

Exit codes: 0 success, 2 configuration error, 3 numerical divergence,
4 I/O or format error.
"""

import argparse
import sys

from .config import config_help, parse_config
from .errors import ConfigurationError, DivergenceError, FormatError, ParseError
from .experiments import run_experiment
from .io_ import snapshot_header

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_IO = 4


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="zklab",
        description="Numerical laboratory for the 2D (generalized) Zakharov-Kuznetsov equation.",
        epilog=config_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a config file")
    p_run.add_argument("config", help="path to a key = value config file")
    p_run.add_argument("--out", default=None, help="output directory (overrides config)")
    p_run.add_argument("--seed", type=int, default=None, help="seed (overrides config)")
    p_run.add_argument(
        "--override", action="append", default=[], metavar="KEY=VALUE",
        help="override one config key (repeatable)",
    )

    p_est = sub.add_parser("check-estimates", help="run the estimates suite")
    p_est.add_argument("--out", default="out-estimates")
    p_est.add_argument("--seed", type=int, default=0)
    p_est.add_argument(
        "--fast", action="store_true",
        help="small grids and 2 refinement doublings (smoke test)",
    )

    p_info = sub.add_parser("info", help="print a snapshot header")
    p_info.add_argument("snapshot", help="path to a ZKF1 snapshot")
    return parser


def _cmd_run(args):
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"zklab: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    overrides = list(args.override)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.out is not None:
        overrides.append(f"out={args.out}")
    config = parse_config(text, overrides)
    summary = run_experiment(config)
    verdicts = summary.get("verdicts", {})
    for key in sorted(verdicts):
        print(f"{key} = {verdicts[key]}")
    if summary.get("numerically_untrusted"):
        print("warning: mass drift exceeds 1e-6; run marked numerically untrusted")
    print(f"artifacts written to {config.out}")
    return EXIT_OK


def _cmd_check_estimates(args):
    overrides = [
        "experiment=estimates-suite",
        f"seed={args.seed}",
        f"out={args.out}",
    ]
    if args.fast:
        overrides += ["estimates_n=128", "estimates_decay_n=256", "estimates_doublings=2"]
    return _run_parsed("", overrides)


def _run_parsed(text, overrides):
    config = parse_config(text, overrides)
    summary = run_experiment(config)
    verdicts = summary.get("verdicts", {})
    for key in sorted(verdicts):
        print(f"{key} = {verdicts[key]}")
    print(f"artifacts written to {config.out}")
    return EXIT_OK


def _cmd_info(args):
    try:
        header = snapshot_header(args.snapshot)
    except OSError as exc:
        print(f"zklab: cannot read snapshot: {exc}", file=sys.stderr)
        return EXIT_IO
    for key in ("nx", "ny", "Lx", "Ly", "t"):
        print(f"{key} = {header[key]}")
    return EXIT_OK


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "check-estimates":
            return _cmd_check_estimates(args)
        return _cmd_info(args)
    except (ParseError, ConfigurationError) as exc:
        print(f"zklab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"zklab: numerical divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (FormatError, OSError) as exc:
        print(f"zklab: IO error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
