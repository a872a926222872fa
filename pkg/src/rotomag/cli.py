"""Command line interface.

Subcommands: tau-scan, field-scan, compare, table1, sensitivity.
Exit codes: 0 success, 2 config validation error, 3 numerical failure.
"""

import argparse
import sys

from .harness import (
    ConfigError,
    default_config,
    load_config,
    run_compare,
    run_field_scan,
    run_sensitivity,
    run_table1,
    run_tau_scan,
    validate_config,
    write_result,
)
from .sensitivity import FitError

_COMMANDS = {
    "tau-scan": run_tau_scan,
    "field-scan": run_field_scan,
    "compare": run_compare,
    "table1": run_table1,
    "sensitivity": run_sensitivity,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="rotomag",
        description="Rotating-NV DC magnetometry simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} sweep")
        p.add_argument("--config", type=str, default=None, help="JSON config path")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--out", type=str, default="out", help="output directory")
        p.add_argument("--workers", type=int, default=1, help="concurrent workers")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.config is not None:
            cfg = load_config(args.config)
        else:
            kind = {"table1": "report", "sensitivity": "report"}.get(args.command, args.command)
            cfg = validate_config(default_config(kind=kind))
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError(["seed: must be a nonnegative integer"])
            cfg["seed"] = args.seed
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return 2
    try:
        result = _COMMANDS[args.command](cfg, workers=max(1, args.workers))
        csv_path, json_path = write_result(result, args.out, args.command.replace("-", "_"))
    except (FitError, FloatingPointError, ZeroDivisionError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    print(csv_path)
    print(json_path)
    return 0


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
