"""Command-line entry point: run, validate, batch, symbol-table.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
The output root is taken from --output-root, then the ILWAVE_OUTPUT_ROOT
environment variable, then the current directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import ConfigError, load_config, parse_kv_file, validate_raw
from .integrator import NumericalBlowUpError
from .scenarios import run_scenario, write_symbol_table
from .solutions import SolitonResolutionError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_NUMERICAL_ERRORS = (NumericalBlowUpError, SolitonResolutionError, FloatingPointError)


def _output_root(args) -> Path:
    if args.output_root:
        return Path(args.output_root)
    env = os.environ.get("ILWAVE_OUTPUT_ROOT")
    return Path(env) if env else Path.cwd()


def _cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        for msg in exc.errors:
            print(f"config error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        out_dir = run_scenario(cfg, _output_root(args))
    except ConfigError as exc:
        for msg in exc.errors:
            print(f"config error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(out_dir)
    return EXIT_OK


def _cmd_validate(args) -> int:
    try:
        raw = parse_kv_file(args.config)
        validate_raw(raw)
    except ConfigError as exc:
        for msg in exc.errors:
            print(msg)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"{exc}")
        return EXIT_CONFIG
    print("ok")
    return EXIT_OK


def _cmd_batch(args) -> int:
    configs = sorted(Path(args.directory).glob("*.cfg"))
    if not configs:
        print(f"config error: no .cfg files in {args.directory}", file=sys.stderr)
        return EXIT_CONFIG
    loaded = []
    failures = 0
    for path in configs:
        try:
            loaded.append((path, load_config(path)))
        except ConfigError as exc:
            failures += 1
            for msg in exc.errors:
                print(f"{path}: {msg}", file=sys.stderr)
    if failures:
        return EXIT_CONFIG
    root = _output_root(args)
    statuses = {}

    def work(item):
        path, cfg = item
        try:
            out_dir = run_scenario(cfg, root)
            return path, EXIT_OK, str(out_dir)
        except _NUMERICAL_ERRORS as exc:
            return path, EXIT_NUMERICAL, str(exc)

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        for path, code, info in pool.map(work, loaded):
            statuses[path] = code
            tag = "ok" if code == EXIT_OK else "FAILED"
            print(f"{path}: {tag} ({info})")
    if any(code != EXIT_OK for code in statuses.values()):
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_symbol_table(args) -> int:
    if args.delta <= 0:
        print("config error: delta must be positive", file=sys.stderr)
        return EXIT_CONFIG
    if args.xi_min >= args.xi_max or args.count < 2:
        print("config error: need xi_min < xi_max and count >= 2", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.output) if args.output else _output_root(args) / "symbols.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    write_symbol_table(out, args.delta, args.xi_min, args.xi_max, args.count)
    print(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ilwave",
        description="Pseudo-spectral experiments for finite-depth dispersive waves",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario config")
    p_run.add_argument("config")
    p_run.add_argument("--output-root", default=None)
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate", help="check a config without running")
    p_val.add_argument("config")
    p_val.set_defaults(func=_cmd_validate)

    p_batch = sub.add_parser("batch", help="run every .cfg in a directory")
    p_batch.add_argument("directory")
    p_batch.add_argument("--output-root", default=None)
    p_batch.add_argument("--workers", type=int, default=2)
    p_batch.set_defaults(func=_cmd_batch)

    p_tab = sub.add_parser("symbol-table", help="dump the dispersion symbols as CSV")
    p_tab.add_argument("delta", type=float)
    p_tab.add_argument("xi_min", type=float)
    p_tab.add_argument("xi_max", type=float)
    p_tab.add_argument("count", type=int)
    p_tab.add_argument("--output", default=None)
    p_tab.add_argument("--output-root", default=None)
    p_tab.set_defaults(func=_cmd_symbol_table)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
