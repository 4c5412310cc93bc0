"""Entry point: ``ensb {profile,ratio,sweep,point} [options]``."""
from __future__ import annotations

import argparse
import sys
import warnings

from .. import __version__
from ..errors import ConfigError, EnsbError, PhysicsRegimeWarning
from .config import MODES, load_config
from .output import write_output
from .scans import RUNNERS, thread_count

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

HELP = {
    "profile": "resonance peak profiles P10, P11 against beta",
    "ratio": "enhancement ratio over Bethe-Heitler against v_i",
    "sweep": "observables over a one-parameter grid",
    "point": "observables at a single configuration",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ensb", description="Resonant bremsstrahlung in two pulsed laser waves")
    parser.add_argument("--version", action="version", version=f"ensb {__version__}")
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode, help=HELP[mode])
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config entry, e.g. field.rho=1.414 (repeatable)")
        p.add_argument("--output", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--threads", type=int, help="worker threads (default: ENSB_THREADS or 1)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = list(args.set)
    if args.format:
        overrides.append(f"output.format={args.format}")
    try:
        cfg = load_config(args.mode, args.config, overrides)
        threads = thread_count(args.threads)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    out = cfg.output
    path = args.output if args.output is not None else out["path"]
    warnings.simplefilter("once", PhysicsRegimeWarning)
    try:
        result = RUNNERS[args.mode](cfg, threads)
    except EnsbError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if result.failures and result.all_failed(0 if args.mode == "point" else 1):
        for message in result.failures[:5]:
            print(f"numerical error: {message}", file=sys.stderr)
        return EXIT_NUMERICAL
    if result.failures:
        print(f"warning: {len(result.failures)} value(s) could not be computed and are written as null; "
              f"first: {result.failures[0]}", file=sys.stderr)
    try:
        write_output(result, out["format"], int(out["precision"]), path, sys.stdout)
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
