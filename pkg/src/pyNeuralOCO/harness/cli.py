"""
Command line interface.

    pyneuraloco run --config CONFIG [--seed N] [--out DIR] [--kind K] [--seeds N ...]
    pyneuraloco verify --config CONFIG
    pyneuraloco inspect ARTIFACT

Exit codes: 0 success, 1 failed verification, 2 invalid configuration,
3 aborted run, 4 artifact write or read failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from ..core.errors import ConfigError, RunAbortedError
from ..core.serialization import MAGIC, read_header
from .config import EXPERIMENT_KINDS, load_config
from .display import format_checks, format_metadata, format_runs, format_summary
from .runner import METADATA_FILE, run, run_seeds
from .trace_io import check_regret_identity, read_trace, trace_from_frame

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_ABORTED = 3
EXIT_IO = 4


def _run(args: argparse.Namespace) -> int:
    config = load_config(args.config).with_overrides(seed=args.seed, kind=args.kind, out=args.out)
    if args.seeds:
        print(format_runs(run_seeds(config, args.seeds, args.workers)))
        return EXIT_OK
    outcome = run(config)
    print(format_summary(outcome.result["trace"], outcome.result["comparator"]))
    if outcome.result["checks"]:
        print()
        print(format_checks(outcome.result["checks"]))
    return EXIT_OK


def _verify(args: argparse.Namespace) -> int:
    config = load_config(args.config).with_overrides(kind="invariant_suite", out=args.out)
    outcome = run(config)
    print(format_checks(outcome.result["checks"]))
    return EXIT_OK if outcome.passed else EXIT_FAILED


def _inspect(args: argparse.Namespace) -> int:
    path = Path(args.artifact)
    if path.is_dir():
        path = path / METADATA_FILE
    with open(path, "rb") as stream:
        head = stream.read(len(MAGIC))
    if head == MAGIC:
        print(format_metadata(read_header(path)))
    elif path.suffix == ".csv":
        frame = read_trace(path)
        print(format_summary(trace_from_frame(frame)))
        identity = check_regret_identity(frame)
        print(f"regret identity {'ok' if identity['passed'] else 'FAILED'} (max error {identity['regret_error']:.3g})")
        return EXIT_OK if identity["passed"] else EXIT_FAILED
    else:
        print(format_metadata(json.loads(path.read_text(encoding="utf-8"))))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pyneuraloco", description="Online learning over neural networks.")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="run the configured experiment")
    run_parser.add_argument("--config", required=True)
    run_parser.add_argument("--seed", type=int)
    run_parser.add_argument("--out")
    run_parser.add_argument("--kind", choices=EXPERIMENT_KINDS)
    run_parser.add_argument("--seeds", type=int, nargs="+", help="one run per master seed, in parallel")
    run_parser.add_argument("--workers", type=int)
    run_parser.set_defaults(handler=_run)

    verify_parser = commands.add_parser("verify", help="run the invariant suite")
    verify_parser.add_argument("--config", required=True)
    verify_parser.add_argument("--out")
    verify_parser.set_defaults(handler=_verify)

    inspect_parser = commands.add_parser("inspect", help="print artifact metadata")
    inspect_parser.add_argument("artifact")
    inspect_parser.set_defaults(handler=_inspect)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except ConfigError as exc:
        logger.error("Invalid configuration: %s", exc)
        return EXIT_CONFIG
    except RunAbortedError as exc:
        logger.error("Run aborted: %s", exc)
        return EXIT_ABORTED
    except OSError as exc:
        logger.error("I/O failure: %s", exc)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
