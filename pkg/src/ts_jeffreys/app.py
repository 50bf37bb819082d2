from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import NoReturn

from ts_jeffreys import __version__
from ts_jeffreys.bandit.episode import lai_robbins_coefficient
from ts_jeffreys.config import ExperimentSpec
from ts_jeffreys.errors import BoundViolationError, ConfigError, DomainError
from ts_jeffreys.experiments.pipeline import ConcentrationPipeline, SimulationPipeline
from ts_jeffreys.families.parser import FAMILY_GRAMMARS
from ts_jeffreys.storage.csv_store import ResultStore
from ts_jeffreys.storage.models import RunProgress

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VIOLATION = 2

COMMANDS = ("simulate", "concentration", "lower-bound", "list-families")


class _Parser(argparse.ArgumentParser):
    """Usage errors share the configuration exit code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ts-jeffreys",
        description="Thompson Sampling with Jeffreys priors for exponential "
        "family bandits, plus a concentration lab.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=Path, help="key=value experiment file")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--horizon", type=int)
    parser.add_argument("--runs", type=int)
    parser.add_argument("--out", type=Path, help="output directory for CSV files")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--log-level")
    parser.add_argument("--log-file", type=Path)
    return parser


def setup_logging(level: str, log_file: Path | None) -> None:
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if log_file is not None:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        handlers=handlers,
        force=True,
    )


def log_progress(progress: RunProgress) -> None:
    logger.info(
        "[%s %3.0f%%] %s",
        progress.phase,
        progress.percent_complete * 100,
        progress.current_action,
    )


def run(spec: ExperimentSpec) -> int:
    store = ResultStore(spec.out)
    match spec.command:
        case "list-families":
            for _, _, _, grammar in FAMILY_GRAMMARS:
                print(grammar)
        case "lower-bound":
            print(f"{lai_robbins_coefficient(spec.build_instance()):.4f}")
        case "simulate":
            result = SimulationPipeline(spec, store, log_progress).run()
            for path in result.files:
                print(path)
        case "concentration":
            outcome = ConcentrationPipeline(spec, store, log_progress).run()
            for path in outcome.files:
                print(path)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = ExperimentSpec.load(
            args.config,
            command=args.command,
            seed=args.seed,
            horizon=args.horizon,
            runs=args.runs,
            out=args.out,
            workers=args.workers,
            log_level=args.log_level,
        )
    except ConfigError as e:
        print(f"ts-jeffreys: {e}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        setup_logging(spec.log_level, args.log_file)
    except OSError as e:
        print(f"ts-jeffreys: cannot open log file: {e}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        return run(spec)
    except BoundViolationError as e:
        logger.error("%s", e)
        return EXIT_VIOLATION
    except (ConfigError, DomainError, OSError) as e:
        logger.error("%s", e)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
