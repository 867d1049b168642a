from __future__ import annotations

import argparse
import asyncio
import sys
from pathlib import Path
from typing import Sequence

from beamlu.core.config import Settings
from beamlu.core.container import Container, build_container
from beamlu.core.errors import BeamLUError, ConfigError, InvalidArgumentError
from beamlu.core.logging import configure_logging, get_logger
from beamlu.services.experiment_config import OutputFormat, load_experiment_config
from beamlu.services.verification import format_table

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="beamlu", description="Block LU / BEAM experiments and bound verification")
    parser.add_argument("--quiet", action="store_true", help="only warnings and errors on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the experiment described by an INI config")
    run.add_argument("config", type=Path)
    run.add_argument("--output", type=Path, default=None, help="report directory (overrides [output] dir)")
    run.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)
    run.add_argument("--jobs", type=int, default=None, help="runs executed in parallel")

    verify = sub.add_parser("verify", help="run a named verification suite")
    verify.add_argument("suite")
    return parser


async def run_experiment(container: Container, args: argparse.Namespace) -> int:
    # --- Шаг 1: читаем и валидируем конфиг ---
    try:
        config = load_experiment_config(args.config)
    except ConfigError as exc:
        logger.error("config_invalid", field=exc.field, error=exc.message)
        print(f"error: config field {exc.field}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE

    out_dir = args.output or config.output.dir or Path(container.settings.output_dir)
    fmt = OutputFormat(args.format) if args.format else config.output.format
    jobs = args.jobs or container.settings.default_jobs

    # --- Шаг 2: выполняем прогоны ---
    summary = await container.experiment_runner.run(config, jobs=jobs)

    # --- Шаг 3: пишем отчёты ---
    try:
        paths = container.report_writer.write(out_dir, summary.records, config.echo(), fmt)
    except OSError as exc:
        print(f"error: cannot write reports to {out_dir}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    for path in paths:
        print(path)
    print(
        f"runs={len(summary.records)} failed_checks={summary.failed_checks} "
        f"numerical_failures={summary.numerical_failures} skipped={summary.skipped}"
    )
    return EXIT_OK if summary.ok else EXIT_FAILED


def run_verify(container: Container, args: argparse.Namespace) -> int:
    try:
        outcome = container.verification.run_suite(args.suite)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(format_table(outcome))
    return EXIT_OK if outcome.passed else EXIT_FAILED


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "run" and args.jobs is not None and args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE

    settings = Settings()
    configure_logging(settings, quiet=args.quiet)
    container = build_container(settings)
    container.startup()

    try:
        if args.command == "run":
            return asyncio.run(run_experiment(container, args))
        return run_verify(container, args)
    except BeamLUError as exc:
        logger.exception("command_failed", command=args.command)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
