import argparse
import logging
import sys
from typing import Optional, Sequence

import sentry_sdk

from config import ApplicationConfig
from constant import EXIT_USAGE
from libs.result import Error
from src.domain.base import generate_run_id
from src.logger import LOGGING_VALID_LEVELS, bind_correlation_id, setup_app_level_logger
from .commands import COMMANDS
from .error import CliError, UsageError

logger = logging.getLogger(__name__)

PROG = "style-cloak"


class CliArgumentParser(argparse.ArgumentParser):
    """Routes usage errors to exit code 1 instead of argparse's 2, which means partial failure here."""

    def error(self, message: str):
        raise UsageError(Error(code="usage_error", message=f"{self.prog}: {message}"))


def setup_sentry(config):
    sentry_sdk.init(
        dsn=config.DSN_SENTRY,
        traces_sample_rate=0.0,
        environment=config.SENTRY_ENVIRONMENT,
    )


def create_parser() -> CliArgumentParser:
    parser = CliArgumentParser(prog=PROG, description="Protect artwork images against style mimicry.")
    parser.add_argument("--log-level", choices=sorted(LOGGING_VALID_LEVELS), help="overrides LOG_LEVEL from env.yaml")
    parser.add_argument("--log-file", help="also write logs to this file")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=CliArgumentParser)
    subparsers.required = True
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def handle_cli_error(exc: CliError) -> int:
    logger.warning(f"Command failed: {exc.to_dict()}. Reason: {exc.get_reason()}")
    print(f"{PROG}: error: {exc.base_error.message}", file=sys.stderr)
    return exc.get_exit_code()


def handle_unexpected_error(exc: Exception) -> int:
    logger.error(f"Unexpected error: {exc}", exc_info=True)
    print(f"{PROG}: error: unexpected failure: {exc}", file=sys.stderr)
    return EXIT_USAGE


def run(argv: Optional[Sequence[str]] = None, config=None) -> int:
    """Parse `argv`, dispatch to the subcommand and map its outcome to an exit code."""
    config = config or ApplicationConfig
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except CliError as e:
        return handle_cli_error(e)

    try:
        setup_app_level_logger(name="src", level=args.log_level or config.LOG_LEVEL, log_file=args.log_file)
    except (ValueError, OSError) as e:
        print(f"{PROG}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    bind_correlation_id(generate_run_id())
    if config.ENABLE_SENTRY:
        setup_sentry(config)

    logger.debug(f"Running '{args.command}' with {vars(args)}")
    try:
        return args.func(args)
    except CliError as e:
        return handle_cli_error(e)
    except Exception as e:
        return handle_unexpected_error(e)
