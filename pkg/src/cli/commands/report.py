import argparse
import json
import logging
from pathlib import Path

from pydantic import ValidationError

from constant import EXIT_OK
from src import depends
from src.adapter.repositories import round_floats
from src.app.use_case import ReportPairsCommand, ReportPairsResult
from src.cli.error import usage_error

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("report", help="perceptual metrics of clean/protected pairs")
    parser.add_argument("--clean", type=Path, required=True, help="directory of clean images")
    parser.add_argument("--protected", type=Path, required=True, help="directory of protected images, same stems")
    parser.add_argument("--size", type=int, help="resize both sides first (native resolution by default)")
    parser.add_argument("--out", dest="output", type=Path, help="JSONL file (stdout by default)")
    parser.set_defaults(func=cmd_report)


def cmd_report(args: argparse.Namespace) -> int:
    """One JSON line per pair, then an aggregate-mean line."""
    try:
        command = ReportPairsCommand(clean_dir=args.clean, protected_dir=args.protected, size=args.size)
    except ValidationError as e:
        raise usage_error(f"Invalid report arguments: {e}") from e

    result = depends.get_report_pairs_use_case().execute(command)
    if result.is_err():
        error = result.value
        raise usage_error(error.message, code=error.code, reason=error.reason)

    report: ReportPairsResult = result.value
    records = report.to_records()
    if args.output:
        depends.get_manifest_repository().write(args.output, records)
        logger.info(f"Wrote {len(records)} report line(s) to '{args.output}'")
    else:
        for record in records:
            print(json.dumps(round_floats(record)))
    return EXIT_OK
