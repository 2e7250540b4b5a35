import argparse
import logging
from pathlib import Path
from typing import Optional

from constant import EXIT_OK
from libs.result import Error
from src import depends
from src.app.use_case import DefendManifestCommand, DefendManifestResult
from src.cli.error import PartialFailureError, usage_error
from src.domain import ENCODER_VARIANTS, AttackConfig, DefenseSpec, StyleCloakError, parse_defense_pipeline
from .options import load_run_config, open_encoder

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("defend", help="measure protection under preprocessing defenses")
    parser.add_argument("--manifest", type=Path, required=True, help="manifest.jsonl written by protect")
    parser.add_argument("--out", dest="output", type=Path, required=True, help="JSONL file of robustness reports")
    parser.add_argument(
        "--defense",
        action="extend",
        nargs="+",
        help="kind[:param[:seed]], '+'-joined stages, or 'tvm'; e.g. jpeg:75 gaussian_noise:0.02:7 "
        "(replaces the config file's 'defenses')",
    )
    parser.add_argument("--encoder", choices=sorted(ENCODER_VARIANTS), help="defaults to the manifest's encoder")
    parser.add_argument("--config", type=Path, help="YAML run configuration; its 'defenses' apply when --defense is absent")
    parser.set_defaults(func=cmd_defend)


def successful_records(records: list[dict]) -> list[dict]:
    return [record for record in records if not record.get("error") and record.get("output")]


def manifest_encoder(records: list[dict]) -> Optional[str]:
    """Encoder variant of the first successful manifest line, None when no line succeeded."""
    for record in successful_records(records):
        variant = (record.get("config") or {}).get("encoder_variant")
        if variant:
            return variant
    return None


def resolve_pipelines(args: argparse.Namespace) -> list[list[DefenseSpec]]:
    """--defense flags replace the config file's `defenses` entirely."""
    run_config = load_run_config(args)
    if args.defense is None:
        return run_config.defense_pipelines() if run_config else []
    try:
        return [parse_defense_pipeline(text) for text in args.defense]
    except StyleCloakError as e:
        raise usage_error(str(e), code=e.code) from e


def cmd_defend(args: argparse.Namespace) -> int:
    pipelines = resolve_pipelines(args)
    if not args.manifest.is_file():
        raise usage_error(f"Manifest not found: '{args.manifest}'", code="invalid_input")

    repository = depends.get_manifest_repository()
    try:
        records = list(repository.read(args.manifest))
    except StyleCloakError as e:
        raise usage_error(str(e), code=e.code) from e

    if not successful_records(records):
        # nothing to measure, so no encoder is needed
        repository.write(args.output, [])
        logger.info(f"No protected image in '{args.manifest}', wrote an empty report")
        print(f"0 report(s) written to {args.output}, {len(records)} skipped")
        return EXIT_OK

    variant = args.encoder or manifest_encoder(records) or AttackConfig().encoder_variant
    encoder = open_encoder(variant)
    command = DefendManifestCommand(manifest=args.manifest, out=args.output, pipelines=pipelines)
    result = depends.get_defend_manifest_use_case(encoder).execute(command)
    if result.is_err():
        error = result.value
        raise usage_error(error.message, code=error.code, reason=error.reason)

    defended: DefendManifestResult = result.value
    print(f"{len(defended.reports)} report(s) written to {args.output}, {defended.skipped} skipped")
    if defended.failed:
        raise PartialFailureError(
            Error(code="partial_failure", message=f"{defended.failed} of {len(defended.reports)} image(s) could not be evaluated"),
            failed=defended.failed,
            total=len(defended.reports),
        )
    return EXIT_OK
