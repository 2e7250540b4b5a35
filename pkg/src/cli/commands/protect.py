import argparse
import logging
from pathlib import Path

from pydantic import ValidationError

from config import ApplicationConfig
from constant import DEFAULT_BIT_DEPTH, EXIT_OK
from libs.result import Error
from src import depends
from src.app.use_case import ProtectBatchCommand, ProtectBatchResult
from src.cli.error import PartialFailureError, usage_error
from .options import add_attack_arguments, attack_config, collect_inputs, load_run_config, open_encoder, pick

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("protect", help="protect images against style mimicry")
    parser.add_argument("--in", dest="input", type=Path, help="image file or directory of images")
    parser.add_argument("--out", dest="output", type=Path, help="output directory for PNGs and manifest.jsonl")
    add_attack_arguments(parser)
    parser.set_defaults(func=cmd_protect)


def cmd_protect(args: argparse.Namespace) -> int:
    """
    Protect every input and write `<out>/<stem>.png` plus `<out>/manifest.jsonl`.

    Exit 0 when every item succeeded, 2 when any failed, 1 on usage or config errors.
    """
    run_config = load_run_config(args)
    config = attack_config(args, run_config)
    inputs = collect_inputs(pick(args.input, run_config, "input"))
    out_dir = pick(args.output, run_config, "output")
    if out_dir is None:
        raise usage_error("No output directory given: pass --out or set 'output' in the config file")
    try:
        command = ProtectBatchCommand(
            inputs=inputs,
            out_dir=out_dir,
            config=config,
            bit_depth=pick(args.bit_depth, run_config, "bit_depth", DEFAULT_BIT_DEPTH),
            jobs=pick(args.jobs, run_config, "jobs", ApplicationConfig.DEFAULT_JOBS),
        )
    except ValidationError as e:
        raise usage_error(f"Invalid protect arguments: {e}", code="config_error") from e

    logger.info(f"protect: {len(inputs)} input(s), config digest {config.digest()}")
    encoder = open_encoder(config.encoder_variant)
    result = depends.get_protect_batch_use_case(encoder).execute(command)
    if result.is_err():
        error = result.value
        raise usage_error(error.message, code=error.code, reason=error.reason)

    batch: ProtectBatchResult = result.value
    print(f"{len(batch.summaries) - batch.failed}/{len(batch.summaries)} protected, manifest: {batch.manifest}")
    if batch.failed:
        raise PartialFailureError(
            Error(code="partial_failure", message=f"{batch.failed} of {len(batch.summaries)} item(s) failed, see {batch.manifest}"),
            failed=batch.failed,
            total=len(batch.summaries),
        )
    return EXIT_OK
