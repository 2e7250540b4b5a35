import argparse
import logging
from pathlib import Path

from pydantic import ValidationError

from config import ApplicationConfig
from constant import DEFAULT_BIT_DEPTH, EXIT_OK
from libs.result import Error
from src import depends
from src.app.use_case import SweepCommand, SweepResult
from src.cli.error import PartialFailureError, usage_error
from .options import add_attack_arguments, attack_config, collect_inputs, load_run_config, open_encoder, pick

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("sweep", help="protect over a lambda / learning-rate / steps grid and tabulate metrics")
    parser.add_argument("--in", dest="input", type=Path, help="image file or directory of images")
    parser.add_argument("--out", dest="output", type=Path, help="output directory; sweep.csv lands here")
    parser.add_argument("--lambdas", type=float, nargs="+", help="lambda values (config value by default)")
    parser.add_argument("--lrs", type=float, nargs="+", help="learning rates (config value by default)")
    parser.add_argument("--steps-grid", type=int, nargs="+", help="step counts T (config value by default)")
    add_attack_arguments(parser)
    parser.set_defaults(func=cmd_sweep)


def cmd_sweep(args: argparse.Namespace) -> int:
    run_config = load_run_config(args)
    base = attack_config(args, run_config)
    inputs = collect_inputs(pick(args.input, run_config, "input"))
    out_dir = pick(args.output, run_config, "output")
    if out_dir is None:
        raise usage_error("No output directory given: pass --out or set 'output' in the config file")
    try:
        command = SweepCommand(
            inputs=inputs,
            out_dir=out_dir,
            base_config=base,
            lambdas=args.lambdas or [base.lambda_],
            learning_rates=args.lrs or [base.effective_lr],
            steps_grid=args.steps_grid or [base.effective_steps],
            bit_depth=pick(args.bit_depth, run_config, "bit_depth", DEFAULT_BIT_DEPTH),
            jobs=pick(args.jobs, run_config, "jobs", ApplicationConfig.DEFAULT_JOBS),
        )
    except ValidationError as e:
        raise usage_error(f"Invalid sweep arguments: {e}", code="config_error") from e

    encoder = open_encoder(base.encoder_variant)
    result = depends.get_sweep_use_case(encoder).execute(command)
    if result.is_err():
        error = result.value
        raise usage_error(error.message, code=error.code, reason=error.reason)

    sweep: SweepResult = result.value
    print(f"{len(sweep.rows)} grid point(s) written to {sweep.csv_path}")
    if sweep.failed:
        raise PartialFailureError(
            Error(code="partial_failure", message=f"{sweep.failed} item run(s) failed across the grid"),
            failed=sweep.failed,
            total=len(sweep.rows) * len(inputs),
        )
    return EXIT_OK
