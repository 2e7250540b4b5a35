import argparse
from pathlib import Path

from pydantic import ValidationError

from constant import DEFAULT_BIT_DEPTH, EXIT_OK
from src import depends
from src.app.use_case import DecomposeImageCommand
from src.cli.error import usage_error


def register(subparsers) -> None:
    parser = subparsers.add_parser("decompose", help="write wavelet band and homogeneous/structural visualizations")
    parser.add_argument("--in", dest="input", type=Path, required=True, help="image file")
    parser.add_argument("--out", dest="output", type=Path, required=True, help="output directory")
    parser.add_argument("--size", type=int, help="resize first (native resolution by default)")
    parser.add_argument("--bit-depth", type=int, choices=[8, 16], default=DEFAULT_BIT_DEPTH)
    parser.set_defaults(func=cmd_decompose)


def cmd_decompose(args: argparse.Namespace) -> int:
    try:
        command = DecomposeImageCommand(input=args.input, out_dir=args.output, size=args.size, bit_depth=args.bit_depth)
    except ValidationError as e:
        raise usage_error(f"Invalid decompose arguments: {e}") from e

    result = depends.get_decompose_image_use_case().execute(command)
    if result.is_err():
        error = result.value
        raise usage_error(error.message, code=error.code, reason=error.reason)
    for key, path in result.value.files.items():
        print(f"{key}\t{path}")
    return EXIT_OK
