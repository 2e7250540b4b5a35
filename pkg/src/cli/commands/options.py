"""Flags shared by the commands that run the optimizer."""
import argparse
from pathlib import Path
from typing import Optional

from config import ApplicationConfig
from constant import SUPPORTED_SUFFIXES
from src.domain import ENCODER_VARIANTS, AttackConfig, StyleCloakError
from src.app.services.encoder import ImageEncoder
from src.cli.error import usage_error
from src.cli.run_config import RunConfigFile, resolve_attack_config
from src import depends

# flag dest -> AttackConfig key
ATTACK_FLAGS = {
    "lambda_": "lambda",
    "steps": "steps",
    "lr": "learning_rate",
    "encoder": "encoder_variant",
    "seed": "seed",
    "constraint_mode": "constraint_mode",
    "destyle_mode": "destyle_mode",
    "blur_sigma": "blur_sigma",
    "size": "image_size",
}


def add_attack_arguments(parser: argparse.ArgumentParser) -> None:
    # every default is None so an absent flag never overrides the config file
    group = parser.add_argument_group("attack")
    group.add_argument("--config", type=Path, help="YAML run configuration (flags take precedence)")
    group.add_argument("--lambda", dest="lambda_", type=float, help="weight of the destylization loss (100)")
    group.add_argument("--steps", type=int, help="optimization steps T (50)")
    group.add_argument("--lr", type=float, help="Adam learning rate (0.005)")
    group.add_argument("--encoder", choices=sorted(ENCODER_VARIANTS), help="surrogate encoder (vit-large)")
    group.add_argument("--seed", type=int, help="base seed; item i uses seed + i (0)")
    group.add_argument("--constraint-mode", choices=["sita", "budget", "l2"], help="noise control (sita)")
    group.add_argument("--destyle-mode", choices=["sita", "a", "b"], help="destylization formulation (sita)")
    group.add_argument("--blur-sigma", type=float, help="content-extraction blur sigma (3.0)")
    group.add_argument("--size", type=int, help="square working resolution (224)")
    group.add_argument("--jobs", type=int, help=f"images processed concurrently ({ApplicationConfig.DEFAULT_JOBS})")
    group.add_argument("--bit-depth", type=int, choices=[8, 16], help="PNG sample depth of the outputs (16)")


def load_run_config(args: argparse.Namespace) -> Optional[RunConfigFile]:
    return RunConfigFile.load(args.config) if args.config else None


def attack_config(args: argparse.Namespace, run_config: Optional[RunConfigFile]) -> AttackConfig:
    overrides = {key: getattr(args, dest, None) for dest, key in ATTACK_FLAGS.items()}
    return resolve_attack_config(overrides, run_config)


def pick(flag, run_config: Optional[RunConfigFile], key: str, default=None):
    if flag is not None:
        return flag
    if run_config is not None and getattr(run_config, key) is not None:
        return getattr(run_config, key)
    return default


def collect_inputs(path: Optional[Path]) -> list[Path]:
    """A single image, or the supported images directly inside a directory, sorted by name."""
    if path is None:
        raise usage_error("No input given: pass --in or set 'input' in the config file")
    if path.is_dir():
        return sorted(p for p in path.iterdir() if p.is_file() and p.suffix.lower() in SUPPORTED_SUFFIXES)
    if path.is_file():
        return [path]
    raise usage_error(f"Input path does not exist: '{path}'", code="invalid_input")


def open_encoder(variant_id: str) -> ImageEncoder:
    try:
        return depends.get_encoder(variant_id)
    except StyleCloakError as e:
        raise usage_error(str(e), code=e.code) from e
