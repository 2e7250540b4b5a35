import hashlib
import logging
import os
from typing import Optional

import torch

from src.app.services.encoder import ImageEncoder
from src.domain import ENCODER_VARIANTS, EncoderLoadError
from .clip_encoder import ClipVisionEncoder
from .toy_encoder import ToyEncoder

logger = logging.getLogger(__name__)

CONFIG_FILE = "config.json"
WEIGHT_FILES = ("model.safetensors", "pytorch_model.bin")


def resolve_device(device: Optional[str]) -> torch.device:
    if device in (None, "", "auto"):
        return torch.device("cuda" if torch.cuda.is_available() else "cpu")
    return torch.device(device)


def file_sha256(path: str, chunk_size: int = 1 << 20) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as r_file:
        for chunk in iter(lambda: r_file.read(chunk_size), b""):
            digest.update(chunk)
    return digest.hexdigest()


def expected_files(variant_id: str, weights_dir: str) -> list[str]:
    variant = ENCODER_VARIANTS[variant_id]
    model_dir = os.path.join(weights_dir, variant.local_dir)
    return [os.path.join(model_dir, CONFIG_FILE), os.path.join(model_dir, f"{WEIGHT_FILES[0]} (or {WEIGHT_FILES[1]})")]


def load_encoder(variant_id: str, weights_dir: Optional[str], device: Optional[str] = None) -> ImageEncoder:
    """
    Load an immutable encoder handle.

    The toy variant reads nothing. CLIP variants read
    `<weights_dir>/<variant.local_dir>/{config.json, model.safetensors}`.

    Raises:
        EncoderLoadError: unknown variant, missing files or unreadable checkpoint
    """
    if variant_id not in ENCODER_VARIANTS:
        raise EncoderLoadError(f"Unknown encoder variant '{variant_id}'. Known: {sorted(ENCODER_VARIANTS)}")
    if variant_id == "toy":
        logger.debug("Using toy encoder")
        return ToyEncoder()

    variant = ENCODER_VARIANTS[variant_id]
    if not weights_dir:
        raise EncoderLoadError(
            f"No weights directory configured for '{variant_id}'", missing_files=expected_files(variant_id, "<unset>")
        )
    model_dir = os.path.join(weights_dir, variant.local_dir)
    missing = []
    if not os.path.isfile(os.path.join(model_dir, CONFIG_FILE)):
        missing.append(os.path.join(model_dir, CONFIG_FILE))
    weight_paths = [os.path.join(model_dir, name) for name in WEIGHT_FILES]
    present = [path for path in weight_paths if os.path.isfile(path)]
    if not present:
        missing.append(os.path.join(model_dir, f"{WEIGHT_FILES[0]} (or {WEIGHT_FILES[1]})"))
    if missing:
        raise EncoderLoadError(
            f"Weights for '{variant_id}' ({variant.checkpoint}) not found in {model_dir}", missing_files=missing
        )

    sha256 = file_sha256(present[0])
    logger.info(f"Encoder '{variant_id}' weights {os.path.basename(present[0])} sha256={sha256}")
    try:
        return ClipVisionEncoder.from_directory(variant, model_dir, resolve_device(device), weights_sha256=sha256)
    except (OSError, ValueError, RuntimeError) as e:
        raise EncoderLoadError(f"Could not load '{variant_id}' from {model_dir}: {e}") from e
