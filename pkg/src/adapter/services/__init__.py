from .clip_encoder import ClipVisionEncoder
from .encoder_loader import expected_files, file_sha256, load_encoder, resolve_device
from .toy_encoder import ToyEncoder, toy_projection

__all__ = [
    "ClipVisionEncoder",
    "expected_files",
    "file_sha256",
    "load_encoder",
    "resolve_device",
    "ToyEncoder",
    "toy_projection",
]
