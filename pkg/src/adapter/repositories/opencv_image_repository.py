import logging
from pathlib import Path
from typing import Optional

import cv2
import numpy as np
import torch

from constant import DEFAULT_BIT_DEPTH, IMAGE_SIZE, SUPPORTED_SUFFIXES
from src.app.repositories import ImageRepository
from src.domain import ImageDecodeError, ImageTensor, InvalidInputError, InvalidParameterError

logger = logging.getLogger(__name__)

_SCALE = {np.dtype(np.uint8): 255.0, np.dtype(np.uint16): 65535.0}
_STORAGE = {8: (np.uint8, 255.0), 16: (np.uint16, 65535.0)}


def _to_rgb(array: np.ndarray) -> np.ndarray:
    if array.ndim == 2:
        return cv2.cvtColor(array, cv2.COLOR_GRAY2RGB)
    channels = array.shape[2]
    if channels == 1:
        return cv2.cvtColor(array[:, :, 0], cv2.COLOR_GRAY2RGB)
    if channels == 4:
        return cv2.cvtColor(array, cv2.COLOR_BGRA2RGB)
    return cv2.cvtColor(array, cv2.COLOR_BGR2RGB)


class OpenCVImageRepository(ImageRepository):
    """PNG/JPEG storage through OpenCV, which keeps 16-bit samples intact."""

    def __init__(self):
        self.logger = logger

    def load(self, path: Path, target_size: Optional[int] = None) -> ImageTensor:
        path = Path(path)
        self.logger.debug(f"Repository operation: load(path='{path}', target_size={target_size})")
        if path.suffix.lower() not in SUPPORTED_SUFFIXES:
            raise ImageDecodeError(f"Unsupported image format '{path.suffix}' for '{path}'")
        try:
            buffer = np.fromfile(str(path), dtype=np.uint8)
        except OSError as e:
            raise ImageDecodeError(f"Cannot read '{path}': {e}") from e
        if buffer.size == 0:
            raise ImageDecodeError(f"Empty file '{path}'")

        array = cv2.imdecode(buffer, cv2.IMREAD_UNCHANGED)
        if array is None:
            raise ImageDecodeError(f"Cannot decode '{path}' as PNG or JPEG")
        if array.shape[0] == 0 or array.shape[1] == 0:
            raise InvalidInputError(f"Zero-area image '{path}'")
        scale = _SCALE.get(array.dtype)
        if scale is None:
            raise ImageDecodeError(f"Unsupported sample type {array.dtype} in '{path}'")

        rgb = _to_rgb(array).astype(np.float32) / np.float32(scale)
        if target_size is not None:
            if target_size <= 0:
                raise InvalidParameterError(f"target_size must be positive, got {target_size}")
            if rgb.shape[:2] != (target_size, target_size):
                rgb = cv2.resize(rgb, (target_size, target_size), interpolation=cv2.INTER_CUBIC)
                # bicubic overshoots near edges
                rgb = np.clip(rgb, 0.0, 1.0)

        self.logger.debug(f"Repository result: loaded '{path.name}' as {rgb.shape[1]}x{rgb.shape[0]}")
        return ImageTensor(torch.from_numpy(np.ascontiguousarray(rgb.transpose(2, 0, 1))))

    def save(self, img: ImageTensor, path: Path, bit_depth: int = DEFAULT_BIT_DEPTH) -> Path:
        path = Path(path)
        if bit_depth not in _STORAGE:
            raise InvalidParameterError(f"bit_depth must be 8 or 16, got {bit_depth}")
        if img.signed:
            raise InvalidInputError("Signed residuals cannot be stored as an image; offset and clamp them first")
        if not torch.isfinite(img.data).all() or not img.is_pixel_valued():
            raise InvalidInputError(f"Image values must lie in [0, 1] to be saved to '{path}'")

        dtype, max_value = _STORAGE[bit_depth]
        array = img.data.detach().cpu().to(torch.float64).numpy().transpose(1, 2, 0)
        # round half up
        quantized = np.floor(array * max_value + 0.5).astype(dtype)
        if quantized.shape[2] == 3:
            quantized = cv2.cvtColor(quantized, cv2.COLOR_RGB2BGR)
        else:
            quantized = quantized[:, :, 0]

        ok, encoded = cv2.imencode(".png", quantized)
        if not ok:
            raise OSError(f"PNG encoding failed for '{path}'")
        path.parent.mkdir(parents=True, exist_ok=True)
        encoded.tofile(str(path))
        self.logger.debug(f"Repository operation: save(path='{path}', bit_depth={bit_depth})")
        return path


_default_repository = OpenCVImageRepository()


def load_image(path: Path, target_size: Optional[int] = IMAGE_SIZE) -> ImageTensor:
    return _default_repository.load(path, target_size)


def save_image(img: ImageTensor, path: Path, bit_depth: int = DEFAULT_BIT_DEPTH) -> Path:
    return _default_repository.save(img, path, bit_depth)
