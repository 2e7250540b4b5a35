from pathlib import Path

import cv2
import numpy as np
import pytest
import torch

from src.adapter.services import ToyEncoder
from src.domain import AttackConfig, ImageTensor


def random_image(seed: int, height: int = 16, width: int = 16, dtype=torch.float32) -> ImageTensor:
    generator = torch.Generator().manual_seed(seed)
    return ImageTensor(torch.rand((3, height, width), generator=generator, dtype=torch.float64).to(dtype))


def write_png(path: Path, rgb: np.ndarray) -> Path:
    """Write an (H, W, 3) RGB uint8/uint16 array."""
    path.parent.mkdir(parents=True, exist_ok=True)
    assert cv2.imwrite(str(path), cv2.cvtColor(rgb, cv2.COLOR_RGB2BGR))
    return path


def random_png(path: Path, seed: int, size: int = 16) -> Path:
    rng = np.random.default_rng(seed)
    return write_png(path, rng.integers(0, 256, size=(size, size, 3), dtype=np.uint8))


@pytest.fixture(scope="session")
def toy_encoder() -> ToyEncoder:
    return ToyEncoder()


@pytest.fixture
def toy_config() -> AttackConfig:
    return AttackConfig(encoder_variant="toy", image_size=16, steps=5)


@pytest.fixture
def image_dir(tmp_path: Path) -> Path:
    directory = tmp_path / "art"
    for seed, name in enumerate(["a", "b", "c"]):
        random_png(directory / f"{name}.png", seed)
    return directory
