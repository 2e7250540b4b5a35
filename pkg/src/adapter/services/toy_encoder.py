import math

import torch
import torch.nn.functional as F

from libs.prng import lcg64_uniform
from src.app.services.encoder import ImageEncoder
from src.domain import ENCODER_VARIANTS

TOY_SEED = 0


def toy_projection(seed: int = TOY_SEED, embed_dim: int = 64, grid: int = 8) -> torch.Tensor:
    """Row-major (embed_dim, 3 * grid * grid) matrix with entries uniform in [-1, 1) / sqrt(fan_in)."""
    fan_in = 3 * grid * grid
    u = lcg64_uniform(seed, embed_dim * fan_in)
    matrix = (2.0 * u - 1.0) / math.sqrt(fan_in)
    return torch.from_numpy(matrix.reshape(embed_dim, fan_in))


class ToyEncoder(ImageEncoder):
    """Zero-bias linear map of the 8x8 box-downsampled image; needs no weights."""

    def __init__(self):
        super().__init__(ENCODER_VARIANTS["toy"])
        self._projection = toy_projection(TOY_SEED, self.embed_dim, self.variant.input_resolution)

    @property
    def device(self) -> torch.device:
        return torch.device("cpu")

    def preprocess(self, x: torch.Tensor) -> torch.Tensor:
        return F.adaptive_avg_pool2d(x, self.variant.input_resolution)

    def _forward(self, pixels: torch.Tensor) -> torch.Tensor:
        flat = pixels.reshape(pixels.shape[0], -1)
        return flat @ self._projection.to(dtype=flat.dtype).T
