from dataclasses import dataclass
from typing import Literal, Optional

import torch
from pydantic import ConfigDict

from .base import BaseModel

EncoderVariantId = Literal["vit-large", "vit-huge", "vit-base", "toy"]

CLIP_MEAN = (0.48145466, 0.4578275, 0.40821073)
CLIP_STD = (0.26862954, 0.26130258, 0.27577711)


class EncoderVariant(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: EncoderVariantId
    input_resolution: int
    embed_dim: int
    image_mean: tuple[float, float, float]
    image_std: tuple[float, float, float]
    # Hugging Face repository the weights come from, None for the toy encoder
    checkpoint: Optional[str] = None
    # Sub directory of the weights dir holding config.json + weights
    local_dir: Optional[str] = None


ENCODER_VARIANTS: dict[str, EncoderVariant] = {
    "vit-large": EncoderVariant(
        id="vit-large",
        input_resolution=224,
        embed_dim=768,
        image_mean=CLIP_MEAN,
        image_std=CLIP_STD,
        checkpoint="openai/clip-vit-large-patch14",
        local_dir="clip-vit-large-patch14",
    ),
    "vit-huge": EncoderVariant(
        id="vit-huge",
        input_resolution=224,
        embed_dim=1024,
        image_mean=CLIP_MEAN,
        image_std=CLIP_STD,
        checkpoint="laion/CLIP-ViT-H-14-laion2B-s32B-b79K",
        local_dir="CLIP-ViT-H-14-laion2B-s32B-b79K",
    ),
    "vit-base": EncoderVariant(
        id="vit-base",
        input_resolution=224,
        embed_dim=512,
        image_mean=CLIP_MEAN,
        image_std=CLIP_STD,
        checkpoint="openai/clip-vit-base-patch16",
        local_dir="clip-vit-base-patch16",
    ),
    # 8x8 box downsample followed by a fixed 64x192 projection, no normalization shift
    "toy": EncoderVariant(
        id="toy",
        input_resolution=8,
        embed_dim=64,
        image_mean=(0.0, 0.0, 0.0),
        image_std=(1.0, 1.0, 1.0),
    ),
}


@dataclass(frozen=True)
class EmbeddingVector:
    """Raw (un-normalized) encoder output, or a difference of two such outputs."""

    values: torch.Tensor
    encoder_id: str

    @property
    def dim(self) -> int:
        return self.values.shape[-1]

    def norm(self) -> torch.Tensor:
        return torch.linalg.vector_norm(self.values)

    def __sub__(self, other: "EmbeddingVector") -> "EmbeddingVector":
        return EmbeddingVector(values=self.values - other.values, encoder_id=self.encoder_id)
