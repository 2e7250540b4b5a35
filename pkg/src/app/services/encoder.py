from abc import ABC, abstractmethod

import torch
import torch.nn.functional as F

from src.domain import EmbeddingVector, EncoderVariant, ImageTensor, InvalidInputError


class ImageEncoder(ABC):
    """
    Frozen, differentiable image encoder.

    Preprocessing (resize to the variant resolution, per-channel normalization)
    happens inside `embed_tensor` so gradients reach the caller's pixels.
    Handles hold no per-call state and may be shared between threads.
    """

    def __init__(self, variant: EncoderVariant):
        self._variant = variant

    @property
    def variant(self) -> EncoderVariant:
        return self._variant

    @property
    def embed_dim(self) -> int:
        return self._variant.embed_dim

    @property
    @abstractmethod
    def device(self) -> torch.device:
        pass

    @abstractmethod
    def _forward(self, pixels: torch.Tensor) -> torch.Tensor:
        """Map preprocessed (N, 3, r, r) pixels to (N, D) embeddings"""
        pass

    def preprocess(self, x: torch.Tensor) -> torch.Tensor:
        size = self._variant.input_resolution
        if x.shape[-2:] != (size, size):
            x = F.interpolate(x, size=(size, size), mode="bilinear", align_corners=False)
        mean = torch.tensor(self._variant.image_mean, dtype=x.dtype, device=x.device).view(1, 3, 1, 1)
        std = torch.tensor(self._variant.image_std, dtype=x.dtype, device=x.device).view(1, 3, 1, 1)
        return (x - mean) / std

    def embed_tensor(self, x: torch.Tensor) -> torch.Tensor:
        """Embed a (3, H, W) or (N, 3, H, W) pixel tensor; differentiable in x."""
        single = x.dim() == 3
        batch = x.unsqueeze(0) if single else x
        if batch.dim() != 4 or batch.shape[1] != 3:
            raise InvalidInputError(f"Encoder expects (N, 3, H, W) pixels, got {tuple(x.shape)}")
        out = self._forward(self.preprocess(batch.to(self.device)))
        return out[0] if single else out

    def embed(self, img: ImageTensor) -> EmbeddingVector:
        img.require_rgb("embed")
        if not bool(torch.isfinite(img.data).all()):
            raise InvalidInputError("embed received non-finite pixels")
        return EmbeddingVector(values=self.embed_tensor(img.data), encoder_id=self._variant.id)
