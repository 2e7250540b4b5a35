import logging

import torch
from transformers import CLIPVisionModelWithProjection

from src.app.services.encoder import ImageEncoder
from src.domain import EncoderVariant

logger = logging.getLogger(__name__)


class ClipVisionEncoder(ImageEncoder):
    """CLIP vision tower + visual projection; returns the raw `image_embeds` (not unit-normalized)."""

    def __init__(
        self,
        variant: EncoderVariant,
        model: CLIPVisionModelWithProjection,
        device: torch.device,
        weights_sha256: str = "",
    ):
        super().__init__(variant)
        self._model = model.to(device).eval()
        for parameter in self._model.parameters():
            parameter.requires_grad_(False)
        self._device = device
        self.weights_sha256 = weights_sha256

    @classmethod
    def from_directory(
        cls, variant: EncoderVariant, model_dir: str, device: torch.device, weights_sha256: str = ""
    ) -> "ClipVisionEncoder":
        logger.info(f"Loading CLIP image encoder '{variant.id}' from {model_dir}")
        model = CLIPVisionModelWithProjection.from_pretrained(model_dir, torch_dtype=torch.float32)
        projection_dim = model.config.projection_dim
        if projection_dim != variant.embed_dim:
            logger.warning(
                f"Checkpoint projection_dim={projection_dim} differs from the declared {variant.embed_dim} "
                f"for '{variant.id}', using the checkpoint value"
            )
            variant = variant.model_copy(update={"embed_dim": projection_dim})
        return cls(variant, model, device, weights_sha256)

    @property
    def device(self) -> torch.device:
        return self._device

    def _forward(self, pixels: torch.Tensor) -> torch.Tensor:
        return self._model(pixel_values=pixels.to(torch.float32)).image_embeds
