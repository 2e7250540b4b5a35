from __future__ import annotations

from dataclasses import dataclass

import torch

from .errors import InvalidInputError


@dataclass(frozen=True)
class ImageTensor:
    """
    Image carried as a channel-first torch tensor of shape (C, H, W), C in {1, 3}.

    Pixel-valued images live in [0, 1]. Signed residuals (wavelet bands,
    structural components, differences) set `signed=True` and may leave the
    unit interval.
    """

    data: torch.Tensor
    signed: bool = False

    def __post_init__(self):
        if not isinstance(self.data, torch.Tensor):
            raise InvalidInputError(f"Image data must be a torch.Tensor, got {type(self.data).__name__}")
        if self.data.dim() != 3:
            raise InvalidInputError(f"Image data must have shape (C, H, W), got {tuple(self.data.shape)}")
        if self.data.shape[0] not in (1, 3):
            raise InvalidInputError(f"Image must have 1 or 3 channels, got {self.data.shape[0]}")
        if not self.data.is_floating_point():
            raise InvalidInputError(f"Image data must be floating point, got {self.data.dtype}")

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return tuple(self.data.shape)

    def with_data(self, data: torch.Tensor, signed: bool | None = None) -> ImageTensor:
        return ImageTensor(data=data, signed=self.signed if signed is None else signed)

    def is_pixel_valued(self) -> bool:
        if self.signed:
            return False
        return bool(torch.all(self.data >= 0.0) and torch.all(self.data <= 1.0))

    def require_rgb(self, operation: str) -> None:
        if self.channels != 3:
            raise InvalidInputError(f"{operation} expects a 3-channel image, got {self.channels} channel(s)")

    def require_same_shape(self, other: ImageTensor, operation: str) -> None:
        if self.shape != other.shape:
            raise InvalidInputError(f"{operation} expects images of equal shape, got {self.shape} and {other.shape}")

    def __repr__(self):
        return f"<ImageTensor(shape={self.shape}, dtype={self.data.dtype}, signed={self.signed})>"
