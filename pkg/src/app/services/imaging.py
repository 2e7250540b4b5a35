"""
Pixel-domain operators: grayscale, separable Gaussian blur and the content
extraction X_c = Blur(Gray(X_s)).

All operators are linear and differentiable, and work on ImageTensor.data of
shape (C, H, W) or any tensor with trailing (C, H, W) dims.
"""
import logging
import math

import torch
import torch.nn.functional as F

from constant import BLUR_SIGMA, GRAY_WEIGHTS
from src.domain import ImageTensor, InvalidInputError, InvalidParameterError

logger = logging.getLogger(__name__)


def symmetric_indices(n: int, pad: int, device=None) -> torch.Tensor:
    """Indices of a half-sample symmetric extension (edge sample repeated), valid for any pad."""
    idx = torch.arange(-pad, n + pad, device=device)
    period = 2 * n
    idx = torch.remainder(idx, period)
    return torch.where(idx >= n, period - 1 - idx, idx)


def symmetric_pad(x: torch.Tensor, top: int, bottom: int, left: int, right: int) -> torch.Tensor:
    """Pad the last two dims by symmetric extension."""
    h, w = x.shape[-2], x.shape[-1]
    if top or bottom:
        rows = symmetric_indices(h, max(top, bottom), device=x.device)
        rows = rows[max(top, bottom) - top : len(rows) - (max(top, bottom) - bottom)]
        x = x.index_select(-2, rows)
    if left or right:
        cols = symmetric_indices(w, max(left, right), device=x.device)
        cols = cols[max(left, right) - left : len(cols) - (max(left, right) - right)]
        x = x.index_select(-1, cols)
    return x


def gaussian_kernel1d(sigma: float, radius: int, dtype=torch.float32, device=None) -> torch.Tensor:
    offsets = torch.arange(-radius, radius + 1, dtype=torch.float64)
    kernel = torch.exp(-(offsets**2) / (2.0 * sigma**2))
    kernel = kernel / kernel.sum()
    return kernel.to(dtype=dtype, device=device)


def blur_radius(sigma: float) -> int:
    # kernel size 2 * ceil(2 * sigma) + 1, i.e. 13 at sigma 3
    return int(math.ceil(2.0 * sigma))


def gray_tensor(x: torch.Tensor) -> torch.Tensor:
    """BT.601 luminance of a (..., 3, H, W) tensor, keeping a singleton channel dim."""
    weights = torch.tensor(GRAY_WEIGHTS, dtype=x.dtype, device=x.device).view(3, 1, 1)
    return (x * weights).sum(dim=-3, keepdim=True)


def blur_tensor(x: torch.Tensor, sigma: float = BLUR_SIGMA) -> torch.Tensor:
    """Separable Gaussian convolution of a (..., C, H, W) tensor with symmetric padding."""
    if not sigma > 0:
        raise InvalidParameterError(f"Gaussian blur needs sigma > 0, got {sigma}")
    radius = blur_radius(sigma)
    kernel = gaussian_kernel1d(sigma, radius, dtype=x.dtype, device=x.device)

    lead = x.shape[:-3]
    c, h, w = x.shape[-3:]
    flat = x.reshape(-1, c, h, w)
    padded = symmetric_pad(flat, radius, radius, radius, radius)
    horizontal = kernel.view(1, 1, 1, -1).expand(c, 1, 1, -1).contiguous()
    vertical = kernel.view(1, 1, -1, 1).expand(c, 1, -1, 1).contiguous()
    out = F.conv2d(padded, horizontal, groups=c)
    out = F.conv2d(out, vertical, groups=c)
    return out.reshape(*lead, c, h, w)


def to_grayscale(img: ImageTensor) -> ImageTensor:
    if img.channels != 3:
        raise InvalidInputError(f"to_grayscale expects a 3-channel image, got {img.channels} channel(s)")
    return img.with_data(gray_tensor(img.data))


def gaussian_blur(img: ImageTensor, sigma: float = BLUR_SIGMA) -> ImageTensor:
    return img.with_data(blur_tensor(img.data, sigma))


def content_tensor(
    x: torch.Tensor, sigma: float = BLUR_SIGMA, use_gray: bool = True, use_blur: bool = True
) -> torch.Tensor:
    out = x
    if use_gray:
        out = gray_tensor(out)
    if use_blur:
        out = blur_tensor(out, sigma)
    if out.shape[-3] == 1:
        out = out.expand(*out.shape[:-3], 3, *out.shape[-2:]).contiguous()
    return out


def extract_content(
    x_s: ImageTensor, sigma: float = BLUR_SIGMA, use_gray: bool = True, use_blur: bool = True
) -> ImageTensor:
    """
    Content image of a style reference: grayscale then Gaussian blur, replicated to 3 channels.

    Args:
        x_s: pixel-valued RGB style reference
        sigma: blur strength
        use_gray, use_blur: disable a stage to reproduce the loss-component ablation

    Returns:
        3-channel pixel-valued ImageTensor
    """
    x_s.require_rgb("extract_content")
    if x_s.signed:
        raise InvalidInputError("extract_content expects a pixel-valued image, got a signed one")
    logger.debug(f"Extracting content: sigma={sigma}, gray={use_gray}, blur={use_blur}, shape={x_s.shape}")
    return x_s.with_data(content_tensor(x_s.data, sigma, use_gray, use_blur))
