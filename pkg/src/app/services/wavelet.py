"""
One-level orthonormal Haar filter bank and the homogeneous / structural split.

Analysis on each 2x2 block [[a, b], [c, d]]:
    ll = (a + b + c + d) / 2    lh = (a + b - c - d) / 2
    hl = (a - b + c - d) / 2    hh = (a - b - c + d) / 2
"""
import torch

from src.domain import ImageTensor, InvalidInputError, WaveletPyramid
from .imaging import symmetric_pad


def _analysis(x: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]:
    a = x[..., 0::2, 0::2]
    b = x[..., 0::2, 1::2]
    c = x[..., 1::2, 0::2]
    d = x[..., 1::2, 1::2]
    ll = (a + b + c + d) * 0.5
    lh = (a + b - c - d) * 0.5
    hl = (a - b + c - d) * 0.5
    hh = (a - b - c + d) * 0.5
    return ll, lh, hl, hh


def _synthesis(ll: torch.Tensor, lh: torch.Tensor, hl: torch.Tensor, hh: torch.Tensor) -> torch.Tensor:
    a = (ll + lh + hl + hh) * 0.5
    b = (ll + lh - hl - hh) * 0.5
    c = (ll - lh + hl - hh) * 0.5
    d = (ll - lh - hl + hh) * 0.5
    h, w = ll.shape[-2], ll.shape[-1]
    top = torch.stack((a, b), dim=-1).reshape(*ll.shape[:-2], h, 2 * w)
    bottom = torch.stack((c, d), dim=-1).reshape(*ll.shape[:-2], h, 2 * w)
    return torch.stack((top, bottom), dim=-2).reshape(*ll.shape[:-2], 2 * h, 2 * w)


def _pad_even(x: torch.Tensor) -> torch.Tensor:
    h, w = x.shape[-2], x.shape[-1]
    return symmetric_pad(x, 0, h % 2, 0, w % 2)


def dwt2_tensor(x: torch.Tensor) -> WaveletPyramid:
    h, w = x.shape[-2], x.shape[-1]
    ll, lh, hl, hh = _analysis(_pad_even(x))
    return WaveletPyramid(ll=ll, lh=lh, hl=hl, hh=hh, height=h, width=w)


def idwt2_tensor(p: WaveletPyramid) -> torch.Tensor:
    shapes = {tuple(band.shape) for band in p.bands().values()}
    if len(shapes) != 1:
        raise InvalidInputError(f"Wavelet subbands must share one shape, got {sorted(shapes)}")
    x = _synthesis(p.ll, p.lh, p.hl, p.hh)
    height = p.height if p.height is not None else x.shape[-2]
    width = p.width if p.width is not None else x.shape[-1]
    if height > x.shape[-2] or width > x.shape[-1]:
        raise InvalidInputError(f"Recorded size {height}x{width} exceeds the synthesized {tuple(x.shape[-2:])}")
    return x[..., :height, :width]


def homogeneous_tensor(x: torch.Tensor) -> torch.Tensor:
    p = dwt2_tensor(x)
    zeros = torch.zeros_like(p.ll)
    return idwt2_tensor(WaveletPyramid(ll=p.ll, lh=zeros, hl=zeros, hh=zeros, height=p.height, width=p.width))


def structural_tensor(x: torch.Tensor) -> torch.Tensor:
    return x - homogeneous_tensor(x)


def dwt2(x: ImageTensor) -> WaveletPyramid:
    """Orthonormal one-level Haar analysis, per channel; odd sizes are symmetric-padded by one."""
    return dwt2_tensor(x.data)


def idwt2(p: WaveletPyramid) -> ImageTensor:
    """Exact inverse of dwt2, cropping any padding recorded in the pyramid."""
    return ImageTensor(data=idwt2_tensor(p), signed=True)


def homogeneous_component(x: ImageTensor) -> ImageTensor:
    """F_homo(x): synthesis from the ll band alone (2x2 block means)."""
    return x.with_data(homogeneous_tensor(x.data), signed=True)


def structural_component(x: ImageTensor) -> ImageTensor:
    """F_stru(x) = x - F_homo(x)."""
    return x.with_data(structural_tensor(x.data), signed=True)
