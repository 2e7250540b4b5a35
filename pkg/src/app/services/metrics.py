"""Similarity and perturbation-norm metrics between a clean and a protected image, computed in float64."""
import math

import torch
import torch.nn.functional as F

from constant import PSNR_CAP_DB, SSIM_K1, SSIM_K2, SSIM_SIGMA, SSIM_WINDOW
from src.domain import ImageTensor, InvalidInputError, PerceptualReport
from .imaging import gaussian_kernel1d


def _pair(a: ImageTensor, b: ImageTensor, operation: str) -> tuple[torch.Tensor, torch.Tensor]:
    a.require_same_shape(b, operation)
    return a.data.detach().to(torch.float64), b.data.detach().to(device=a.data.device, dtype=torch.float64)


def _window_mean(x: torch.Tensor, kernel: torch.Tensor) -> torch.Tensor:
    c = x.shape[1]
    horizontal = kernel.view(1, 1, 1, -1).expand(c, 1, 1, -1).contiguous()
    vertical = kernel.view(1, 1, -1, 1).expand(c, 1, -1, 1).contiguous()
    return F.conv2d(F.conv2d(x, horizontal, groups=c), vertical, groups=c)


def ssim(a: ImageTensor, b: ImageTensor, data_range: float = 1.0) -> float:
    """
    Gaussian-window SSIM (11x11, sigma 1.5, K1=0.01, K2=0.03) over valid window
    positions, averaged per channel and then across channels.
    """
    x, y = _pair(a, b, "ssim")
    if min(x.shape[-2:]) < SSIM_WINDOW:
        raise InvalidInputError(f"ssim needs images of at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {tuple(x.shape)}")
    kernel = gaussian_kernel1d(SSIM_SIGMA, SSIM_WINDOW // 2, dtype=torch.float64, device=x.device)
    x, y = x.unsqueeze(0), y.unsqueeze(0)
    c1 = (SSIM_K1 * data_range) ** 2
    c2 = (SSIM_K2 * data_range) ** 2

    mu_x = _window_mean(x, kernel)
    mu_y = _window_mean(y, kernel)
    sigma_xx = _window_mean(x * x, kernel) - mu_x * mu_x
    sigma_yy = _window_mean(y * y, kernel) - mu_y * mu_y
    sigma_xy = _window_mean(x * y, kernel) - mu_x * mu_y

    numerator = (2 * mu_x * mu_y + c1) * (2 * sigma_xy + c2)
    denominator = (mu_x * mu_x + mu_y * mu_y + c1) * (sigma_xx + sigma_yy + c2)
    per_channel = (numerator / denominator).mean(dim=(-2, -1))
    return float(per_channel.mean())


def psnr(a: ImageTensor, b: ImageTensor) -> float:
    x, y = _pair(a, b, "psnr")
    mse = float(((x - y) ** 2).mean())
    if mse == 0.0:
        return PSNR_CAP_DB
    return min(10.0 * math.log10(1.0 / mse), PSNR_CAP_DB)


def mae(a: ImageTensor, b: ImageTensor) -> float:
    x, y = _pair(a, b, "mae")
    return float((x - y).abs().mean())


def l2_norm(a: ImageTensor, b: ImageTensor) -> float:
    x, y = _pair(a, b, "l2_norm")
    return float(torch.linalg.vector_norm((x - y).flatten()))


def linf_norm(a: ImageTensor, b: ImageTensor) -> float:
    x, y = _pair(a, b, "linf_norm")
    return float((x - y).abs().max())


def report(a: ImageTensor, b: ImageTensor) -> PerceptualReport:
    return PerceptualReport(
        ssim=min(1.0, max(-1.0, ssim(a, b))),
        psnr_db=psnr(a, b),
        mae=mae(a, b),
        l2=l2_norm(a, b),
        linf=linf_norm(a, b),
    )
