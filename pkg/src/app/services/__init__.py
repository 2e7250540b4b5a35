from .defense import apply_defense, apply_pipeline, evaluate_robustness
from .encoder import ImageEncoder
from .imaging import extract_content, gaussian_blur, to_grayscale
from .losses import (
    destylization_loss,
    homogeneous_loss,
    perception_loss,
    structural_loss,
    style_distance,
    total_loss,
)
from .metrics import l2_norm, linf_norm, mae, psnr, report, ssim
from .sita import run_sita
from .wavelet import dwt2, homogeneous_component, idwt2, structural_component

__all__ = [
    "apply_defense",
    "apply_pipeline",
    "evaluate_robustness",
    "ImageEncoder",
    "extract_content",
    "gaussian_blur",
    "to_grayscale",
    "destylization_loss",
    "homogeneous_loss",
    "perception_loss",
    "structural_loss",
    "style_distance",
    "total_loss",
    "l2_norm",
    "linf_norm",
    "mae",
    "psnr",
    "report",
    "ssim",
    "run_sita",
    "dwt2",
    "homogeneous_component",
    "idwt2",
    "structural_component",
]
