"""
Input-preprocessing defenses an infringer may apply before using a protected
image, and the harness measuring how much protection survives them.
"""
import io
import logging
from typing import Sequence, Union

import numpy as np
import torch
from PIL import Image

from constant import BLUR_SIGMA
from src.domain import DefenseOutcome, DefenseSpec, ImageTensor, InvalidInputError, InvalidParameterError, RobustnessReport
from .encoder import ImageEncoder
from .imaging import blur_tensor, content_tensor
from .losses import guarded_cosine
from .metrics import report

logger = logging.getLogger(__name__)

DefenseStages = Union[DefenseSpec, Sequence[DefenseSpec]]


def _quantize(x: torch.Tensor, levels: int) -> torch.Tensor:
    # round half up
    return torch.floor(x * levels + 0.5) / levels


def _jpeg_round_trip(x: torch.Tensor, quality: int) -> torch.Tensor:
    pixels = torch.floor(x.detach().clamp(0.0, 1.0) * 255.0 + 0.5).to(torch.uint8)
    array = pixels.permute(1, 2, 0).cpu().numpy()
    mode = "L" if array.shape[2] == 1 else "RGB"
    image = Image.fromarray(array[:, :, 0] if mode == "L" else array, mode=mode)
    with io.BytesIO() as buffer:
        image.save(buffer, format="JPEG", quality=quality)
        buffer.seek(0)
        decoded = Image.open(buffer)
        decoded.load()
        out = np.asarray(decoded, dtype=np.float32) / 255.0
    if out.ndim == 2:
        out = out[:, :, None]
    return torch.from_numpy(out).permute(2, 0, 1).to(device=x.device, dtype=x.dtype)


def apply_defense(img: ImageTensor, spec: DefenseSpec) -> ImageTensor:
    """Apply one defense to a pixel-valued image; the result stays in [0, 1]."""
    if img.signed:
        raise InvalidInputError("Defenses apply to pixel-valued images only")
    x = img.data
    if spec.kind == "jpeg":
        if not 1 <= spec.quality <= 100:
            raise InvalidParameterError(f"JPEG quality must be in [1, 100], got {spec.quality}")
        out = _jpeg_round_trip(x, spec.quality)
    elif spec.kind == "gaussian_blur":
        out = blur_tensor(x, spec.sigma).clamp(0.0, 1.0)
    elif spec.kind == "gaussian_noise":
        if spec.sigma < 0:
            raise InvalidParameterError(f"Noise sigma must be >= 0, got {spec.sigma}")
        generator = torch.Generator(device="cpu").manual_seed(spec.seed)
        noise = torch.randn(x.shape, generator=generator, dtype=torch.float64)
        out = (x + (spec.sigma * noise).to(dtype=x.dtype, device=x.device)).clamp(0.0, 1.0)
    elif spec.kind == "bit_depth":
        if not 1 <= spec.bits <= 8:
            raise InvalidParameterError(f"Bit depth must be in [1, 8], got {spec.bits}")
        out = _quantize(x, 2**spec.bits - 1)
    else:
        raise InvalidParameterError(f"Unknown defense '{spec.kind}'")
    return img.with_data(out)


def apply_pipeline(img: ImageTensor, stages: Sequence[DefenseSpec]) -> ImageTensor:
    for stage in stages:
        img = apply_defense(img, stage)
    return img


def _as_stages(item: DefenseStages) -> list[DefenseSpec]:
    return [item] if isinstance(item, DefenseSpec) else list(item)


def evaluate_robustness(
    x_s: ImageTensor,
    x_adv: ImageTensor,
    enc: ImageEncoder,
    specs: Sequence[DefenseStages],
    blur_sigma: float = BLUR_SIGMA,
    use_gray: bool = True,
    use_blur: bool = True,
) -> RobustnessReport:
    """
    Measure the destylization cosine before and after each defense.

    Each entry of `specs` is a single DefenseSpec or a stage list applied in order.
    Nothing is judged pass/fail here.
    """
    x_s.require_rgb("evaluate_robustness")
    x_adv.require_same_shape(x_s, "evaluate_robustness")
    with torch.no_grad():
        source = x_s.data.to(enc.device)
        e_s = enc.embed_tensor(source)
        e_c = enc.embed_tensor(content_tensor(source, blur_sigma, use_gray, use_blur))
        d_clean = e_s - e_c

        def destyle_cos(img: ImageTensor) -> float:
            value = float(guarded_cosine(enc.embed_tensor(img.data.to(enc.device)) - e_c, d_clean))
            return min(1.0, max(-1.0, value))

        undefended = destyle_cos(x_adv)
        outcomes = []
        for item in specs:
            stages = _as_stages(item)
            label = "+".join(stage.label() for stage in stages)
            defended = apply_pipeline(x_adv, stages)
            outcome = DefenseOutcome(
                label=label,
                stages=stages,
                report=report(defended, x_s),
                destyle_cos_defended=destyle_cos(defended),
            )
            logger.debug(f"Defense {label}: cos {undefended:.6f} -> {outcome.destyle_cos_defended:.6f}")
            outcomes.append(outcome)
    return RobustnessReport(destyle_cos_clean=undefended, defenses=outcomes)
