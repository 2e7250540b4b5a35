"""
Objective terms of the protection attack.

    L_destyle  cosine between style distances E(x_adv) - E(x_c) and E(x_s) - E(x_c)
    L_homo     L1 gap of the homogeneous (ll-only) components
    L_stru     L1 gap of the structural components minus the L1 gap of their luminance
    L_per      L_homo + L_stru
    L_total    lambda * L_destyle + L_per

L1 reduction: sum over channels, mean over spatial positions.
"""
import logging
from typing import NamedTuple

import torch

from constant import EPS_GUARD
from src.domain import DegenerateStyleError, EmbeddingVector, ImageTensor, InvalidParameterError, LossBreakdown
from src.domain.loss import DestyleMode
from .encoder import ImageEncoder
from .imaging import gray_tensor
from .wavelet import homogeneous_tensor, structural_tensor

logger = logging.getLogger(__name__)


class LossTerms(NamedTuple):
    destyle: torch.Tensor
    homo: torch.Tensor
    stru: torch.Tensor
    per: torch.Tensor
    total: torch.Tensor
    pixel_mse: bool = False

    def breakdown(self, lambda_: float) -> LossBreakdown:
        # Recombine in float64 so the reported identities hold exactly
        destyle, homo, stru = float(self.destyle), float(self.homo), float(self.stru)
        per = float(self.per) if self.pixel_mse else homo + stru
        return LossBreakdown(
            destyle=destyle,
            homo=homo,
            stru=stru,
            per=per,
            total=lambda_ * destyle + per,
            lambda_=float(lambda_),
        )


def guarded_cosine(u: torch.Tensor, v: torch.Tensor, what: str = "style distance") -> torch.Tensor:
    nu = torch.linalg.vector_norm(u)
    nv = torch.linalg.vector_norm(v)
    if float(nu) < EPS_GUARD or float(nv) < EPS_GUARD:
        raise DegenerateStyleError(
            f"Near-zero {what} (norms {float(nu):.3e}, {float(nv):.3e}); the image is already content-like"
        )
    return torch.dot(u, v) / (nu * nv)


def destyle_from_embeddings(
    e_adv: torch.Tensor, e_s: torch.Tensor, e_c: torch.Tensor, mode: DestyleMode = "sita"
) -> torch.Tensor:
    if mode == "sita":
        return guarded_cosine(e_adv - e_c, e_s - e_c)
    if mode == "a":
        return -(e_s - e_adv).abs().sum()
    if mode == "b":
        clean = guarded_cosine(e_s, e_c, what="embedding")
        adv = guarded_cosine(e_adv, e_c, what="embedding")
        return -(clean - adv).abs()
    raise InvalidParameterError(f"Unknown destylization mode '{mode}'")


def homogeneous_gap(delta: torch.Tensor) -> torch.Tensor:
    """L_homo as a function of delta = x_adv - x_s (F_homo is linear)."""
    return homogeneous_tensor(delta).abs().sum(dim=-3).mean(dim=(-2, -1))


def structural_gap(delta: torch.Tensor) -> torch.Tensor:
    """L_stru as a function of delta = x_adv - x_s; non-negative pixelwise since gray weights lie in [0, 1]."""
    ds = structural_tensor(delta)
    term1 = ds.abs().sum(dim=-3).mean(dim=(-2, -1))
    term2 = gray_tensor(ds).abs().sum(dim=-3).mean(dim=(-2, -1))
    return term1 - term2


def compute_terms(
    e_adv: torch.Tensor,
    e_s: torch.Tensor,
    e_c: torch.Tensor,
    delta: torch.Tensor,
    lambda_: float,
    mode: DestyleMode = "sita",
    use_homo: bool = True,
    use_stru: bool = True,
    pixel_mse: bool = False,
) -> LossTerms:
    destyle = destyle_from_embeddings(e_adv, e_s, e_c, mode)
    zero = delta.new_zeros(())
    homo = homogeneous_gap(delta) if use_homo else zero
    stru = structural_gap(delta) if use_stru else zero
    per = (delta**2).mean() if pixel_mse else homo + stru
    total = lambda_ * destyle.to(dtype=per.dtype, device=per.device) + per
    return LossTerms(destyle=destyle, homo=homo, stru=stru, per=per, total=total, pixel_mse=pixel_mse)


def style_distance(enc: ImageEncoder, x: ImageTensor, x_c: ImageTensor) -> EmbeddingVector:
    """D = E(x) - E(x_c)"""
    return enc.embed(x) - enc.embed(x_c)


def destylization_loss(
    enc: ImageEncoder, x_adv: ImageTensor, x_s: ImageTensor, x_c: ImageTensor, mode: DestyleMode = "sita"
) -> torch.Tensor:
    """
    Destylization loss as a 0-dim tensor (differentiable in x_adv).

    sita: Cos(D(x_adv), D(x_s)); a: -||E(x_s) - E(x_adv)||_1;
    b: -|Cos(E(x_s), E(x_c)) - Cos(E(x_adv), E(x_c))|

    Raises:
        DegenerateStyleError: a distance (sita) or embedding (b) has norm below 1e-8
    """
    e_adv = enc.embed(x_adv).values
    e_s = enc.embed(x_s).values
    e_c = enc.embed(x_c).values
    return destyle_from_embeddings(e_adv, e_s, e_c, mode)


def homogeneous_loss(x_adv: ImageTensor, x_s: ImageTensor) -> torch.Tensor:
    x_adv.require_same_shape(x_s, "homogeneous_loss")
    return homogeneous_gap(x_adv.data - x_s.data)


def structural_loss(x_adv: ImageTensor, x_s: ImageTensor) -> torch.Tensor:
    x_adv.require_same_shape(x_s, "structural_loss")
    x_adv.require_rgb("structural_loss")
    return structural_gap(x_adv.data - x_s.data)


def perception_loss(x_adv: ImageTensor, x_s: ImageTensor) -> torch.Tensor:
    return homogeneous_loss(x_adv, x_s) + structural_loss(x_adv, x_s)


def total_loss(
    enc: ImageEncoder,
    x_adv: ImageTensor,
    x_s: ImageTensor,
    x_c: ImageTensor,
    lambda_: float = 100.0,
    mode: DestyleMode = "sita",
) -> LossBreakdown:
    if lambda_ < 0:
        raise InvalidParameterError(f"lambda must be >= 0, got {lambda_}")
    x_adv.require_same_shape(x_s, "total_loss")
    x_adv.require_rgb("total_loss")
    with torch.no_grad():
        e_adv = enc.embed(x_adv).values
        e_s = enc.embed(x_s).values
        e_c = enc.embed(x_c).values
        terms = compute_terms(e_adv, e_s, e_c, x_adv.data - x_s.data, lambda_, mode)
    return terms.breakdown(lambda_)
