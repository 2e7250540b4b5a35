from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional

from pydantic import ConfigDict, Field, model_validator

from constant import BLUR_SIGMA, IMAGE_SIZE
from .base import BaseModel
from .embedding import EncoderVariantId
from .image import ImageTensor
from .loss import ConstraintMode, DestyleMode, LossBreakdown
from .metrics import PerceptualReport


class AttackConfig(BaseModel):
    """Every knob of one protection run. Unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    lambda_: float = Field(100.0, alias="lambda", ge=0.0, description="Weight of the destylization loss")
    steps: int = Field(50, ge=0, description="Optimization steps T")
    learning_rate: float = Field(0.005, gt=0.0)
    beta1: float = Field(0.9, ge=0.0, lt=1.0)
    beta2: float = Field(0.999, ge=0.0, lt=1.0)
    adam_eps: float = Field(1e-8, gt=0.0)
    encoder_variant: EncoderVariantId = "vit-large"
    destyle_mode: DestyleMode = "sita"
    constraint_mode: ConstraintMode = "sita"
    budget_eps: float = Field(0.015, gt=0.0, description="L-inf radius in budget mode")
    budget_alpha: float = Field(0.002, gt=0.0, description="Signed-gradient step in budget mode")
    budget_steps: int = Field(40, ge=0)
    l2_lr: float = Field(0.002, gt=0.0, description="Learning rate used in l2 mode")
    blur_sigma: float = Field(BLUR_SIGMA, gt=0.0)
    use_gray: bool = True
    use_blur: bool = True
    use_homo: bool = True
    use_stru: bool = True
    clamp_every_step: bool = True
    image_size: int = Field(IMAGE_SIZE, gt=0)
    seed: int = 0

    @model_validator(mode="after")
    def _check_budget(self) -> AttackConfig:
        if self.constraint_mode == "budget" and self.budget_alpha > self.budget_eps:
            raise ValueError(f"budget_alpha ({self.budget_alpha}) must not exceed budget_eps ({self.budget_eps})")
        return self

    @property
    def effective_steps(self) -> int:
        return self.budget_steps if self.constraint_mode == "budget" else self.steps

    @property
    def effective_lr(self) -> float:
        return self.l2_lr if self.constraint_mode == "l2" else self.learning_rate

    def resolved(self) -> dict:
        return self.model_dump(by_alias=True)

    def digest(self) -> str:
        canonical = json.dumps(self.resolved(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    def for_item(self, index: int) -> AttackConfig:
        return self.model_copy(update={"seed": self.seed + index})


@dataclass
class AttackResult:
    x_adv: ImageTensor
    loss_trace: list[LossBreakdown]
    elapsed: float
    config: AttackConfig
    # Largest |x_adv - x_s| seen after any step
    max_linf: float = 0.0

    @property
    def initial(self) -> LossBreakdown:
        return self.loss_trace[0]

    @property
    def final(self) -> LossBreakdown:
        return self.loss_trace[-1]


class ProtectionSummary(BaseModel):
    """One manifest line of a protect run"""

    input: str
    output: Optional[str] = None
    seed: int
    config_digest: str
    config: dict
    initial: Optional[LossBreakdown] = None
    final: Optional[LossBreakdown] = None
    metrics: Optional[PerceptualReport] = None
    elapsed_s: float = 0.0
    error: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_record(self) -> dict:
        record = {
            "input": self.input,
            "output": self.output,
            "seed": self.seed,
            "config_digest": self.config_digest,
            "config": self.config,
            "initial": self.initial.to_record() if self.initial else None,
            "final": self.final.to_record() if self.final else None,
            "metrics": self.metrics.to_record() if self.metrics else None,
            "elapsed_s": self.elapsed_s,
        }
        if self.error is not None:
            record["error"] = self.error
        return record
