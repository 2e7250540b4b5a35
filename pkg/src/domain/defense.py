from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import ConfigDict, Field, ValidationError, model_validator

from constant import DEFENSE_BITS, DEFENSE_BLUR_SIGMA, DEFENSE_NOISE_SIGMA, JPEG_QUALITY
from .base import BaseModel
from .errors import InvalidParameterError
from .metrics import PerceptualReport

DefenseKind = Literal["jpeg", "gaussian_blur", "gaussian_noise", "bit_depth"]

# Parameters each kind requires, with the default used when one is omitted
_REQUIRED: dict[str, dict[str, Any]] = {
    "jpeg": {"quality": JPEG_QUALITY},
    "gaussian_blur": {"sigma": DEFENSE_BLUR_SIGMA},
    "gaussian_noise": {"sigma": DEFENSE_NOISE_SIGMA, "seed": 0},
    "bit_depth": {"bits": DEFENSE_BITS},
}
_PARAMETERS = ("quality", "sigma", "bits", "seed")

# Preprocessing bundle of the total-variance-minimization defense family, without the TV solve
TVM_ALIAS = "gaussian_blur+gaussian_noise+bit_depth"


class DefenseSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: DefenseKind
    quality: Optional[int] = Field(None, ge=1, le=100)
    sigma: Optional[float] = Field(None, ge=0.0)
    bits: Optional[int] = Field(None, ge=1, le=8)
    seed: Optional[int] = None

    @model_validator(mode="before")
    @classmethod
    def _fill_required(cls, data: Any) -> Any:
        if not isinstance(data, dict) or data.get("kind") not in _REQUIRED:
            return data
        required = _REQUIRED[data["kind"]]
        filled = dict(data)
        for name in _PARAMETERS:
            if name in required:
                if filled.get(name) is None:
                    filled[name] = required[name]
            elif filled.get(name) is not None:
                raise ValueError(f"Parameter '{name}' does not apply to defense '{data['kind']}'")
        return filled

    @model_validator(mode="after")
    def _check_blur(self) -> DefenseSpec:
        if self.kind == "gaussian_blur" and not self.sigma > 0:
            raise ValueError("gaussian_blur needs sigma > 0")
        return self

    @classmethod
    def parse(cls, text: str) -> DefenseSpec:
        """Parse `kind[:param[:seed]]`, e.g. `jpeg:75`, `gaussian_noise:0.02:7`, `bit_depth`."""
        parts = [p.strip() for p in text.strip().split(":")]
        kind, args = parts[0], parts[1:]
        payload: dict[str, Any] = {"kind": kind}
        try:
            if args and args[0]:
                if kind == "jpeg":
                    payload["quality"] = int(args[0])
                elif kind == "bit_depth":
                    payload["bits"] = int(args[0])
                else:
                    payload["sigma"] = float(args[0])
            if len(args) > 1:
                if kind != "gaussian_noise":
                    raise ValueError(f"Defense '{kind}' takes at most one parameter")
                payload["seed"] = int(args[1])
            return cls.model_validate(payload)
        except (ValueError, ValidationError) as e:
            raise InvalidParameterError(f"Invalid defense spec '{text}': {e}") from e

    def label(self) -> str:
        if self.kind == "jpeg":
            return f"jpeg:{self.quality}"
        if self.kind == "bit_depth":
            return f"bit_depth:{self.bits}"
        if self.kind == "gaussian_noise":
            return f"gaussian_noise:{self.sigma:g}:{self.seed}"
        return f"{self.kind}:{self.sigma:g}"

    def to_record(self) -> dict:
        return self.model_dump(exclude_none=True)


def parse_defense_pipeline(text: str) -> list[DefenseSpec]:
    """Parse a `+`-joined stage list; `tvm` expands to the blur/noise/bit-depth bundle."""
    text = text.strip()
    if text == "tvm":
        text = TVM_ALIAS
    stages = [DefenseSpec.parse(part) for part in text.split("+") if part.strip()]
    if not stages:
        raise InvalidParameterError(f"Empty defense spec '{text}'")
    return stages


class DefenseOutcome(BaseModel):
    label: str
    stages: list[DefenseSpec]
    report: PerceptualReport = Field(..., description="Defended adversarial image vs clean image")
    destyle_cos_defended: float = Field(..., ge=-1.0, le=1.0)

    def to_record(self) -> dict:
        return {
            "label": self.label,
            "stages": [stage.to_record() for stage in self.stages],
            "report": self.report.to_record(),
            "destyle_cos_defended": self.destyle_cos_defended,
        }


class RobustnessReport(BaseModel):
    input: Optional[str] = None
    protected: Optional[str] = None
    destyle_cos_clean: Optional[float] = Field(None, ge=-1.0, le=1.0, description="Destylization cosine of the undefended pair")
    defenses: list[DefenseOutcome] = Field(default_factory=list)
    error: Optional[dict] = None

    def to_record(self) -> dict:
        record = {
            "input": self.input,
            "protected": self.protected,
            "destyle_cos_clean": self.destyle_cos_clean,
            "defenses": [d.to_record() for d in self.defenses],
        }
        if self.error is not None:
            record["error"] = self.error
        return record
