from typing import Literal

from pydantic import Field

from .base import BaseModel

DestyleMode = Literal["sita", "a", "b"]
ConstraintMode = Literal["sita", "budget", "l2"]


class LossBreakdown(BaseModel):
    destyle: float = Field(..., description="Destylization loss value for the configured mode")
    homo: float = Field(..., description="L1 gap between the homogeneous components")
    stru: float = Field(..., description="Luminance-discounted L1 gap between the structural components")
    per: float = Field(..., description="Perception term actually optimized (homo + stru, or pixel MSE in l2 mode)")
    total: float = Field(..., description="lambda * destyle + per")
    lambda_: float = Field(..., alias="lambda", description="Weight of the destylization term")

    def to_record(self) -> dict:
        return self.model_dump(by_alias=True)
