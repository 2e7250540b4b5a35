from typing import Sequence

from pydantic import Field

from .base import BaseModel


class PerceptualReport(BaseModel):
    ssim: float = Field(..., ge=-1.0, le=1.0)
    psnr_db: float = Field(..., description="Capped at 100 dB for identical images")
    mae: float = Field(..., ge=0.0)
    l2: float = Field(..., ge=0.0, description="Euclidean norm of the flattened difference on the [0, 1] scale")
    linf: float = Field(..., ge=0.0)

    @classmethod
    def mean(cls, reports: Sequence["PerceptualReport"]) -> "PerceptualReport":
        if not reports:
            raise ValueError("Cannot average an empty list of reports")
        n = len(reports)
        return cls(
            ssim=sum(r.ssim for r in reports) / n,
            psnr_db=sum(r.psnr_db for r in reports) / n,
            mae=sum(r.mae for r in reports) / n,
            l2=sum(r.l2 for r in reports) / n,
            linf=sum(r.linf for r in reports) / n,
        )

    def to_record(self) -> dict:
        return self.model_dump()
