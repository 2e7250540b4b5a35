from dataclasses import dataclass
from typing import Optional

import torch


@dataclass(frozen=True)
class WaveletPyramid:
    """One-level 2-D subband decomposition; each band has shape (C, H/2, W/2)."""

    ll: torch.Tensor
    lh: torch.Tensor
    hl: torch.Tensor
    hh: torch.Tensor
    # Size before symmetric padding to even dimensions, used to crop after synthesis
    height: Optional[int] = None
    width: Optional[int] = None

    def bands(self) -> dict[str, torch.Tensor]:
        return {"ll": self.ll, "lh": self.lh, "hl": self.hl, "hh": self.hh}

    def energy(self) -> torch.Tensor:
        return sum((band**2).sum() for band in self.bands().values())
