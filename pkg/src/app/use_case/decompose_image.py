import logging
from pathlib import Path
from typing import Literal, Optional

from pydantic import Field

from constant import DEFAULT_BIT_DEPTH
from libs.result import Error, Result, Return
from src.app.repositories import ImageRepository
from src.app.services.wavelet import dwt2, homogeneous_component, structural_component
from src.domain import ImageTensor, StyleCloakError
from src.domain.base import BaseModel

logger = logging.getLogger(__name__)

# Signed bands are shifted by +0.5 and clamped; ll spans [0, 2] and is halved.
VISUALIZATIONS = {
    "ll": ("ll_half", 0.5, 0.0),
    "lh": ("lh_offset", 1.0, 0.5),
    "hl": ("hl_offset", 1.0, 0.5),
    "hh": ("hh_offset", 1.0, 0.5),
    "homo": ("homo", 1.0, 0.0),
    "stru": ("stru_offset", 1.0, 0.5),
}


class DecomposeImageCommand(BaseModel):
    input: Path
    out_dir: Path
    size: Optional[int] = Field(None, gt=0)
    bit_depth: Literal[8, 16] = DEFAULT_BIT_DEPTH


class DecomposeImageResult(BaseModel):
    files: dict[str, Path]


def visualize(img: ImageTensor, scale: float, offset: float) -> ImageTensor:
    return ImageTensor((img.data * scale + offset).clamp(0.0, 1.0))


class DecomposeImageUseCase:
    def __init__(self, image_repository: ImageRepository):
        self.image_repository = image_repository
        self.logger = logger

    def execute(self, command: DecomposeImageCommand) -> Result:
        self.logger.info(f"Received DecomposeImageCommand: input='{command.input}', out_dir='{command.out_dir}'")
        try:
            x = self.image_repository.load(command.input, command.size)
            pyramid = dwt2(x)
            parts = {
                "ll": ImageTensor(pyramid.ll, signed=True),
                "lh": ImageTensor(pyramid.lh, signed=True),
                "hl": ImageTensor(pyramid.hl, signed=True),
                "hh": ImageTensor(pyramid.hh, signed=True),
                "homo": homogeneous_component(x),
                "stru": structural_component(x),
            }
            files = {}
            for key, (suffix, scale, offset) in VISUALIZATIONS.items():
                path = command.out_dir / f"{command.input.stem}_{suffix}.png"
                files[key] = self.image_repository.save(visualize(parts[key], scale, offset), path, command.bit_depth)
        except StyleCloakError as e:
            self.logger.warning(f"Cannot decompose '{command.input}': [{e.code}] {e}")
            return Return.err(Error.from_exception(e))
        except OSError as e:
            return Return.err(Error.from_exception(e, code="io_error"))

        self.logger.info(f"Wrote {len(files)} visualization(s) to '{command.out_dir}'")
        return Return.ok(DecomposeImageResult(files=files))
