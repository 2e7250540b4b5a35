from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional

from src.domain import ImageTensor


class ImageRepository(ABC):

    @abstractmethod
    def load(self, path: Path, target_size: Optional[int] = None) -> ImageTensor:
        """Decode an RGB image in [0, 1], resized to target_size x target_size when given."""
        pass

    @abstractmethod
    def save(self, img: ImageTensor, path: Path, bit_depth: int = 16) -> Path:
        pass
