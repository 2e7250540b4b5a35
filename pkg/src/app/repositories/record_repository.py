from abc import ABC, abstractmethod
from pathlib import Path
from typing import Iterable, Iterator


class RecordRepository(ABC):
    """Append-style storage of flat or nested records (manifest lines, CSV rows)."""

    @abstractmethod
    def write(self, path: Path, records: Iterable[dict]) -> int:
        pass

    @abstractmethod
    def read(self, path: Path) -> Iterator[dict]:
        pass
