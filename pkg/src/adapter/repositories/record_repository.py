import csv
import json
import logging
import math
import threading
from pathlib import Path
from typing import Any, Iterable, Iterator, Optional, Sequence

from constant import FLOAT_SIGNIFICANT_DIGITS
from src.app.repositories import RecordRepository
from src.domain import InvalidInputError

logger = logging.getLogger(__name__)


def round_floats(value: Any, digits: int = FLOAT_SIGNIFICANT_DIGITS) -> Any:
    """Round every float nested in dicts/lists to `digits` significant digits."""
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return value
        return float(f"{value:.{digits}g}")
    if isinstance(value, dict):
        return {k: round_floats(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(v, digits) for v in value]
    return value


class JsonlRecordRepository(RecordRepository):
    """One JSON object per line. Appends go through a lock so a single writer owns the file."""

    def __init__(self, digits: int = FLOAT_SIGNIFICANT_DIGITS):
        self.digits = digits
        self.logger = logger
        self._lock = threading.Lock()

    def dumps(self, record: dict) -> str:
        return json.dumps(round_floats(record, self.digits), ensure_ascii=False, allow_nan=False)

    def write(self, path: Path, records: Iterable[dict]) -> int:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        count = 0
        with self._lock, open(path, "w", encoding="utf-8") as f:
            for record in records:
                f.write(self.dumps(record) + "\n")
                count += 1
        self.logger.debug(f"Repository operation: write(path='{path}') => {count} record(s)")
        return count

    def read(self, path: Path) -> Iterator[dict]:
        path = Path(path)
        with open(path, "r", encoding="utf-8") as f:
            for number, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as e:
                    raise InvalidInputError(f"{path}:{number}: not a JSON object ({e.msg})") from e
                if not isinstance(record, dict):
                    raise InvalidInputError(f"{path}:{number}: expected a JSON object")
                yield record


class CsvRecordRepository(RecordRepository):
    def __init__(self, columns: Optional[Sequence[str]] = None, digits: int = FLOAT_SIGNIFICANT_DIGITS):
        self.columns = list(columns) if columns else None
        self.digits = digits
        self.logger = logger

    def write(self, path: Path, records: Iterable[dict]) -> int:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        rows = [round_floats(record, self.digits) for record in records]
        columns = self.columns or (list(rows[0].keys()) if rows else [])
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=columns, extrasaction="ignore")
            writer.writeheader()
            writer.writerows(rows)
        self.logger.debug(f"Repository operation: write(path='{path}') => {len(rows)} row(s)")
        return len(rows)

    def read(self, path: Path) -> Iterator[dict]:
        with open(Path(path), "r", encoding="utf-8", newline="") as f:
            yield from csv.DictReader(f)
