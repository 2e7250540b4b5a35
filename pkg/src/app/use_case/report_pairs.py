import logging
from pathlib import Path
from typing import Optional

from pydantic import Field

from constant import SUPPORTED_SUFFIXES
from libs.result import Error, Result, Return
from src.app.repositories import ImageRepository
from src.app.services.metrics import report
from src.domain import PerceptualReport, StyleCloakError
from src.domain.base import BaseModel

logger = logging.getLogger(__name__)


class ReportPairsCommand(BaseModel):
    clean_dir: Path
    protected_dir: Path
    size: Optional[int] = Field(None, gt=0, description="Resize both sides to size x size; native resolution when omitted")


class PairReport(BaseModel):
    clean: str
    protected: str
    report: PerceptualReport

    def to_record(self) -> dict:
        return {"clean": self.clean, "protected": self.protected, **self.report.to_record()}


class ReportPairsResult(BaseModel):
    pairs: list[PairReport]
    mean: Optional[PerceptualReport] = None

    def aggregate_record(self) -> dict:
        record = {"aggregate": "mean", "count": len(self.pairs)}
        if self.mean is not None:
            record.update(self.mean.to_record())
        return record

    def to_records(self) -> list[dict]:
        return [pair.to_record() for pair in self.pairs] + [self.aggregate_record()]


def index_images(directory: Path) -> dict[str, Path]:
    """Supported images of `directory` keyed by stem; a stem present twice is ambiguous."""
    found: dict[str, Path] = {}
    for path in sorted(directory.iterdir()):
        if not path.is_file() or path.suffix.lower() not in SUPPORTED_SUFFIXES:
            continue
        if path.stem in found:
            raise ValueError(f"Ambiguous stem '{path.stem}' in '{directory}': {found[path.stem].name}, {path.name}")
        found[path.stem] = path
    return found


class ReportPairsUseCase:
    def __init__(self, image_repository: ImageRepository):
        self.image_repository = image_repository
        self.logger = logger

    def execute(self, command: ReportPairsCommand) -> Result:
        """
        Pair clean and protected images by file stem and measure each pair.

        Fails as a whole on orphans (a stem present on one side only), on
        mismatched pair sizes and on unreadable files.
        """
        self.logger.info(
            f"Received ReportPairsCommand: clean='{command.clean_dir}', protected='{command.protected_dir}', "
            f"size={command.size}"
        )
        for directory in (command.clean_dir, command.protected_dir):
            if not directory.is_dir():
                return Return.err(Error(code="invalid_input", message=f"Not a directory: '{directory}'"))
        try:
            clean = index_images(command.clean_dir)
            protected = index_images(command.protected_dir)
        except ValueError as e:
            return Return.err(Error.from_exception(e, code="invalid_input"))

        clean_only = sorted(set(clean) - set(protected))
        protected_only = sorted(set(protected) - set(clean))
        if clean_only or protected_only:
            orphans = [str(clean[s]) for s in clean_only] + [str(protected[s]) for s in protected_only]
            self.logger.warning(f"Unpaired files: {orphans}")
            return Return.err(
                Error(
                    code="unpaired_files",
                    message=f"{len(orphans)} unpaired file(s): {', '.join(orphans)}",
                    reason={"clean_only": clean_only, "protected_only": protected_only},
                )
            )

        pairs = []
        for stem in sorted(clean):
            try:
                a = self.image_repository.load(clean[stem], command.size)
                b = self.image_repository.load(protected[stem], command.size)
            except StyleCloakError as e:
                return Return.err(Error.from_exception(e))
            if a.shape != b.shape:
                return Return.err(
                    Error(
                        code="size_mismatch",
                        message=f"'{clean[stem]}' is {a.width}x{a.height} but '{protected[stem]}' is {b.width}x{b.height}",
                    )
                )
            pairs.append(PairReport(clean=str(clean[stem]), protected=str(protected[stem]), report=report(b, a)))
            self.logger.debug(f"Pair '{stem}': {pairs[-1].report.to_record()}")

        mean = PerceptualReport.mean([p.report for p in pairs]) if pairs else None
        self.logger.info(f"Measured {len(pairs)} pair(s)")
        return Return.ok(ReportPairsResult(pairs=pairs, mean=mean))
