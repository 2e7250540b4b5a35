import logging
from pathlib import Path

from pydantic import Field

from libs.result import Error, Result, Return
from src.app.repositories import ImageRepository, RecordRepository
from src.app.services.defense import evaluate_robustness
from src.app.services.encoder import ImageEncoder
from src.domain import AttackConfig, DefenseSpec, RobustnessReport, StyleCloakError
from src.domain.base import BaseModel

logger = logging.getLogger(__name__)


class DefendManifestCommand(BaseModel):
    manifest: Path
    out: Path = Field(..., description="JSONL file receiving one RobustnessReport per protected image")
    pipelines: list[list[DefenseSpec]] = Field(default_factory=list, description="Each entry is applied as one defense")


class DefendManifestResult(BaseModel):
    reports: list[RobustnessReport]
    skipped: int = 0

    @property
    def failed(self) -> int:
        return sum(1 for r in self.reports if r.error is not None)


def resolve_recorded_path(recorded: str, manifest: Path) -> Path:
    """Paths are stored as given to `protect`; fall back to the manifest's directory for outputs."""
    path = Path(recorded)
    if path.exists() or path.is_absolute():
        return path
    return manifest.parent / path.name


class DefendManifestUseCase:
    def __init__(self, encoder: ImageEncoder, image_repository: ImageRepository, record_repository: RecordRepository):
        self.encoder = encoder
        self.image_repository = image_repository
        self.record_repository = record_repository
        self.logger = logger

    def execute(self, command: DefendManifestCommand) -> Result:
        """
        Run the robustness harness over every successful line of a protect manifest.

        Lines that carry an `error` have no protected image and are skipped.
        """
        self.logger.info(
            f"Received DefendManifestCommand: manifest='{command.manifest}', "
            f"defenses={['+'.join(s.label() for s in p) for p in command.pipelines]}"
        )
        try:
            records = list(self.record_repository.read(command.manifest))
        except FileNotFoundError as e:
            return Return.err(Error.from_exception(e, code="invalid_input"))
        except StyleCloakError as e:
            return Return.err(Error.from_exception(e))

        reports = []
        skipped = 0
        for record in records:
            if record.get("error") or not record.get("output"):
                self.logger.info(f"Skipping '{record.get('input')}': no protected image")
                skipped += 1
                continue
            reports.append(self._evaluate(record, command))

        try:
            self.record_repository.write(command.out, (r.to_record() for r in reports))
        except OSError as e:
            return Return.err(Error.from_exception(e, code="io_error"))
        self.logger.info(f"Wrote {len(reports)} robustness report(s) to '{command.out}', skipped {skipped}")
        return Return.ok(DefendManifestResult(reports=reports, skipped=skipped))

    def _evaluate(self, record: dict, command: DefendManifestCommand) -> RobustnessReport:
        source = record.get("input", "")
        protected = record.get("output", "")
        try:
            config = AttackConfig.model_validate(record.get("config") or {})
            if config.encoder_variant != self.encoder.variant.id:
                self.logger.warning(
                    f"'{source}' was protected with '{config.encoder_variant}', measuring with '{self.encoder.variant.id}'"
                )
            x_adv = self.image_repository.load(resolve_recorded_path(protected, command.manifest))
            x_s = self.image_repository.load(Path(source), x_adv.height if x_adv.height == x_adv.width else None)
            result = evaluate_robustness(
                x_s,
                x_adv,
                self.encoder,
                command.pipelines,
                blur_sigma=config.blur_sigma,
                use_gray=config.use_gray,
                use_blur=config.use_blur,
            )
        except (StyleCloakError, ValueError) as e:
            self.logger.warning(f"Cannot evaluate '{source}': {e}")
            code = getattr(e, "code", "invalid_input")
            return RobustnessReport(input=source, protected=protected, error=Error.from_exception(e, code=code).public())
        except OSError as e:
            return RobustnessReport(
                input=source, protected=protected, error=Error.from_exception(e, code="io_error").public()
            )
        return result.model_copy(update={"input": source, "protected": protected})
