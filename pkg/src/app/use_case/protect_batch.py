import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterator, Literal

from pydantic import Field

from constant import DEFAULT_BIT_DEPTH, MANIFEST_FILE_NAME
from libs.result import Error, Result, Return
from src.app.repositories import ImageRepository, RecordRepository
from src.app.services.encoder import ImageEncoder
from src.app.services.metrics import report
from src.app.services.sita import run_sita
from src.domain import AttackConfig, ProtectionSummary, StyleCloakError
from src.domain.base import BaseModel
from src.logger import correlation_scope

logger = logging.getLogger(__name__)


class ProtectBatchCommand(BaseModel):
    inputs: list[Path] = Field(default_factory=list, description="Images to protect, in manifest order")
    out_dir: Path = Field(..., description="Directory receiving the protected PNGs and the manifest")
    config: AttackConfig = Field(default_factory=AttackConfig)
    bit_depth: Literal[8, 16] = DEFAULT_BIT_DEPTH
    jobs: int = Field(1, ge=1, description="Images optimized concurrently")


class ProtectBatchResult(BaseModel):
    manifest: Path
    summaries: list[ProtectionSummary]

    @property
    def failed(self) -> int:
        return sum(1 for s in self.summaries if not s.ok)


def output_names(inputs: list[Path]) -> list[str]:
    """`<stem>.png` per input; a repeated stem gets its item index appended."""
    seen: set[str] = set()
    names = []
    for index, path in enumerate(inputs):
        name = f"{path.stem}.png"
        if name in seen:
            name = f"{path.stem}-{index}.png"
        seen.add(name)
        names.append(name)
    return names


class ProtectBatchUseCase:
    def __init__(self, encoder: ImageEncoder, image_repository: ImageRepository, record_repository: RecordRepository):
        self.encoder = encoder
        self.image_repository = image_repository
        self.record_repository = record_repository
        self.logger = logger

    def execute(self, command: ProtectBatchCommand) -> Result:
        """
        Protect every input independently and write one manifest line per input.

        A failing item is recorded with an `error` field and never aborts the batch.
        Item i runs with seed config.seed + i, so results do not depend on `jobs`.

        Returns:
            Result with ProtectBatchResult, or Error when the batch cannot start
        """
        config = command.config
        self.logger.info(
            f"Received ProtectBatchCommand: {len(command.inputs)} input(s), out_dir='{command.out_dir}', "
            f"digest={config.digest()}, jobs={command.jobs}"
        )
        if self.encoder.variant.id != config.encoder_variant:
            return Return.err(
                Error(
                    code="invalid_parameter",
                    message=f"Loaded encoder '{self.encoder.variant.id}' does not match '{config.encoder_variant}'",
                )
            )
        try:
            command.out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            self.logger.warning(f"Cannot create output directory '{command.out_dir}': {e}")
            return Return.err(Error.from_exception(e, code="io_error"))

        manifest = command.out_dir / MANIFEST_FILE_NAME
        names = output_names(command.inputs)
        jobs = [(index, path, command.out_dir / name) for index, (path, name) in enumerate(zip(command.inputs, names))]

        summaries: list[ProtectionSummary] = []

        def in_order() -> Iterator[dict]:
            if command.jobs == 1 or len(jobs) <= 1:
                results = (self._protect_one(*job, config, command.bit_depth) for job in jobs)
                for summary in results:
                    summaries.append(summary)
                    yield summary.to_record()
                return
            with ThreadPoolExecutor(max_workers=command.jobs, thread_name_prefix="protect") as pool:
                futures = [pool.submit(self._protect_one, *job, config, command.bit_depth) for job in jobs]
                for future in futures:
                    summary = future.result()
                    summaries.append(summary)
                    yield summary.to_record()

        # consumed here, on the calling thread: the only manifest writer
        self.record_repository.write(manifest, in_order())

        result = ProtectBatchResult(manifest=manifest, summaries=summaries)
        self.logger.info(f"Batch finished: {len(summaries) - result.failed} ok, {result.failed} failed, manifest='{manifest}'")
        return Return.ok(result)

    def _protect_one(self, index: int, path: Path, output: Path, config: AttackConfig, bit_depth: int) -> ProtectionSummary:
        item_config = config.for_item(index)
        summary = dict(
            input=str(path),
            seed=item_config.seed,
            config_digest=item_config.digest(),
            config=item_config.resolved(),
        )
        started = time.perf_counter()
        with correlation_scope(path.stem):
            self.logger.info(f"Protecting '{path}' (item {index}, seed {item_config.seed})")
            try:
                x_s = self.image_repository.load(path, item_config.image_size)
                attack = run_sita(x_s, item_config, self.encoder)
                self.image_repository.save(attack.x_adv, output, bit_depth)
                # metrics of what actually landed on disk
                stored = self.image_repository.load(output)
                metrics = report(stored, x_s)
            except StyleCloakError as e:
                self.logger.warning(f"Item '{path}' failed: [{e.code}] {e}")
                return ProtectionSummary(**summary, elapsed_s=time.perf_counter() - started, error=Error.from_exception(e).public())
            except OSError as e:
                self.logger.warning(f"Item '{path}' failed with an I/O error: {e}")
                return ProtectionSummary(
                    **summary, elapsed_s=time.perf_counter() - started, error=Error.from_exception(e, code="io_error").public()
                )
            except Exception as e:
                self.logger.error(f"Unexpected error while protecting '{path}': {e}", exc_info=True)
                return ProtectionSummary(**summary, elapsed_s=time.perf_counter() - started, error=Error.from_exception(e).public())

            self.logger.info(
                f"Protected '{path}' -> '{output}': destyle {attack.initial.destyle:.6f} -> {attack.final.destyle:.6f}, "
                f"ssim {metrics.ssim:.4f}, psnr {metrics.psnr_db:.2f} dB"
            )
            return ProtectionSummary(
                **summary,
                output=str(output),
                initial=attack.initial,
                final=attack.final,
                metrics=metrics,
                elapsed_s=time.perf_counter() - started,
            )
