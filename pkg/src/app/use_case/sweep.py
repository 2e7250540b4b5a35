import itertools
import logging
from pathlib import Path
from statistics import fmean
from typing import Literal, Optional

from pydantic import Field

from constant import DEFAULT_BIT_DEPTH
from libs.result import Error, Result, Return
from src.app.repositories import RecordRepository
from src.domain import AttackConfig
from src.domain.base import BaseModel
from .protect_batch import ProtectBatchCommand, ProtectBatchResult, ProtectBatchUseCase

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["lambda", "lr", "T", "ssim", "psnr", "mae", "l2", "linf", "final_destyle", "items", "failed"]
SWEEP_FILE_NAME = "sweep.csv"


class SweepCommand(BaseModel):
    inputs: list[Path]
    out_dir: Path
    base_config: AttackConfig = Field(default_factory=AttackConfig)
    lambdas: list[float] = Field(..., min_length=1)
    learning_rates: list[float] = Field(..., min_length=1)
    steps_grid: list[int] = Field(..., min_length=1)
    bit_depth: Literal[8, 16] = DEFAULT_BIT_DEPTH
    jobs: int = Field(1, ge=1)


class SweepResult(BaseModel):
    csv_path: Path
    rows: list[dict]
    failed: int = 0


def grid_config(base: AttackConfig, lambda_: float, lr: float, steps: int) -> AttackConfig:
    """The learning rate and step count land on the knobs the constraint mode actually uses."""
    lr_key = "l2_lr" if base.constraint_mode == "l2" else "learning_rate"
    steps_key = "budget_steps" if base.constraint_mode == "budget" else "steps"
    return AttackConfig.model_validate({**base.resolved(), "lambda": lambda_, lr_key: lr, steps_key: steps})


def point_dir_name(lambda_: float, lr: float, steps: int) -> str:
    return f"lambda{lambda_:g}_lr{lr:g}_T{steps}"


def summarize(lambda_: float, lr: float, steps: int, batch: ProtectBatchResult) -> dict:
    ok = [s for s in batch.summaries if s.ok]
    row: dict[str, Optional[float]] = {"lambda": lambda_, "lr": lr, "T": steps}
    if ok:
        row.update(
            ssim=fmean(s.metrics.ssim for s in ok),
            psnr=fmean(s.metrics.psnr_db for s in ok),
            mae=fmean(s.metrics.mae for s in ok),
            l2=fmean(s.metrics.l2 for s in ok),
            linf=fmean(s.metrics.linf for s in ok),
            final_destyle=fmean(s.final.destyle for s in ok),
        )
    row.update(items=len(batch.summaries), failed=batch.failed)
    return row


class SweepUseCase:
    def __init__(self, protect_batch: ProtectBatchUseCase, record_repository: RecordRepository):
        self.protect_batch = protect_batch
        self.record_repository = record_repository
        self.logger = logger

    def execute(self, command: SweepCommand) -> Result:
        """
        Protect the same inputs at every (lambda, lr, T) grid point and tabulate mean metrics.

        Each point keeps its own output directory and manifest under out_dir.
        """
        grid = list(itertools.product(command.lambdas, command.learning_rates, command.steps_grid))
        self.logger.info(f"Received SweepCommand: {len(grid)} grid point(s) over {len(command.inputs)} input(s)")
        try:
            configs = [grid_config(command.base_config, *point) for point in grid]
        except ValueError as e:
            return Return.err(Error.from_exception(e, code="invalid_parameter"))

        rows = []
        failed = 0
        for (lambda_, lr, steps), config in zip(grid, configs):
            self.logger.info(f"Grid point lambda={lambda_:g} lr={lr:g} T={steps}")
            result = self.protect_batch.execute(
                ProtectBatchCommand(
                    inputs=command.inputs,
                    out_dir=command.out_dir / point_dir_name(lambda_, lr, steps),
                    config=config,
                    bit_depth=command.bit_depth,
                    jobs=command.jobs,
                )
            )
            if result.is_err():
                return result
            batch: ProtectBatchResult = result.value
            failed += batch.failed
            rows.append(summarize(lambda_, lr, steps, batch))

        csv_path = command.out_dir / SWEEP_FILE_NAME
        try:
            self.record_repository.write(csv_path, rows)
        except OSError as e:
            return Return.err(Error.from_exception(e, code="io_error"))
        self.logger.info(f"Wrote {len(rows)} sweep row(s) to '{csv_path}'")
        return Return.ok(SweepResult(csv_path=csv_path, rows=rows, failed=failed))
