from functools import lru_cache
from typing import Optional

from config import ApplicationConfig
from src.adapter.repositories import CsvRecordRepository, JsonlRecordRepository, OpenCVImageRepository
from src.adapter.services import load_encoder
from src.app.services.encoder import ImageEncoder
from src.app.use_case import (
    SWEEP_COLUMNS,
    DecomposeImageUseCase,
    DefendManifestUseCase,
    ProtectBatchUseCase,
    ReportPairsUseCase,
    SweepUseCase,
)


@lru_cache(maxsize=4)
def get_encoder(variant_id: str, weights_dir: Optional[str] = None, device: Optional[str] = None) -> ImageEncoder:
    # one read-only handle per (variant, dir, device), shared by every worker
    return load_encoder(variant_id, weights_dir or ApplicationConfig.MODELS_DIR, device or ApplicationConfig.DEVICE)


def get_image_repository() -> OpenCVImageRepository:
    return OpenCVImageRepository()


def get_manifest_repository() -> JsonlRecordRepository:
    return JsonlRecordRepository()


def get_sweep_repository() -> CsvRecordRepository:
    return CsvRecordRepository(columns=SWEEP_COLUMNS)


def get_protect_batch_use_case(encoder: ImageEncoder) -> ProtectBatchUseCase:
    return ProtectBatchUseCase(encoder, get_image_repository(), get_manifest_repository())


def get_report_pairs_use_case() -> ReportPairsUseCase:
    return ReportPairsUseCase(get_image_repository())


def get_decompose_image_use_case() -> DecomposeImageUseCase:
    return DecomposeImageUseCase(get_image_repository())


def get_defend_manifest_use_case(encoder: ImageEncoder) -> DefendManifestUseCase:
    return DefendManifestUseCase(encoder, get_image_repository(), get_manifest_repository())


def get_sweep_use_case(encoder: ImageEncoder) -> SweepUseCase:
    return SweepUseCase(get_protect_batch_use_case(encoder), get_sweep_repository())
