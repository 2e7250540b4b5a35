from .decompose_image import DecomposeImageCommand, DecomposeImageResult, DecomposeImageUseCase
from .defend_manifest import DefendManifestCommand, DefendManifestResult, DefendManifestUseCase
from .protect_batch import ProtectBatchCommand, ProtectBatchResult, ProtectBatchUseCase
from .report_pairs import ReportPairsCommand, ReportPairsResult, ReportPairsUseCase
from .sweep import SWEEP_COLUMNS, SweepCommand, SweepResult, SweepUseCase

__all__ = [
    "DecomposeImageCommand",
    "DecomposeImageResult",
    "DecomposeImageUseCase",
    "DefendManifestCommand",
    "DefendManifestResult",
    "DefendManifestUseCase",
    "ProtectBatchCommand",
    "ProtectBatchResult",
    "ProtectBatchUseCase",
    "ReportPairsCommand",
    "ReportPairsResult",
    "ReportPairsUseCase",
    "SWEEP_COLUMNS",
    "SweepCommand",
    "SweepResult",
    "SweepUseCase",
]
