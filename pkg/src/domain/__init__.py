from .attack import AttackConfig, AttackResult, ProtectionSummary
from .defense import DefenseOutcome, DefenseSpec, RobustnessReport, parse_defense_pipeline
from .embedding import ENCODER_VARIANTS, EmbeddingVector, EncoderVariant
from .errors import (
    DegenerateStyleError,
    DivergedError,
    EncoderLoadError,
    ImageDecodeError,
    InvalidInputError,
    InvalidParameterError,
    StyleCloakError,
)
from .image import ImageTensor
from .loss import LossBreakdown
from .metrics import PerceptualReport
from .wavelet import WaveletPyramid

__all__ = [
    "AttackConfig",
    "AttackResult",
    "ProtectionSummary",
    "DefenseOutcome",
    "DefenseSpec",
    "RobustnessReport",
    "parse_defense_pipeline",
    "ENCODER_VARIANTS",
    "EmbeddingVector",
    "EncoderVariant",
    "DegenerateStyleError",
    "DivergedError",
    "EncoderLoadError",
    "ImageDecodeError",
    "InvalidInputError",
    "InvalidParameterError",
    "StyleCloakError",
    "ImageTensor",
    "LossBreakdown",
    "PerceptualReport",
    "WaveletPyramid",
]
