from .image_repository import ImageRepository
from .record_repository import RecordRepository

__all__ = [
    "ImageRepository",
    "RecordRepository",
]
