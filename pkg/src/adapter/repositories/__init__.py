from .opencv_image_repository import OpenCVImageRepository, load_image, save_image
from .record_repository import CsvRecordRepository, JsonlRecordRepository, round_floats

__all__ = [
    "OpenCVImageRepository",
    "load_image",
    "save_image",
    "CsvRecordRepository",
    "JsonlRecordRepository",
    "round_floats",
]
