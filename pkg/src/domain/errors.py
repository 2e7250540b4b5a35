from typing import Sequence


class StyleCloakError(Exception):
    """Base class for every expected failure raised by the library"""

    code = "style_cloak_error"


class InvalidInputError(StyleCloakError):
    """Tensor shape, channel count, range or finiteness violates an operation's precondition"""

    code = "invalid_input"


class InvalidParameterError(StyleCloakError):
    """A scalar knob (sigma, quality, bits, learning rate ...) is out of range"""

    code = "invalid_parameter"


class ImageDecodeError(StyleCloakError):
    """File is missing, unreadable or not a supported raster format"""

    code = "decode_error"


class DegenerateStyleError(StyleCloakError):
    """Style distance is numerically zero, the image is already content-like"""

    code = "degenerate_style"


class DivergedError(StyleCloakError):
    code = "diverged"

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"Non-finite loss at step {step}")


class EncoderLoadError(StyleCloakError):
    code = "encoder_load_error"

    def __init__(self, message: str, missing_files: Sequence[str] = ()):
        self.missing_files = list(missing_files)
        if self.missing_files:
            message = f"{message}. Missing files: {', '.join(self.missing_files)}"
        super().__init__(message)
