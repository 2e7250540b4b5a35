from .app import create_parser, run
from .error import CliError, PartialFailureError, UsageError

__all__ = ["create_parser", "run", "CliError", "PartialFailureError", "UsageError"]
