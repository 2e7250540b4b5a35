from abc import ABC, abstractmethod

from constant import EXIT_PARTIAL, EXIT_USAGE
from libs.result import Error


class CliError(Exception, ABC):
    @abstractmethod
    def get_exit_code(self) -> int:
        pass

    @abstractmethod
    def to_dict(self) -> dict:
        pass

    def __init__(self, base_error: Error, exit_code: int):
        self.base_error = base_error
        self.exit_code = exit_code
        super().__init__(base_error.message)

    def get_reason(self):
        return self.base_error.reason


class UsageError(CliError):
    """
    Bad flags, unreadable configuration, missing inputs or weights (exit 1).
    Nothing has been written when this is raised by a command before work starts.
    """

    def __init__(self, base_error: Error, exit_code: int = EXIT_USAGE):
        super().__init__(base_error, exit_code)

    def to_dict(self):
        return {"code": self.base_error.code, "message": self.base_error.message}

    def get_exit_code(self) -> int:
        return self.exit_code


class PartialFailureError(CliError):
    """
    The run finished but at least one item failed (exit 2).
    """

    def __init__(self, base_error: Error, failed: int, total: int, exit_code: int = EXIT_PARTIAL):
        self.failed = failed
        self.total = total
        super().__init__(base_error, exit_code)

    def to_dict(self):
        return {"code": self.base_error.code, "message": self.base_error.message, "failed": self.failed, "total": self.total}

    def get_exit_code(self) -> int:
        return self.exit_code


def usage_error(message: str, code: str = "usage_error", reason="") -> UsageError:
    return UsageError(Error(code=code, message=message, reason=reason))
