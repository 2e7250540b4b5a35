from . import decompose, defend, protect, report, sweep

COMMANDS = [protect, report, decompose, defend, sweep]

__all__ = ["COMMANDS"]
