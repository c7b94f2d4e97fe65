"""
core/errors.py
Exception hierarchy shared by the library and the CLI.

Every error carries the process exit code the CLI should use:
- 1  internal invariant breach
- 2  input / schema error
- 3  precondition error (valid data, hypotheses of the operation not met)
"""
from __future__ import annotations

from typing import Any, Optional


class NumratError(Exception):
    exit_code: int = 1

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail


class InputError(NumratError):
    exit_code = 2


class PreconditionError(NumratError):
    exit_code = 3


class InvariantError(NumratError):
    exit_code = 1


class ValidationFailed(PreconditionError):
    """Raised by operations that require validate(config).ok."""

    def __init__(self, report: Any, detail: Optional[str] = None) -> None:
        lines = [f"{v.code} at {v.location}: {v.message}" for v in report.violations]
        super().__init__(detail or "configuration failed validation: " + "; ".join(lines))
        self.report = report
