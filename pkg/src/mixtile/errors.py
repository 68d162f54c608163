"""Error types shared across the package.

Every failure mode that callers are expected to distinguish carries a short
machine-readable ``code`` (for example ``CAPPED`` or ``ALLOCATION_FAILED``)
so that the CLI can map it onto exit codes and JSON reports.
"""

from __future__ import annotations

from typing import Any


class MixtileError(Exception):
    code = "ERROR"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.details = details

    def to_dict(self) -> dict:
        return {"code": self.code, "message": str(self), **_plain(self.details)}


def _plain(d: dict) -> dict:
    out = {}
    for key, val in d.items():
        if isinstance(val, (int, str, float, bool)) or val is None:
            out[key] = val
        elif isinstance(val, (list, tuple)):
            out[key] = [v if isinstance(v, (int, str, float, bool)) else str(v) for v in val]
        else:
            out[key] = str(val)
    return out


class ParseError(MixtileError):
    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message, line=line)
        self.line = line


class PreconditionError(MixtileError):
    code = "PRECONDITION"


class CappedError(MixtileError):
    code = "CAPPED"


class UncoverableError(MixtileError):
    code = "UNCOVERABLE"


class UndecidedError(MixtileError):
    code = "UNDECIDED"


class CoverFailed(MixtileError):
    code = "COVER_FAILED"


class ConstructionFailed(MixtileError):
    code = "CONSTRUCTION_FAILED"


class InsufficientReservoir(MixtileError):
    code = "INSUFFICIENT_RESERVOIR"


class PartitionFailed(MixtileError):
    code = "PARTITION_FAILED"


class AllocationFailed(MixtileError):
    code = "ALLOCATION_FAILED"


class MissingWitness(MixtileError):
    code = "MISSING_WITNESS"


class RejectedError(MixtileError):
    code = "REJECTED"
