"""Exception types shared across linelab."""

from __future__ import annotations

from typing import Any


class GraphFormatError(ValueError):
    """Malformed graph6 input; ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int | None = None, line: int | None = None):
        self.offset = offset
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"byte {offset}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class MetricError(ValueError):
    """A distance matrix violates a metric axiom."""

    def __init__(self, axiom: str, witness: tuple, message: str):
        self.axiom = axiom
        self.witness = witness
        super().__init__(message)


class Refusal(Exception):
    """A recognizer could not realize the instance at the requested level.

    ``reason`` is a short machine-friendly tag, ``witness`` whatever object
    pins down the failure (a pair, a triple, an axiom name ...).
    """

    def __init__(self, reason: str, witness: Any = None, message: str | None = None):
        self.reason = reason
        self.witness = witness
        super().__init__(message or reason)


class CapExceeded(Refusal):
    """Instance is larger than the configured cap of a desk-scale oracle."""

    def __init__(self, what: str, value: int, cap: int):
        super().__init__("instance too large", (what, value, cap),
                         f"instance too large: {what}={value} exceeds cap {cap}")
