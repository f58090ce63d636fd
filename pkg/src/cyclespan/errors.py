"""Structured errors shared across the package.

Every failure that the CLI maps to exit code 1 derives from
:class:`CyclespanError` and carries a machine-readable ``code`` plus a
``payload`` dict, so callers (and the ``validate`` subcommand) never have to
parse prose.
"""

from __future__ import annotations

from typing import Any


class CyclespanError(Exception):
    """Base class for structured failures."""

    code = "error"

    def __init__(self, message: str, **payload: Any) -> None:
        super().__init__(message)
        self.payload = payload

    def to_json(self) -> dict[str, Any]:
        return {"error": self.code, "message": str(self), "detail": _plain(self.payload)}


def _plain(obj: Any) -> Any:
    """Best-effort conversion of payload values into JSON-safe types."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        seq = sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
        return [_plain(v) for v in seq]
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return str(obj)


class NotACycle(CyclespanError):
    """A vertex sequence failed cycle validation."""

    code = "not-a-cycle"

    def __init__(self, reason: str, index: int) -> None:
        super().__init__(f"not a cycle: {reason} (at index {index})", reason=reason, index=index)
        self.reason = reason
        self.index = index


class StageFailure(CyclespanError):
    """A pipeline stage could not establish its postcondition."""

    code = "stage-failure"

    def __init__(self, stage: str, diagnostic: str, **payload: Any) -> None:
        super().__init__(f"stage {stage!r} failed: {diagnostic}", stage=stage, diagnostic=diagnostic, **payload)
        self.stage = stage
        self.diagnostic = diagnostic


class TargetOutOfRange(CyclespanError):
    """A requested cycle length is outside what the trace can deliver."""

    code = "target-out-of-range"


class BudgetExhausted(CyclespanError):
    """An enumeration stopped before it could decide the question."""

    code = "budget-exhausted"


class CutoffExceeded(CyclespanError):
    """An exhaustive check was requested above the exhaustive size cutoff."""

    code = "too-large"


class InvalidInput(CyclespanError):
    """An argument is structurally unsuitable (wrong graph class, etc.)."""

    code = "invalid-input"


class PreconditionError(CyclespanError):
    """A documented operation precondition does not hold."""

    code = "precondition-failed"


class ComponentTooSmall(CyclespanError):
    """The start vertex lives in a component smaller than required."""

    code = "component-too-small"


class PathShortfall(CyclespanError):
    """DFS did not reach the requested depth."""

    code = "path-shortfall"

    def __init__(self, achieved: tuple[int, ...], required: int) -> None:
        super().__init__(
            f"deepest path has length {len(achieved) - 1}, required {required}",
            achieved=list(achieved),
            required=required,
        )
        self.achieved = achieved


class EmbedFailure(CyclespanError):
    """Tree embedding gave up within its attempt budget."""

    code = "embedding-failed"


class AssemblyViolation(CyclespanError):
    """A cycle-assembly step left its promised range (a trace bug)."""

    code = "assembly-violation"


class BetaRefuted(CyclespanError):
    """Two large disjoint sets with no edge between them were found.

    Carries the witness pair: ``set_a`` and ``set_b`` are disjoint, each of
    the size the property requires joined, and no edge runs between them.
    """

    code = "beta-graph-refuted"

    def __init__(self, message: str, set_a: tuple[int, ...], set_b: tuple[int, ...], **payload: Any) -> None:
        super().__init__(message, set_a=list(set_a), set_b=list(set_b), **payload)
        self.set_a = set_a
        self.set_b = set_b


class NoClosingEdge(CyclespanError):
    """Both broom leaf sets embedded but no edge joins them.

    That absence is itself a witness pair refuting the assumed property;
    ``set_a`` and ``set_b`` carry it.
    """

    code = "no-closing-edge"

    def __init__(self, message: str, set_a: tuple[int, ...], set_b: tuple[int, ...], **payload: Any) -> None:
        super().__init__(message, set_a=list(set_a), set_b=list(set_b), **payload)
        self.set_a = set_a
        self.set_b = set_b


class InsufficientData(CyclespanError):
    """A statistic was requested over too few values to be defined."""

    code = "insufficient-data"


class GenerationFailure(CyclespanError):
    """A random generator hit its restart limit."""

    code = "generation-failure"
