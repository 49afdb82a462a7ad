"""Exception types raised by the solvers."""

from __future__ import annotations


class WarmstartError(Exception):
    """Base class for all errors raised by this package."""


class InvariantViolation(WarmstartError):
    """An internal invariant failed. This indicates a solver bug, not bad input."""


class InfeasibleDual(WarmstartError):
    """A dual vector passed as feasible violates one of its constraints."""

    def __init__(self, message: str, violated: object = None) -> None:
        super().__init__(message)
        self.violated = violated


class NoPerfectMatching(WarmstartError):
    pass


class NoPerfectBMatching(WarmstartError):
    pass


class NegativeCycleError(WarmstartError):
    """The graph has a cycle of negative total length.

    ``cycle`` holds the witness as a list of arc ids, when one is known.
    """

    def __init__(self, message: str = "graph contains a negative cycle",
                 cycle: list[int] | None = None) -> None:
        super().__init__(message)
        self.cycle = cycle


class Disconnected(WarmstartError):
    pass


class InfeasibleBounds(WarmstartError):
    pass


class NoCompleteDCS(WarmstartError):
    pass


class NoFlowOfValueV(WarmstartError):
    pass


class InvalidWarmLabeling(WarmstartError):
    pass


class EmptyTrainingSet(WarmstartError):
    pass


class DimensionMismatch(WarmstartError):
    pass


class GenerationFailed(WarmstartError):
    pass


class InvalidParams(WarmstartError):
    pass


class OracleTooLarge(WarmstartError):
    pass


class ParseError(WarmstartError):
    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason
