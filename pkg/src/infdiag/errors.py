"""Domain exceptions and the machine-readable code sets shared with API clients.

Validation codes appear in ``ValidationReport`` entries; precondition codes
appear on :class:`PreconditionError`.  Both sets are closed: the HTTP service
and the workbench UI dispatch on them, so new codes are an interface change.
"""

from __future__ import annotations

# Validation violation codes.
CYCLE = "CYCLE"
NO_VALUE_NODE = "NO_VALUE_NODE"
MULTIPLE_VALUE_NODES = "MULTIPLE_VALUE_NODES"
VALUE_HAS_CHILDREN = "VALUE_HAS_CHILDREN"
ROW_NOT_NORMALIZED = "ROW_NOT_NORMALIZED"
PROB_OUT_OF_RANGE = "PROB_OUT_OF_RANGE"
TABLE_SHAPE_MISMATCH = "TABLE_SHAPE_MISMATCH"
PAYOFF_NOT_FINITE = "PAYOFF_NOT_FINITE"
DECISIONS_UNORDERED = "DECISIONS_UNORDERED"
NO_FORGETTING_VIOLATION = "NO_FORGETTING_VIOLATION"
UNKNOWN_PARENT = "UNKNOWN_PARENT"
DUPLICATE_PARENT = "DUPLICATE_PARENT"
DUPLICATE_OUTCOME = "DUPLICATE_OUTCOME"
EMPTY_NAME = "EMPTY_NAME"
EMPTY_OUTCOMES = "EMPTY_OUTCOMES"
BAD_RISK_AVERSION = "BAD_RISK_AVERSION"

# Transform / query precondition codes.
UNKNOWN_NODE = "UNKNOWN_NODE"
NOT_CHANCE = "NOT_CHANCE"
NOT_DECISION = "NOT_DECISION"
IS_VALUE_NODE = "IS_VALUE_NODE"
HAS_CHILDREN = "HAS_CHILDREN"
ARC_ABSENT = "ARC_ABSENT"
ARC_PRESENT = "ARC_PRESENT"
REVERSAL_WOULD_CYCLE = "REVERSAL_WOULD_CYCLE"
ADDITION_WOULD_CYCLE = "ADDITION_WOULD_CYCLE"
NOT_VALUE_ONLY_CHILD = "NOT_VALUE_ONLY_CHILD"
NONINFORMATIONAL_VALUE_PARENT = "NONINFORMATIONAL_VALUE_PARENT"
NOT_FIRST_DECISION = "NOT_FIRST_DECISION"
MISSING_POLICY = "MISSING_POLICY"
UNNORMALIZED_LOTTERY = "UNNORMALIZED_LOTTERY"
ENUMERATION_LIMIT = "ENUMERATION_LIMIT"


class DiagramError(Exception):
    """Base class for domain errors raised by the engine."""


class PreconditionError(DiagramError):
    """An operation was requested on a diagram that does not admit it."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class InvalidDiagramError(DiagramError):
    """An operation required a valid diagram but validation found violations."""

    def __init__(self, report):
        super().__init__("invalid diagram: " + "; ".join(v.message for v in report))
        self.report = list(report)


class DocumentError(DiagramError):
    """A diagram document failed to parse or does not describe a loadable model."""

    def __init__(self, message: str, *, line=None, column=None, node=None, row=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}" + (f", column {column}" if column is not None else ""))
        if node is not None:
            loc.append(f"node {node!r}" + (f", row {row}" if row is not None else ""))
        super().__init__(message + (f" ({'; '.join(loc)})" if loc else ""))
        self.line = line
        self.column = column
        self.node = node
        self.row = row


class EnumerationLimitError(PreconditionError):
    """An exact enumeration would exceed its configured size bound."""

    def __init__(self, message: str):
        super().__init__(ENUMERATION_LIMIT, message)


class SolverInternalError(RuntimeError):
    """The reduction loop hit its defensive step bound; this signals an engine bug."""
