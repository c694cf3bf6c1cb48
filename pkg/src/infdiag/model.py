"""Influence diagram model: nodes, tables, structural validation.

A diagram is an immutable DAG over three node kinds: chance nodes (discrete
random variables with a conditional probability table per parent
configuration), decision nodes (alternatives chosen with the information
observed so far), and a single value node holding a scalar payoff per parent
configuration plus an exponential risk-aversion coefficient.

Tables are dense, row-major over parent configurations in mixed-radix order
with the first parent most significant.  Outcome labels carry no semantics;
all arithmetic is index-based.  Every transformation elsewhere in the package
builds a new ``Diagram``; nothing mutates one in place.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from . import errors as er

NodeId = str

ROW_SUM_TOL = 1e-9
RENORMALIZE_TOL = 1e-6

CHANCE = "chance"
DECISION = "decision"
VALUE = "value"


# ---------------------------------------------------------------------------
# Mixed-radix configuration indexing
# ---------------------------------------------------------------------------

def config_count(cards: Sequence[int]) -> int:
    n = 1
    for c in cards:
        n *= int(c)
    return n


def encode_config(values: Sequence[int], cards: Sequence[int]) -> int:
    """Row index of a parent configuration (first parent most significant)."""
    if len(values) != len(cards):
        raise ValueError(f"expected {len(cards)} values, got {len(values)}")
    idx = 0
    for v, c in zip(values, cards):
        if not 0 <= v < c:
            raise ValueError(f"value {v} out of range for cardinality {c}")
        idx = idx * c + v
    return idx


def decode_config(index: int, cards: Sequence[int]) -> tuple[int, ...]:
    """Inverse of :func:`encode_config`."""
    if not 0 <= index < config_count(cards):
        raise ValueError(f"row {index} out of range")
    out = [0] * len(cards)
    for k in range(len(cards) - 1, -1, -1):
        out[k] = index % cards[k]
        index //= cards[k]
    return tuple(out)


def iter_configs(cards: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All configurations, in the same order as table rows."""
    return itertools.product(*(range(c) for c in cards))


def strides(cards: Sequence[int]) -> list[int]:
    """Mixed-radix place values, most significant first."""
    out = [1] * len(cards)
    for k in range(len(cards) - 2, -1, -1):
        out[k] = out[k + 1] * int(cards[k + 1])
    return out


def config_columns(cards: Sequence[int]) -> list[np.ndarray]:
    """Per-variable outcome columns over all configurations of ``cards``."""
    idx = np.arange(config_count(cards))
    return [(idx // s) % c for s, c in zip(strides(cards), cards)]


def row_indices(parents: Sequence[NodeId], cards: Sequence[int],
                columns: Mapping[NodeId, np.ndarray]) -> np.ndarray:
    """Vector of table-row indices for each enumerated configuration."""
    rows = np.zeros(1, dtype=np.int64)
    for p, s in zip(parents, strides(cards)):
        rows = rows + columns[p] * s
    return rows


# ---------------------------------------------------------------------------
# Nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OutcomeSpace:
    labels: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


def _frozen_array(values, shape=None) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if shape is not None:
        arr = arr.reshape(shape)
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ConditionalTable:
    """P(child | parents), one row per parent configuration."""

    child_cardinality: int
    parent_cardinalities: tuple[int, ...]
    probabilities: np.ndarray  # (rows, child_cardinality)

    def __post_init__(self):
        rows = config_count(self.parent_cardinalities)
        object.__setattr__(
            self, "probabilities",
            _frozen_array(self.probabilities, (rows, self.child_cardinality)),
        )

    def row(self, configuration: Sequence[int]) -> np.ndarray:
        return self.probabilities[encode_config(configuration, self.parent_cardinalities)]

    def __eq__(self, other):
        return (
            isinstance(other, ConditionalTable)
            and self.child_cardinality == other.child_cardinality
            and self.parent_cardinalities == other.parent_cardinalities
            and np.array_equal(self.probabilities, other.probabilities)
        )


@dataclass(frozen=True, eq=False)
class ChanceNode:
    id: NodeId
    name: str
    space: OutcomeSpace
    parents: tuple[NodeId, ...]
    table: ConditionalTable

    kind = CHANCE

    def __eq__(self, other):
        return (
            isinstance(other, ChanceNode)
            and (self.id, self.name, self.space, self.parents)
            == (other.id, other.name, other.space, other.parents)
            and self.table == other.table
        )


@dataclass(frozen=True)
class DecisionNode:
    id: NodeId
    name: str
    space: OutcomeSpace  # alternatives
    informational_parents: tuple[NodeId, ...]

    kind = DECISION

    @property
    def parents(self) -> tuple[NodeId, ...]:
        return self.informational_parents


@dataclass(frozen=True, eq=False)
class ValueNode:
    id: NodeId
    name: str
    parents: tuple[NodeId, ...]
    payoff: np.ndarray  # flat, one entry per parent configuration
    risk_aversion: float = 0.0

    kind = VALUE

    def __post_init__(self):
        object.__setattr__(self, "payoff", _frozen_array(self.payoff, (-1,)))

    def __eq__(self, other):
        return (
            isinstance(other, ValueNode)
            and (self.id, self.name, self.parents, self.risk_aversion)
            == (other.id, other.name, other.parents, other.risk_aversion)
            and np.array_equal(self.payoff, other.payoff)
        )


Node = Union[ChanceNode, DecisionNode, ValueNode]


def chance(id: NodeId, name: str, outcomes: Sequence[str],
           parents: Sequence[NodeId] = (), rows: Sequence[Sequence[float]] = (),
           parent_cards: Sequence[int] | None = None) -> ChanceNode:
    """Convenience constructor; ``parent_cards`` defaults to the row count split."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim == 1:
        rows = rows.reshape(1, -1)
    if parent_cards is None:
        # Trust the caller's row count; validate() checks it against the diagram.
        parent_cards = _infer_parent_cards(rows.shape[0], len(parents))
    table = ConditionalTable(len(outcomes), tuple(int(c) for c in parent_cards), rows)
    return ChanceNode(id, name, OutcomeSpace(tuple(outcomes)), tuple(parents), table)


def _infer_parent_cards(n_rows: int, n_parents: int) -> tuple[int, ...]:
    if n_parents == 0:
        return ()
    if n_parents == 1:
        return (n_rows,)
    raise ValueError("parent_cards is required when the node has several parents")


def decision(id: NodeId, name: str, alternatives: Sequence[str],
             observes: Sequence[NodeId] = ()) -> DecisionNode:
    return DecisionNode(id, name, OutcomeSpace(tuple(alternatives)), tuple(observes))


def value(id: NodeId, name: str, parents: Sequence[NodeId],
          payoff: Sequence[float], risk_aversion: float = 0.0) -> ValueNode:
    return ValueNode(id, name, tuple(parents), payoff, float(risk_aversion))


# ---------------------------------------------------------------------------
# Validation report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    node: NodeId | None = None
    row: int | None = None

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.node is not None:
            out["node"] = self.node
        if self.row is not None:
            out["row"] = self.row
        return out


ValidationReport = list[Violation]


# ---------------------------------------------------------------------------
# Diagram
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Diagram:
    """Immutable snapshot of nodes plus optional per-node canvas layout."""

    nodes: dict[NodeId, Node]
    layout: dict[NodeId, tuple[float, float]] = field(default_factory=dict)

    @classmethod
    def from_nodes(cls, nodes: Iterable[Node],
                   layout: Mapping[NodeId, tuple[float, float]] | None = None) -> "Diagram":
        table: dict[NodeId, Node] = {}
        for node in nodes:
            if node.id in table:
                raise ValueError(f"duplicate node id {node.id!r}")
            table[node.id] = node
        lay = {k: (float(x), float(y)) for k, (x, y) in (layout or {}).items() if k in table}
        return cls(table, lay)

    # -- basic queries ------------------------------------------------------

    def node(self, nid: NodeId) -> Node:
        try:
            return self.nodes[nid]
        except KeyError:
            raise er.PreconditionError(er.UNKNOWN_NODE, f"unknown node {nid!r}") from None

    def __contains__(self, nid: NodeId) -> bool:
        return nid in self.nodes

    def kind(self, nid: NodeId) -> str:
        return self.node(nid).kind

    def cardinality(self, nid: NodeId) -> int:
        node = self.node(nid)
        if node.kind == VALUE:
            raise er.PreconditionError(er.IS_VALUE_NODE, "value node has no outcome space")
        return len(node.space)

    def cards(self, ids: Sequence[NodeId]) -> tuple[int, ...]:
        return tuple(self.cardinality(i) for i in ids)

    @cached_property
    def value_node(self) -> ValueNode:
        vals = [n for n in self.nodes.values() if n.kind == VALUE]
        if len(vals) != 1:
            raise er.PreconditionError(
                er.NO_VALUE_NODE if not vals else er.MULTIPLE_VALUE_NODES,
                f"diagram has {len(vals)} value nodes",
            )
        return vals[0]

    def chance_ids(self) -> list[NodeId]:
        return [n.id for n in self.nodes.values() if n.kind == CHANCE]

    def decision_ids(self) -> list[NodeId]:
        return [n.id for n in self.nodes.values() if n.kind == DECISION]

    @cached_property
    def children(self) -> dict[NodeId, tuple[NodeId, ...]]:
        out: dict[NodeId, list[NodeId]] = {nid: [] for nid in self.nodes}
        for node in self.nodes.values():
            for p in node.parents:
                if p in out:
                    out[p].append(node.id)
        return {k: tuple(v) for k, v in out.items()}

    def parents(self, nid: NodeId) -> tuple[NodeId, ...]:
        return self.node(nid).parents

    def _kahn(self) -> tuple[list[NodeId], list[NodeId]]:
        """Topological order plus the ids left on any cycle."""
        indeg = {nid: 0 for nid in self.nodes}
        for node in self.nodes.values():
            indeg[node.id] = len({p for p in node.parents if p in self.nodes})
        ready = [nid for nid, d in indeg.items() if d == 0]
        heapq.heapify(ready)
        order: list[NodeId] = []
        while ready:
            nid = heapq.heappop(ready)
            order.append(nid)
            for c in self.children[nid]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    heapq.heappush(ready, c)
        leftover = [nid for nid in self.nodes if nid not in set(order)]
        return order, leftover

    def topological_order(self) -> list[NodeId]:
        order, leftover = self._kahn()
        if leftover:
            raise er.PreconditionError(er.CYCLE, f"cycle through {sorted(leftover)}")
        return order

    def has_path(self, src: NodeId, dst: NodeId, *, skip_arc: tuple[NodeId, NodeId] | None = None) -> bool:
        """Directed path of length >= 1 from src to dst, optionally ignoring one arc."""
        stack = [src]
        seen = set()
        while stack:
            nid = stack.pop()
            for c in self.children.get(nid, ()):
                if skip_arc == (nid, c):
                    continue
                if c == dst:
                    return True
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return False

    def decision_order(self) -> list[NodeId]:
        """Decisions sorted by the partial order induced by directed paths.

        Raises when two decisions are incomparable: the timing would be
        ambiguous and silently picking one would hide a modeling error.
        """
        decisions = [nid for nid in self.topological_order() if self.kind(nid) == DECISION]
        for a, b in zip(decisions, decisions[1:]):
            if not self.has_path(a, b):
                raise er.PreconditionError(
                    er.DECISIONS_UNORDERED,
                    f"no directed path orders decisions {a!r} and {b!r}",
                )
        return decisions

    def parent_configurations(self, nid: NodeId) -> Iterator[tuple[int, ...]]:
        """Outcome-index tuples for every parent configuration of ``nid``.

        Order matches table row indexing (first parent most significant).
        """
        return iter_configs(self.cards(self.parents(nid)))

    # -- construction of edited copies ---------------------------------------

    def with_nodes(self, replacements: Iterable[Node] = (), drop: Iterable[NodeId] = ()) -> "Diagram":
        """New diagram with some nodes replaced and/or removed, order preserved."""
        dropped = set(drop)
        repl = {n.id: n for n in replacements}
        table: dict[NodeId, Node] = {}
        for nid, node in self.nodes.items():
            if nid in dropped:
                continue
            table[nid] = repl.pop(nid, node)
        for nid, node in repl.items():
            table[nid] = node
        layout = {k: v for k, v in self.layout.items() if k in table}
        return Diagram(table, layout)

    def with_layout(self, layout: Mapping[NodeId, tuple[float, float]]) -> "Diagram":
        lay = dict(self.layout)
        for k, (x, y) in layout.items():
            if k in self.nodes:
                lay[k] = (float(x), float(y))
        return Diagram(dict(self.nodes), lay)

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return (
            list(self.nodes) == list(other.nodes)
            and all(self.nodes[k] == other.nodes[k] for k in self.nodes)
            and self.layout == other.layout
        )


# ---------------------------------------------------------------------------
# Structural validation
# ---------------------------------------------------------------------------

def validate(d: Diagram) -> ValidationReport:
    """Report every structural violation; an empty report means valid.

    Checks: node well-formedness, table/payoff arity and normalization,
    acyclicity, exactly one childless value node, a total order over
    decisions, and no-forgetting along that order.
    """
    report: ValidationReport = []
    values = [n for n in d.nodes.values() if n.kind == VALUE]
    if not values:
        report.append(Violation(er.NO_VALUE_NODE, "diagram has no value node"))
    elif len(values) > 1:
        ids = ", ".join(sorted(n.id for n in values))
        report.append(Violation(er.MULTIPLE_VALUE_NODES, f"multiple value nodes: {ids}"))

    for node in d.nodes.values():
        report.extend(_check_node(d, node))

    order, leftover = d._kahn()
    if leftover:
        report.append(Violation(er.CYCLE, f"cycle through nodes {sorted(leftover)}"))
        return report  # path-based checks below assume a DAG

    decisions = [nid for nid in order if d.kind(nid) == DECISION]
    for a, b in zip(decisions, decisions[1:]):
        if not d.has_path(a, b):
            report.append(Violation(
                er.DECISIONS_UNORDERED,
                f"no directed path orders decisions {a!r} and {b!r}",
            ))
            return report
    known: list[NodeId] = []
    for nid in decisions:
        info = set(d.nodes[nid].informational_parents)
        missing = [k for k in known if k not in info]
        if missing:
            report.append(Violation(
                er.NO_FORGETTING_VIOLATION,
                f"decision {nid!r} forgets earlier information: {missing}",
                node=nid,
            ))
        known = list(dict.fromkeys(known + [nid] + list(d.nodes[nid].informational_parents)))
    return report


def _check_node(d: Diagram, node: Node) -> ValidationReport:
    out: ValidationReport = []
    if not node.name:
        out.append(Violation(er.EMPTY_NAME, f"node {node.id!r} has an empty name", node=node.id))

    seen_parents = set()
    for p in node.parents:
        if p not in d.nodes:
            out.append(Violation(er.UNKNOWN_PARENT,
                                 f"node {node.id!r} references unknown parent {p!r}", node=node.id))
        elif d.nodes[p].kind == VALUE:
            out.append(Violation(er.VALUE_HAS_CHILDREN,
                                 f"value node {p!r} has child {node.id!r}", node=p))
        if p in seen_parents:
            out.append(Violation(er.DUPLICATE_PARENT,
                                 f"node {node.id!r} lists parent {p!r} twice", node=node.id))
        seen_parents.add(p)
    if any(p not in d.nodes for p in node.parents):
        return out  # arity checks below need resolvable parents

    if node.kind in (CHANCE, DECISION):
        labels = node.space.labels
        if not labels:
            out.append(Violation(er.EMPTY_OUTCOMES, f"node {node.id!r} has no outcomes", node=node.id))
        elif len(set(labels)) != len(labels):
            out.append(Violation(er.DUPLICATE_OUTCOME,
                                 f"node {node.id!r} has duplicate outcome labels", node=node.id))

    parent_value = any(d.nodes[p].kind == VALUE for p in node.parents)
    if node.kind == CHANCE and not parent_value:
        out.extend(_check_table(d, node))
    elif node.kind == VALUE and not parent_value:
        out.extend(_check_payoff(d, node))
    return out


def _check_table(d: Diagram, node: ChanceNode) -> ValidationReport:
    out: ValidationReport = []
    cards = d.cards(node.parents)
    t = node.table
    if (t.child_cardinality != len(node.space)
            or t.parent_cardinalities != cards
            or t.probabilities.shape != (config_count(cards), len(node.space))):
        out.append(Violation(
            er.TABLE_SHAPE_MISMATCH,
            f"node {node.id!r}: table is {t.probabilities.shape} but parents imply "
            f"{config_count(cards)} rows of {len(node.space)}",
            node=node.id,
        ))
        return out
    probs = t.probabilities
    if np.any(~np.isfinite(probs)) or np.any(probs < 0) or np.any(probs > 1):
        bad = int(np.argwhere((~np.isfinite(probs)) | (probs < 0) | (probs > 1))[0][0])
        out.append(Violation(er.PROB_OUT_OF_RANGE,
                             f"node {node.id!r}: probability outside [0, 1] in row {bad}",
                             node=node.id, row=bad))
        return out
    sums = probs.sum(axis=1)
    for r in np.nonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)[0]:
        out.append(Violation(er.ROW_NOT_NORMALIZED,
                             f"node {node.id!r}: row {int(r)} sums to {sums[r]:.10g}",
                             node=node.id, row=int(r)))
    return out


def _check_payoff(d: Diagram, node: ValueNode) -> ValidationReport:
    out: ValidationReport = []
    expected = config_count(d.cards(node.parents))
    if node.payoff.shape != (expected,):
        out.append(Violation(
            er.TABLE_SHAPE_MISMATCH,
            f"value node {node.id!r}: payoff has {node.payoff.shape[0]} entries, expected {expected}",
            node=node.id,
        ))
    elif not np.all(np.isfinite(node.payoff)):
        bad = int(np.argwhere(~np.isfinite(node.payoff))[0][0])
        out.append(Violation(er.PAYOFF_NOT_FINITE,
                             f"value node {node.id!r}: non-finite payoff at row {bad}",
                             node=node.id, row=bad))
    gamma = node.risk_aversion
    if not (math.isfinite(gamma) and gamma >= 0):
        out.append(Violation(er.BAD_RISK_AVERSION,
                             f"value node {node.id!r}: risk aversion {gamma!r} must be finite and >= 0",
                             node=node.id))
    return out


def is_valid(d: Diagram) -> bool:
    return not validate(d)


# ---------------------------------------------------------------------------
# No-forgetting completion
# ---------------------------------------------------------------------------

def complete_no_forgetting(d: Diagram) -> Diagram:
    """Augment each decision with all earlier decisions and their information.

    Idempotent, and only ever adds informational arcs.  Raises when the
    decisions are not totally orderable.
    """
    order = d.decision_order()
    known: list[NodeId] = []
    replacements = []
    for nid in order:
        node = d.nodes[nid]
        info = list(node.informational_parents)
        merged = info + [k for k in known if k not in info]
        if merged != info:
            replacements.append(replace(node, informational_parents=tuple(merged)))
        known = list(dict.fromkeys(merged + [nid]))
    return d.with_nodes(replacements) if replacements else d


# ---------------------------------------------------------------------------
# Policies
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Policy:
    """Deterministic map from an information state to an alternative index."""

    decision: NodeId
    domain: tuple[NodeId, ...]
    domain_cards: tuple[int, ...]
    choice: np.ndarray  # int array, one entry per domain configuration

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.choice, dtype=np.int64)
                                   .reshape(config_count(self.domain_cards)))
        arr.setflags(write=False)
        object.__setattr__(self, "choice", arr)

    def alternative(self, state: Sequence[int]) -> int:
        return int(self.choice[encode_config(state, self.domain_cards)])

    def __eq__(self, other):
        return (
            isinstance(other, Policy)
            and (self.decision, self.domain, self.domain_cards)
            == (other.decision, other.domain, other.domain_cards)
            and np.array_equal(self.choice, other.choice)
        )
