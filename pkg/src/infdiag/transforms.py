"""Value-preserving diagram reductions.

Four transforms map a valid diagram to a valid diagram:

* barren removal — delete a childless chance or decision node,
* arc reversal   — flip a chance-chance arc by Bayes' theorem,
* chance removal — fold a chance node into the value node by expectation,
* decision removal — fold a decision into the value node by maximization,
  emitting the optimal policy for the information retained at that point.

``add_informational_arc`` is the what-if edit used for value-of-information
analysis.  All functions are pure; callers own the returned snapshots.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import errors as er
from .model import (
    CHANCE, DECISION, VALUE,
    ConditionalTable, Diagram, NodeId, Policy,
    complete_no_forgetting, config_columns, config_count, row_indices, strides,
)

BARREN_REMOVAL = "barren_removal"
CHANCE_REMOVAL = "chance_removal"
DECISION_REMOVAL = "decision_removal"
ARC_REVERSAL = "arc_reversal"
INFO_ARC_ADDITION = "info_arc_addition"


@dataclass(frozen=True)
class TransformRecord:
    """One applied reduction step: what ran, on what, and the snapshots around it."""

    kind: str
    subject: tuple[NodeId, ...]
    before: Diagram
    after: Diagram
    policy: Policy | None = None
    patched_rows: tuple[int, ...] = ()  # uniform-patched zero-probability posteriors

    def describe(self) -> str:
        return f"{self.kind}: {' -> '.join(self.subject)}"


# ---------------------------------------------------------------------------
# Barren removal
# ---------------------------------------------------------------------------

def remove_barren(d: Diagram, n: NodeId) -> Diagram:
    """Delete a childless chance or decision node together with its incoming arcs."""
    node = d.node(n)
    if node.kind == VALUE:
        raise er.PreconditionError(er.IS_VALUE_NODE, f"{n!r} is the value node")
    if d.children[n]:
        raise er.PreconditionError(
            er.HAS_CHILDREN, f"{n!r} has children {list(d.children[n])} and is not barren")
    return d.with_nodes(drop=[n])


# ---------------------------------------------------------------------------
# Arc reversal (Bayes' theorem)
# ---------------------------------------------------------------------------

def reverse_arc(d: Diagram, i: NodeId, j: NodeId) -> Diagram:
    """Replace the chance-chance arc i -> j by j -> i.

    Both nodes inherit the union of the two conditioning sets; with C the
    union minus {i, j}, the new tables are

        P'(j | C)    = sum_x P(j | x, C) P(x | C)
        P'(i | j, C) = P(j | i, C) P(i | C) / P'(j | C)

    which leaves the joint distribution over all chance nodes unchanged.
    Whenever P'(j | C) = 0 the quotient is undefined; the posterior row is
    patched to uniform (any distribution is value-preserving on a
    probability-zero event) and flagged on the transform record.
    """
    d2, _ = reverse_arc_patched(d, i, j)
    return d2


def reverse_arc_patched(d: Diagram, i: NodeId, j: NodeId) -> tuple[Diagram, tuple[int, ...]]:
    ni, nj = d.node(i), d.node(j)
    if ni.kind != CHANCE or nj.kind != CHANCE:
        raise er.PreconditionError(er.NOT_CHANCE, f"arc reversal needs chance nodes, got {i!r}, {j!r}")
    if i not in nj.parents:
        raise er.PreconditionError(er.ARC_ABSENT, f"no arc {i!r} -> {j!r}")
    if d.has_path(i, j, skip_arc=(i, j)):
        raise er.PreconditionError(
            er.REVERSAL_WOULD_CYCLE,
            f"another directed path {i!r} -> {j!r} exists; reversing would create a cycle")

    shared = [p for p in nj.parents if p != i]
    shared += [p for p in ni.parents if p not in shared]
    shared_t = tuple(shared)
    cards = d.cards(shared_t)
    ki, kj = len(ni.space), len(nj.space)
    columns = dict(zip(shared_t, config_columns(cards)))

    rows_i = row_indices(ni.parents, d.cards(ni.parents), columns)
    p_i = ni.table.probabilities[rows_i]  # (R, ki), broadcast over R when i is parentless

    j_cards = d.cards(nj.parents)
    base = np.zeros(1, dtype=np.int64)
    stride_i = 0
    for p, s in zip(nj.parents, strides(j_cards)):
        if p == i:
            stride_i = s
        else:
            base = base + columns[p] * s
    rows_j = base[:, None] + stride_i * np.arange(ki)[None, :]  # (R, ki)
    p_j = nj.table.probabilities[rows_j]  # (R, ki, kj)

    joint = p_i[..., None] * p_j          # (R, ki, kj)
    marginal = joint.sum(axis=1)          # (R, kj)

    with np.errstate(divide="ignore", invalid="ignore"):
        posterior = joint.transpose(0, 2, 1) / marginal[:, :, None]  # (R, kj, ki)
    zero = marginal == 0.0
    patched: tuple[int, ...] = ()
    if np.any(zero):
        posterior[zero] = 1.0 / ki
        patched = tuple(int(r) * kj + int(x) for r, x in np.argwhere(zero))

    r = marginal.shape[0]
    new_j = replace(nj, parents=shared_t,
                    table=ConditionalTable(kj, cards, marginal))
    new_i = replace(ni, parents=shared_t + (j,),
                    table=ConditionalTable(ki, cards + (kj,), posterior.reshape(r * kj, ki)))
    return d.with_nodes([new_i, new_j]), patched


# ---------------------------------------------------------------------------
# Chance removal into the value node (conditional expectation)
# ---------------------------------------------------------------------------

def remove_chance_into_value(d: Diagram, n: NodeId) -> Diagram:
    """Fold a chance node whose only child is the value node into the payoff."""
    node = d.node(n)
    if node.kind != CHANCE:
        raise er.PreconditionError(er.NOT_CHANCE, f"{n!r} is not a chance node")
    v = d.value_node
    if tuple(d.children[n]) != (v.id,):
        raise er.PreconditionError(
            er.NOT_VALUE_ONLY_CHILD,
            f"{n!r} has children {list(d.children[n])}; only the value node is allowed")

    new_parents = [p for p in v.parents if p != n]
    new_parents += [p for p in node.parents if p not in new_parents]
    new_t = tuple(new_parents)
    cards = d.cards(new_t)
    columns = dict(zip(new_t, config_columns(cards)))

    rows_n = row_indices(node.parents, d.cards(node.parents), columns)
    probs = node.table.probabilities[rows_n]  # (R, k)

    k = len(node.space)
    v_cards = d.cards(v.parents)
    base = np.zeros(1, dtype=np.int64)
    stride_n = 0
    for p, s in zip(v.parents, strides(v_cards)):
        if p == n:
            stride_n = s
        else:
            base = base + columns[p] * s
    payoff = v.payoff[base[:, None] + stride_n * np.arange(k)[None, :]]  # (R, k)

    new_value = replace(v, parents=new_t, payoff=(probs * payoff).sum(axis=1))
    return d.with_nodes([new_value], drop=[n])


# ---------------------------------------------------------------------------
# Decision removal into the value node (maximization)
# ---------------------------------------------------------------------------

def remove_decision_into_value(d: Diagram, n: NodeId) -> tuple[Diagram, Policy]:
    """Fold a decision into the payoff by maximizing over its alternatives.

    Requires every other value parent to be observed at the decision;
    otherwise earlier removals or reversals are still needed.  Ties go to the
    lowest alternative index so policies are reproducible.
    """
    node = d.node(n)
    if node.kind != DECISION:
        raise er.PreconditionError(er.NOT_DECISION, f"{n!r} is not a decision node")
    v = d.value_node
    if tuple(d.children[n]) != (v.id,):
        raise er.PreconditionError(
            er.NOT_VALUE_ONLY_CHILD,
            f"{n!r} has children {list(d.children[n])}; only the value node is allowed")
    observed = set(node.informational_parents)
    unobserved = [p for p in v.parents if p != n and p not in observed]
    if unobserved:
        raise er.PreconditionError(
            er.NONINFORMATIONAL_VALUE_PARENT,
            f"value node depends on {unobserved}, not observed at decision {n!r}")

    remaining = tuple(p for p in v.parents if p != n)
    cards = d.cards(remaining)
    columns = dict(zip(remaining, config_columns(cards)))

    k = len(node.space)
    v_cards = d.cards(v.parents)
    base = np.zeros(1, dtype=np.int64)
    stride_n = 0
    for p, s in zip(v.parents, strides(v_cards)):
        if p == n:
            stride_n = s
        else:
            base = base + columns[p] * s
    payoff = v.payoff[base[:, None] + stride_n * np.arange(k)[None, :]]  # (R, k)

    choice = np.argmax(payoff, axis=1)  # first occurrence = lowest index
    best = payoff[np.arange(payoff.shape[0]), choice]
    policy = Policy(n, remaining, cards, choice)
    new_value = replace(v, parents=remaining, payoff=best)
    return d.with_nodes([new_value], drop=[n]), policy


# ---------------------------------------------------------------------------
# Informational arc addition (what-if analysis)
# ---------------------------------------------------------------------------

def add_informational_arc(d: Diagram, frm: NodeId, to: NodeId) -> Diagram:
    """Make ``frm`` observed at decision ``to``; later decisions inherit it."""
    target = d.node(to)
    if target.kind != DECISION:
        raise er.PreconditionError(er.NOT_DECISION, f"{to!r} is not a decision node")
    source = d.node(frm)
    if source.kind == VALUE:
        raise er.PreconditionError(er.IS_VALUE_NODE, "the value node has no outgoing arcs")
    if frm in target.informational_parents:
        raise er.PreconditionError(er.ARC_PRESENT, f"arc {frm!r} -> {to!r} already present")
    if frm == to or d.has_path(to, frm):
        raise er.PreconditionError(
            er.ADDITION_WOULD_CYCLE, f"adding {frm!r} -> {to!r} would create a cycle")
    amended = replace(target, informational_parents=target.informational_parents + (frm,))
    return complete_no_forgetting(d.with_nodes([amended]))


# ---------------------------------------------------------------------------
# Uniform record-producing entry point (solver, service, replay)
# ---------------------------------------------------------------------------

def apply(d: Diagram, kind: str, *subject: NodeId) -> TransformRecord:
    if kind == BARREN_REMOVAL:
        (n,) = subject
        return TransformRecord(kind, subject, d, remove_barren(d, n))
    if kind == CHANCE_REMOVAL:
        (n,) = subject
        return TransformRecord(kind, subject, d, remove_chance_into_value(d, n))
    if kind == DECISION_REMOVAL:
        (n,) = subject
        after, policy = remove_decision_into_value(d, n)
        return TransformRecord(kind, subject, d, after, policy=policy)
    if kind == ARC_REVERSAL:
        i, j = subject
        after, patched = reverse_arc_patched(d, i, j)
        return TransformRecord(kind, subject, d, after, patched_rows=patched)
    if kind == INFO_ARC_ADDITION:
        frm, to = subject
        return TransformRecord(kind, subject, d, add_informational_arc(d, frm, to))
    raise ValueError(f"unknown transform kind {kind!r}")
