"""Diagram evaluation by repeated value-preserving reduction.

The solver loops until only the value node remains, preferring in order:

1. remove any barren node,
2. remove any chance node whose only child is the value node,
3. remove the latest remaining decision once every other value parent is
   observed at it,
4. otherwise reverse arcs out of a chance value-parent (picked to minimize
   the largest table its reversals create) until it can be removed.

Payoffs move to utility space once up front when the risk-aversion
coefficient is positive, so chance removal stays a plain expectation and the
final scalar maps back through the certain equivalent.  ``brute_force_solve``
is the independent oracle: it enumerates every deterministic policy profile
against the full joint.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from . import errors as er
from . import kernels, plan, transforms
from .lottery import Lottery, statistics, value_lottery
from .model import (
    CHANCE, DECISION,
    ChanceNode, ConditionalTable, Diagram, NodeId, Policy,
    complete_no_forgetting, config_count, validate,
)
from .risk import (
    RiskProfile, certain_equivalent_of_atoms, certain_equivalent_of_utility, utilities,
)

DEFAULT_PROFILE_BOUND = 10**6


@dataclass(frozen=True)
class Solution:
    """Result of an evaluation: optimal value, policies, and the reduction trail."""

    optimal_value: float            # certain equivalent, in value units
    optimal_expected_utility: float
    policies: tuple[Policy, ...]    # one per decision, in decision order
    transcript: tuple[transforms.TransformRecord, ...]
    source: Diagram                 # completed input, payoffs in value units
    reduced: Diagram                # final diagram (utility space when gamma > 0)
    risk: RiskProfile

    def policy_map(self) -> dict[NodeId, Policy]:
        return {p.decision: p for p in self.policies}


def prepare(d: Diagram) -> Diagram:
    """Complete no-forgetting and insist on a fully valid diagram."""
    completed = complete_no_forgetting(d)
    report = validate(completed)
    if report:
        raise er.InvalidDiagramError(report)
    return completed


def _utility_space(d: Diagram) -> Diagram:
    v = d.value_node
    if v.risk_aversion == 0:
        return d
    return d.with_nodes([replace(v, payoff=utilities(v.payoff, v.risk_aversion))])


def solve(d: Diagram) -> Solution:
    source = prepare(d)
    gamma = source.value_node.risk_aversion
    current = _utility_space(source)
    initial_order = source.decision_order()

    n_nodes = len(source.nodes)
    n_arcs = sum(len(n.parents) for n in source.nodes.values())
    step_bound = max(16, 4 * n_nodes * max(1, n_arcs))

    transcript: list[transforms.TransformRecord] = []
    policies: dict[NodeId, Policy] = {}
    while len(current.nodes) > 1:
        if len(transcript) >= step_bound:
            raise er.SolverInternalError(
                f"reduction exceeded {step_bound} steps; the loop should have terminated")
        rec = _reduction_step(current, initial_order)
        transcript.append(rec)
        if rec.policy is not None:
            policies[rec.policy.decision] = rec.policy
        elif rec.kind == transforms.BARREN_REMOVAL and rec.before.kind(rec.subject[0]) == DECISION:
            # A barren decision admits any choice; record the first alternative.
            policies[rec.subject[0]] = Policy(rec.subject[0], (), (), np.zeros(1, dtype=np.int64))
        current = rec.after

    eu = float(current.value_node.payoff[0])
    return Solution(
        optimal_value=certain_equivalent_of_utility(eu, gamma),
        optimal_expected_utility=eu,
        policies=tuple(policies[nid] for nid in initial_order),
        transcript=tuple(transcript),
        source=source,
        reduced=current,
        risk=RiskProfile(gamma),
    )


def _reduction_step(d: Diagram, initial_order: Sequence[NodeId]) -> transforms.TransformRecord:
    v = d.value_node
    children = d.children

    barren = sorted(nid for nid in d.nodes if nid != v.id and not children[nid])
    if barren:
        return transforms.apply(d, transforms.BARREN_REMOVAL, barren[0])

    ready = sorted(nid for nid in d.chance_ids() if children[nid] == (v.id,))
    if ready:
        return transforms.apply(d, transforms.CHANCE_REMOVAL, ready[0])

    remaining = [nid for nid in initial_order if nid in d.nodes]
    if remaining:
        last = remaining[-1]
        info = set(d.nodes[last].informational_parents)
        if children[last] == (v.id,) and all(p == last or p in info for p in v.parents):
            return transforms.apply(d, transforms.DECISION_REMOVAL, last)

    # A chance value-parent with no decision child always exists here for a
    # regular diagram; its chance arcs are reversed one at a time (topologically
    # first child first, which can never need an alternate-path detour).
    candidates = [nid for nid in v.parents
                  if d.kind(nid) == CHANCE
                  and all(d.kind(c) != DECISION for c in children[nid])]
    if not candidates:
        raise er.SolverInternalError("no reduction applies; regularity should prevent this")
    target = min(candidates, key=lambda nid: (_projected_reversal_cost(d, nid), nid))
    first_child = _first_chance_child(d, target)
    return transforms.apply(d, transforms.ARC_REVERSAL, target, first_child)


def _first_chance_child(d: Diagram, nid: NodeId) -> NodeId:
    position = {n: k for k, n in enumerate(d.topological_order())}
    kids = [c for c in d.children[nid] if d.kind(c) == CHANCE]
    return min(kids, key=position.__getitem__)


def _projected_reversal_cost(d: Diagram, nid: NodeId) -> int:
    """Largest table any reversal in this node's removal sequence would create."""
    position = {n: k for k, n in enumerate(d.topological_order())}
    parents_i = list(d.parents(nid))
    worst = 0
    for j in sorted((c for c in d.children[nid] if d.kind(c) == CHANCE),
                    key=position.__getitem__):
        shared = [p for p in d.parents(j) if p != nid]
        shared += [p for p in parents_i if p not in shared]
        rows = config_count(d.cards(tuple(shared)))
        worst = max(worst,
                    rows * d.cardinality(j),
                    rows * d.cardinality(j) * d.cardinality(nid))
        parents_i = shared + [j]
    return worst


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def brute_force_solve(d: Diagram, bound: int = DEFAULT_PROFILE_BOUND) -> Solution:
    """Enumerate every deterministic policy profile against the full joint.

    Ground truth for :func:`solve`; ties resolve to the lexicographically
    smallest profile, matching the solver's lowest-index rule.
    """
    source = prepare(d)
    gamma = source.value_node.risk_aversion
    work = _utility_space(source)
    tables = plan.full_tables(work)
    total = tables.profile_count()
    if total > bound:
        raise er.EnumerationLimitError(
            f"{total} policy profiles exceed the enumeration bound {bound}")

    weight = np.ascontiguousarray(tables.prob * tables.payoff)
    eu, choice = kernels.policy_sweep(weight, tables.dvals, tables.sidxs,
                                      tables.n_states, tables.n_alts)
    policies = []
    for seg, nid in zip(tables.split_choice(choice), tables.decision_ids):
        node = work.nodes[nid]
        domain = node.informational_parents
        policies.append(Policy(nid, domain, work.cards(domain), seg))
    return Solution(
        optimal_value=certain_equivalent_of_utility(eu, gamma),
        optimal_expected_utility=float(eu),
        policies=tuple(policies),
        transcript=(),
        source=source,
        reduced=work,
        risk=RiskProfile(gamma),
    )


def expected_utility_under(d: Diagram, policies: Sequence[Policy] | Mapping[NodeId, Policy]) -> float:
    """Expected utility a fixed policy profile induces on ``d`` (risk applied)."""
    if not isinstance(policies, Mapping):
        policies = {p.decision: p for p in policies}
    work = _utility_space(prepare(d))
    return plan.policy_expectation(work, policies)


def replay_transcript(records: Sequence[transforms.TransformRecord],
                      start: Diagram | None = None) -> Diagram:
    """Re-apply recorded transforms from scratch; returns the final diagram."""
    if not records:
        if start is None:
            raise ValueError("empty transcript and no start diagram")
        return start
    current = start if start is not None else records[0].before
    for rec in records:
        current = transforms.apply(current, rec.kind, *rec.subject).after
    return current


# ---------------------------------------------------------------------------
# Certain equivalents, VOI, per-alternative statistics
# ---------------------------------------------------------------------------

def certain_equivalent(l: Lottery, r: RiskProfile) -> float:
    """Sure amount equally preferred to the lottery under exponential utility."""
    l.require_normalized()
    return certain_equivalent_of_atoms(l.payoffs, l.probabilities, r.gamma)


def value_of_information(d: Diagram, frm: NodeId, to: NodeId) -> float:
    """Gain in certain equivalent from observing ``frm`` at decision ``to``.

    Zero when the node is already observed there; never negative otherwise.
    """
    try:
        amended = transforms.add_informational_arc(d, frm, to)
    except er.PreconditionError as exc:
        if exc.code == er.ARC_PRESENT:
            return 0.0
        raise
    return solve(amended).optimal_value - solve(d).optimal_value


@dataclass(frozen=True)
class AlternativeStat:
    alternative: str
    certain_equivalent: float
    expected_value: float
    standard_deviation: float


def alternative_statistics(d: Diagram, decision_id: NodeId) -> list[AlternativeStat]:
    """(CE, EV, SD) of the value lottery when the first decision is pinned.

    Each alternative of the first decision is fixed in turn, the rest of the
    diagram is solved optimally, and the resulting value lottery summarized.
    """
    source = prepare(d)
    node = source.node(decision_id)
    if node.kind != DECISION:
        raise er.PreconditionError(er.NOT_DECISION, f"{decision_id!r} is not a decision node")
    order = source.decision_order()
    if order[0] != decision_id:
        raise er.PreconditionError(
            er.NOT_FIRST_DECISION,
            f"alternative statistics apply to the first decision ({order[0]!r}), not {decision_id!r}")

    gamma = source.value_node.risk_aversion
    rows = []
    for alt, label in enumerate(node.space.labels):
        pinned = _pin_decision(source, decision_id, alt)
        sub = solve(pinned)
        lot = value_lottery(pinned, sub.policy_map())
        ev, sd, ce = statistics(lot, RiskProfile(gamma))
        rows.append(AlternativeStat(label, ce, ev, sd))
    return rows


def _pin_decision(d: Diagram, nid: NodeId, alt: int) -> Diagram:
    """Replace a decision by a degenerate chance node fixed at one alternative."""
    node = d.nodes[nid]
    k = len(node.space)
    row = np.zeros((1, k))
    row[0, alt] = 1.0
    fixed = ChanceNode(nid, node.name, node.space, (), ConditionalTable(k, (), row))
    return d.with_nodes([fixed])


def pinned_value_lottery(d: Diagram, decision_id: NodeId, alternative: int | str) -> Lottery:
    """Value lottery when one decision is pinned and the rest play optimally."""
    source = prepare(d)
    node = source.node(decision_id)
    if node.kind != DECISION:
        raise er.PreconditionError(er.NOT_DECISION, f"{decision_id!r} is not a decision node")
    if isinstance(alternative, str):
        if alternative not in node.space.labels:
            raise er.PreconditionError(er.UNKNOWN_NODE,
                                       f"{decision_id!r} has no alternative {alternative!r}")
        alt = node.space.index(alternative)
    else:
        alt = int(alternative)
        if not 0 <= alt < len(node.space):
            raise er.PreconditionError(er.UNKNOWN_NODE,
                                       f"{decision_id!r} has no alternative {alternative!r}")
    pinned = _pin_decision(source, decision_id, alt)
    sub = solve(pinned)
    return value_lottery(pinned, sub.policy_map())
