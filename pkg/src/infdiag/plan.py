"""Flattened enumeration views of a diagram.

Exact evaluation walks configuration spaces: the policy-enumeration oracle
needs one row per joint configuration of every chance *and* decision variable,
while lottery/expectation queries enumerate chance variables only and compute
decisions from policies on the fly.  Both views are built here as dense numpy
arrays; the hot policy sweep itself lives in :mod:`infdiag.kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import errors as er
from .model import (
    CHANCE, DECISION, VALUE,
    Diagram, NodeId, Policy,
    config_columns, config_count, row_indices,
)


@dataclass(frozen=True)
class FullTables:
    """Per-configuration arrays over all chance and decision variables."""

    var_ids: tuple[NodeId, ...]
    cards: tuple[int, ...]
    prob: np.ndarray        # (N,) product of chance-node conditionals
    payoff: np.ndarray      # (N,) value-node entry
    decision_ids: tuple[NodeId, ...]
    n_states: np.ndarray    # (K,) information states per decision
    n_alts: np.ndarray      # (K,) alternatives per decision
    offsets: np.ndarray     # (K,) segment starts in a flat choice vector
    dvals: np.ndarray       # (K, N) int32 decision value in each configuration
    sidxs: np.ndarray       # (K, N) int32 information-state index in each configuration

    def profile_count(self) -> int:
        """Number of deterministic policy profiles (exact, in Python ints)."""
        total = 1
        for s, a in zip(self.n_states, self.n_alts):
            total *= int(a) ** int(s)
        return total

    def split_choice(self, choice: np.ndarray) -> list[np.ndarray]:
        return [choice[o:o + s] for o, s in zip(self.offsets, self.n_states)]


def full_tables(d: Diagram) -> FullTables:
    """Enumerate every joint configuration of the chance and decision variables.

    Decision information states are indexed over each decision's full
    informational parent set, in declared order.
    """
    var_ids = tuple(n for n in d.topological_order() if d.kind(n) != VALUE)
    cards = d.cards(var_ids)
    columns = dict(zip(var_ids, config_columns(cards)))
    n = config_count(cards)

    prob = np.ones(n, dtype=np.float64)
    for nid in var_ids:
        node = d.nodes[nid]
        if node.kind != CHANCE:
            continue
        rows = row_indices(node.parents, d.cards(node.parents), columns)
        prob = prob * node.table.probabilities[rows, columns[nid]]

    v = d.value_node
    payoff = v.payoff[row_indices(v.parents, d.cards(v.parents), columns)]
    payoff = np.broadcast_to(payoff, (n,)).astype(np.float64)

    decision_ids = tuple(nid for nid in var_ids if d.kind(nid) == DECISION)
    k = len(decision_ids)
    n_states = np.zeros(k, dtype=np.int64)
    n_alts = np.zeros(k, dtype=np.int64)
    dvals = np.zeros((k, n), dtype=np.int32)
    sidxs = np.zeros((k, n), dtype=np.int32)
    for t, nid in enumerate(decision_ids):
        node = d.nodes[nid]
        domain = node.informational_parents
        dcards = d.cards(domain)
        n_states[t] = config_count(dcards)
        n_alts[t] = len(node.space)
        dvals[t] = columns[nid]
        sidxs[t] = np.broadcast_to(row_indices(domain, dcards, columns), (n,))
    offsets = np.zeros(k, dtype=np.int64)
    if k:
        offsets[1:] = np.cumsum(n_states)[:-1]
    return FullTables(var_ids, cards, prob, payoff, decision_ids,
                      n_states, n_alts, offsets, dvals, sidxs)


def chance_joint(d: Diagram, var_ids: tuple[NodeId, ...] | None = None) -> tuple[tuple[NodeId, ...], np.ndarray]:
    """Explicit joint distribution over the chance nodes of a chance-only diagram.

    Variables enumerate in sorted-id order by default so that joints stay
    entrywise comparable across transformations of the same node set.
    """
    if var_ids is None:
        var_ids = tuple(sorted(d.chance_ids()))
    for nid in var_ids:
        if any(d.kind(p) != CHANCE for p in d.parents(nid)):
            raise ValueError(f"chance node {nid!r} has non-chance parents")
    cards = d.cards(var_ids)
    columns = dict(zip(var_ids, config_columns(cards)))
    prob = np.ones(config_count(cards), dtype=np.float64)
    for nid in var_ids:
        node = d.nodes[nid]
        rows = row_indices(node.parents, d.cards(node.parents), columns)
        prob = prob * node.table.probabilities[rows, columns[nid]]
    return var_ids, prob


def policy_joint(d: Diagram, policies: Mapping[NodeId, Policy],
                 limit: int | None = 10**7) -> tuple[np.ndarray, np.ndarray]:
    """(probability, payoff) per chance configuration under fixed policies.

    Chance variables enumerate in topological order; each decision's value is
    computed from its policy as soon as its domain columns are available.
    """
    order = d.topological_order()
    chance_ids = tuple(nid for nid in order if d.kind(nid) == CHANCE)
    cards = d.cards(chance_ids)
    n = config_count(cards)
    if limit is not None and n > limit:
        raise er.EnumerationLimitError(
            f"{n} joint configurations exceed the enumeration bound {limit}")

    columns: dict[NodeId, np.ndarray] = dict(zip(chance_ids, config_columns(cards)))
    for nid in order:
        if d.kind(nid) != DECISION:
            continue
        if nid not in policies:
            raise er.PreconditionError(er.MISSING_POLICY, f"no policy for decision {nid!r}")
        pol = policies[nid]
        states = row_indices(pol.domain, pol.domain_cards, columns)
        columns[nid] = np.broadcast_to(pol.choice[states], (n,))

    prob = np.ones(n, dtype=np.float64)
    for nid in chance_ids:
        node = d.nodes[nid]
        rows = row_indices(node.parents, d.cards(node.parents), columns)
        prob = prob * node.table.probabilities[rows, columns[nid]]

    v = d.value_node
    payoff = v.payoff[row_indices(v.parents, d.cards(v.parents), columns)]
    payoff = np.broadcast_to(payoff, (n,)).astype(np.float64)
    return prob, payoff


def policy_expectation(d: Diagram, policies: Mapping[NodeId, Policy],
                       limit: int | None = 10**7) -> float:
    """Expected payoff (or utility, if the payoff is in utility space) under policies."""
    prob, payoff = policy_joint(d, policies, limit)
    return float(prob @ payoff)
