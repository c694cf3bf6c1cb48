"""Random valid diagrams for property tests and the CLI ``gen`` verb.

Generated diagrams are deliberately desk-scale: tables stay full-support so
Bayes reversals never hit zero marginals, decisions are chained by
informational arcs so their order is total, and structures whose policy
profile count would exceed ``policy_cap`` are redrawn so the brute-force
oracle stays cheap.
"""

from __future__ import annotations

import numpy as np

from .model import (
    CHANCE, DECISION,
    Diagram, NodeId,
    chance, complete_no_forgetting, config_count, decision, validate, value,
)


def _full_support_rows(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    raw = rng.uniform(0.1, 1.0, size=(rows, cols))
    return raw / raw.sum(axis=1, keepdims=True)


def _pick_parents(rng: np.random.Generator, pool: list[NodeId], limit: int) -> list[NodeId]:
    if not pool or limit <= 0:
        return []
    k = int(rng.integers(0, min(limit, len(pool)) + 1))
    if k == 0:
        return []
    picked = rng.choice(len(pool), size=k, replace=False)
    return [pool[i] for i in sorted(picked)]


def random_diagram(rng: np.random.Generator, *,
                   n_chance: int | None = None,
                   n_decisions: int | None = None,
                   max_outcomes: int = 3,
                   max_alternatives: int = 3,
                   gamma: float = 0.0,
                   policy_cap: int = 3000,
                   max_parents: int = 3,
                   payoff_scale: float = 100.0,
                   max_attempts: int = 200) -> Diagram:
    """A random valid diagram (no-forgetting already completed)."""
    for attempt in range(max_attempts):
        lean = attempt > max_attempts // 4  # shrink information sets if we keep failing
        d = _draw(rng, n_chance, n_decisions, max_outcomes, max_alternatives,
                  gamma, max_parents, payoff_scale, lean)
        d = complete_no_forgetting(d)
        if policy_profile_count(d) <= policy_cap and not validate(d):
            return d
    raise RuntimeError(f"could not draw a diagram within {max_attempts} attempts")


def _draw(rng, n_chance, n_decisions, max_outcomes, max_alternatives,
          gamma, max_parents, payoff_scale, lean) -> Diagram:
    n_c = int(rng.integers(1, 5)) if n_chance is None else n_chance
    n_d = int(rng.choice([0, 1, 2], p=[0.2, 0.4, 0.4])) if n_decisions is None else n_decisions

    kinds = ["c"] * n_c + ["d"] * n_d
    rng.shuffle(kinds)

    nodes = []
    sequence: list[NodeId] = []     # temporal order, for backward arcs only
    chance_before: list[NodeId] = []
    last_decision: NodeId | None = None
    ci = di = 0
    for kind in kinds:
        if kind == "c":
            nid = f"c{ci}"
            ci += 1
            card = int(rng.integers(2, max_outcomes + 1))
            parents = _pick_parents(rng, sequence, max_parents if not lean else 1)
            cards = tuple(_card_of(nodes, p) for p in parents)
            rows = _full_support_rows(rng, config_count(cards), card)
            nodes.append(chance(nid, nid.upper(), [f"o{k}" for k in range(card)],
                                parents, rows, parent_cards=cards))
        else:
            nid = f"d{di}"
            di += 1
            card = int(rng.integers(2, max_alternatives + 1))
            observes: list[NodeId] = [] if last_decision is None else [last_decision]
            extra = 0 if lean else int(rng.random() < 0.6)
            observes += _pick_parents(rng, chance_before, extra)
            nodes.append(decision(nid, nid.upper(), [f"a{k}" for k in range(card)], observes))
            last_decision = nid
        sequence.append(nid)
        if kind == "c":
            chance_before.append(nid)

    vp = _pick_parents(rng, sequence, 4)
    if not vp and sequence:
        vp = [sequence[int(rng.integers(0, len(sequence)))]]
    cards = tuple(_card_of(nodes, p) for p in vp)
    payoff = rng.uniform(-payoff_scale, payoff_scale, size=config_count(cards))
    nodes.append(value("v", "Value", vp, payoff, risk_aversion=gamma))
    return Diagram.from_nodes(nodes)


def _card_of(nodes, nid: NodeId) -> int:
    for n in nodes:
        if n.id == nid:
            return len(n.space)
    raise KeyError(nid)


def policy_profile_count(d: Diagram) -> int:
    """Deterministic policy profiles a brute-force sweep would enumerate."""
    total = 1
    for nid in d.decision_ids():
        node = d.nodes[nid]
        states = config_count(d.cards(node.informational_parents))
        total *= len(node.space) ** states
    return total


def random_chance_diagram(rng: np.random.Generator, *,
                          n_chance: int | None = None,
                          max_outcomes: int = 3,
                          max_parents: int = 3) -> Diagram:
    """Chance nodes plus a constant value node; used for joint-preservation checks."""
    n_c = int(rng.integers(2, 5)) if n_chance is None else n_chance
    nodes = []
    sequence: list[NodeId] = []
    for k in range(n_c):
        nid = f"c{k}"
        card = int(rng.integers(2, max_outcomes + 1))
        parents = _pick_parents(rng, sequence, max_parents)
        cards = tuple(_card_of(nodes, p) for p in parents)
        rows = _full_support_rows(rng, config_count(cards), card)
        nodes.append(chance(nid, nid.upper(), [f"o{j}" for j in range(card)],
                            parents, rows, parent_cards=cards))
        sequence.append(nid)
    nodes.append(value("v", "Value", (), [0.0]))
    return Diagram.from_nodes(nodes)


def reversible_arcs(d: Diagram) -> list[tuple[NodeId, NodeId]]:
    """Chance-chance arcs whose reversal is legal (no alternate path)."""
    out = []
    for j in sorted(d.chance_ids()):
        for i in d.parents(j):
            if d.kind(i) == CHANCE and not d.has_path(i, j, skip_arc=(i, j)):
                out.append((i, j))
    return sorted(out)
