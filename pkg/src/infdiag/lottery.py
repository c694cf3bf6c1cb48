"""Value lotteries: the payoff distribution induced by a policy profile."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import errors as er
from . import plan
from .model import Diagram, NodeId, Policy
from .risk import RiskProfile, certain_equivalent_of_atoms

PROB_SUM_TOL = 1e-9
MERGE_TOL = 1e-12


@dataclass(frozen=True)
class Lottery:
    """Discrete distribution over scalar payoffs, atoms sorted by payoff."""

    atoms: tuple[tuple[float, float], ...]  # (payoff, probability)

    @classmethod
    def from_atoms(cls, atoms: Iterable[tuple[float, float]]) -> "Lottery":
        """Sort, drop zero-probability atoms, merge payoffs closer than 1e-12."""
        merged: list[list[float]] = []
        for x, p in sorted((float(x), float(p)) for x, p in atoms):
            if p == 0.0:
                continue
            if merged and x - merged[-1][0] <= MERGE_TOL:
                merged[-1][1] += p
            else:
                merged.append([x, p])
        return cls(tuple((x, p) for x, p in merged))

    @property
    def payoffs(self) -> np.ndarray:
        return np.array([x for x, _ in self.atoms])

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for _, p in self.atoms])

    def total_probability(self) -> float:
        return float(sum(p for _, p in self.atoms))

    def require_normalized(self) -> None:
        total = self.total_probability()
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise er.PreconditionError(
                er.UNNORMALIZED_LOTTERY, f"lottery probabilities sum to {total:.10g}")

    def expected_value(self) -> float:
        self.require_normalized()
        return float(self.probabilities @ self.payoffs)

    def standard_deviation(self) -> float:
        self.require_normalized()
        x, p = self.payoffs, self.probabilities
        ev = float(p @ x)
        var = float(p @ (x * x)) - ev * ev
        return math.sqrt(max(var, 0.0))  # clamp rounding-negative variance


def value_lottery(d: Diagram, policies: Sequence[Policy] | Mapping[NodeId, Policy],
                  limit: int = 10**7) -> Lottery:
    """Exact payoff distribution under one policy per decision.

    Enumerates the joint over chance nodes, applies each policy at its
    information states, and accumulates probability mass per payoff value.
    """
    if not isinstance(policies, Mapping):
        policies = {p.decision: p for p in policies}
    prob, payoff = plan.policy_joint(d, policies, limit)
    order = np.argsort(payoff, kind="stable")
    return Lottery.from_atoms(zip(payoff[order], prob[order]))


def statistics(l: Lottery, r: RiskProfile) -> tuple[float, float, float]:
    """(expected value, standard deviation, certain equivalent)."""
    l.require_normalized()
    ev = l.expected_value()
    sd = l.standard_deviation()
    ce = certain_equivalent_of_atoms(l.payoffs, l.probabilities, r.gamma)
    return ev, sd, ce
