"""Exponential-utility risk adjustment.

With coefficient gamma > 0 the utility of a payoff x is u(x) = -exp(-gamma x)
and the certain equivalent of a lottery is CE = -(1/gamma) ln E[exp(-gamma X)].
gamma = 0 is risk neutrality: utility is the identity and CE = EV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RiskProfile:
    gamma: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise ValueError(f"risk aversion must be finite and >= 0, got {self.gamma!r}")


def utilities(payoffs: np.ndarray, gamma: float) -> np.ndarray:
    """Map payoffs to utility space (identity when gamma = 0)."""
    payoffs = np.asarray(payoffs, dtype=np.float64)
    if gamma == 0:
        return payoffs
    return -np.exp(-gamma * payoffs)


def certain_equivalent_of_utility(expected_utility: float, gamma: float) -> float:
    """Invert the utility map on an expected utility."""
    if gamma == 0:
        return float(expected_utility)
    if expected_utility >= 0:
        raise ValueError("expected exponential utility must be negative")
    return -math.log(-expected_utility) / gamma


def certain_equivalent_of_atoms(payoffs: np.ndarray, probabilities: np.ndarray,
                                gamma: float) -> float:
    """CE of a discrete lottery, computed with a log-sum-exp shift for stability."""
    payoffs = np.asarray(payoffs, dtype=np.float64)
    probabilities = np.asarray(probabilities, dtype=np.float64)
    if gamma == 0:
        return float(probabilities @ payoffs)
    a = -gamma * payoffs
    m = float(a.max())
    lse = m + math.log(float(probabilities @ np.exp(a - m)))
    return -lse / gamma
