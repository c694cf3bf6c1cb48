"""Pure-numpy policy-sweep kernels (fallback when the extension is not built)."""

from __future__ import annotations

import numpy as np


def policy_eu(weight, dvals, sidxs, offsets, choice):
    """Sum of ``weight`` over configurations consistent with the flat choice vector."""
    k = dvals.shape[0]
    if k == 0:
        return float(weight.sum())
    mask = choice[offsets[0] + sidxs[0]] == dvals[0]
    for t in range(1, k):
        mask = mask & (choice[offsets[t] + sidxs[t]] == dvals[t])
    return float(weight[mask].sum())


def policy_sweep(weight, dvals, sidxs, n_states, n_alts):
    """Exhaustive maximum over every deterministic policy profile.

    Profiles enumerate in lexicographic order of the flat choice vector
    (decisions in order, states within a decision in row order, last cell
    fastest); only strictly better profiles replace the incumbent, so ties
    resolve to the lexicographically smallest profile.
    """
    offsets = np.zeros(len(n_states), dtype=np.int64)
    if len(n_states):
        offsets[1:] = np.cumsum(n_states)[:-1]
    cell_alts = np.repeat(n_alts, n_states)
    m = int(cell_alts.size)
    choice = np.zeros(m, dtype=np.int64)
    best = -np.inf
    best_choice = choice.copy()
    while True:
        eu = policy_eu(weight, dvals, sidxs, offsets, choice)
        if eu > best:
            best = eu
            best_choice = choice.copy()
        p = m - 1
        while p >= 0:
            choice[p] += 1
            if choice[p] < cell_alts[p]:
                break
            choice[p] = 0
            p -= 1
        if p < 0:
            break
    return float(best), best_choice
