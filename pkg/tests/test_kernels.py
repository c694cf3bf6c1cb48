import itertools

import numpy as np
import pytest

from infdiag import plan
from infdiag.kernels import _pykern
from infdiag.randgen import random_diagram
from infdiag.solve import _utility_space, prepare

try:
    from infdiag.kernels import _ckern
except ImportError:
    _ckern = None

BACKENDS = [_pykern] + ([_ckern] if _ckern is not None else [])


def reference_sweep(weight, dvals, sidxs, n_states, n_alts):
    """Tiny itertools-based reference, independent of both kernels."""
    offsets = np.concatenate(([0], np.cumsum(n_states)[:-1])).astype(int) \
        if len(n_states) else np.zeros(0, dtype=int)
    cells = np.repeat(n_alts, n_states)
    best, best_choice = -np.inf, None
    for combo in itertools.product(*(range(c) for c in cells)):
        choice = np.array(combo, dtype=np.int64)
        eu = 0.0
        for c in range(len(weight)):
            if all(choice[offsets[k] + sidxs[k, c]] == dvals[k, c]
                   for k in range(len(n_states))):
                eu += weight[c]
        if eu > best:
            best, best_choice = eu, choice
    if best_choice is None:  # no decisions: the empty profile
        return float(weight.sum()), np.zeros(0, dtype=np.int64)
    return float(best), best_choice


def random_tables(rng, k_decisions=2, n_configs=24):
    n_states = rng.integers(1, 4, size=k_decisions).astype(np.int64)
    n_alts = rng.integers(2, 4, size=k_decisions).astype(np.int64)
    weight = rng.normal(size=n_configs)
    dvals = np.stack([rng.integers(0, a, size=n_configs) for a in n_alts]).astype(np.int32)
    sidxs = np.stack([rng.integers(0, s, size=n_configs) for s in n_states]).astype(np.int32)
    return weight, dvals, sidxs, n_states, n_alts


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
def test_sweep_matches_reference(backend):
    rng = np.random.default_rng(0)
    for _ in range(20):
        weight, dvals, sidxs, n_states, n_alts = random_tables(rng)
        want_eu, want_choice = reference_sweep(weight, dvals, sidxs, n_states, n_alts)
        got_eu, got_choice = backend.policy_sweep(weight, dvals, sidxs, n_states, n_alts)
        assert got_eu == pytest.approx(want_eu, abs=1e-12)
        np.testing.assert_array_equal(got_choice, want_choice)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
def test_sweep_without_decisions_sums_weight(backend):
    weight = np.array([0.25, -1.5, 3.0])
    empty_i32 = np.zeros((0, 3), dtype=np.int32)
    empty_i64 = np.zeros(0, dtype=np.int64)
    eu, choice = backend.policy_sweep(weight, empty_i32, empty_i32, empty_i64, empty_i64)
    assert eu == pytest.approx(1.75)
    assert choice.size == 0


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
def test_ties_resolve_to_lexicographically_smallest(backend):
    # Two indifferent decisions: every profile scores the same.
    weight = np.ones(4)
    dvals = np.array([[0, 0, 1, 1], [0, 1, 0, 1]], dtype=np.int32)
    sidxs = np.zeros((2, 4), dtype=np.int32)
    n_states = np.array([1, 1], dtype=np.int64)
    n_alts = np.array([2, 2], dtype=np.int64)
    _, choice = backend.policy_sweep(weight, dvals, sidxs, n_states, n_alts)
    np.testing.assert_array_equal(choice, [0, 0])


@pytest.mark.skipif(_ckern is None, reason="compiled kernel not built")
def test_compiled_and_python_backends_agree_on_diagrams():
    rng = np.random.default_rng(9)
    for _ in range(25):
        d = _utility_space(prepare(random_diagram(rng, gamma=0.002)))
        ft = plan.full_tables(d)
        weight = np.ascontiguousarray(ft.prob * ft.payoff)
        py = _pykern.policy_sweep(weight, ft.dvals, ft.sidxs, ft.n_states, ft.n_alts)
        cy = _ckern.policy_sweep(weight, ft.dvals, ft.sidxs, ft.n_states, ft.n_alts)
        assert cy[0] == pytest.approx(py[0], abs=1e-12)
        np.testing.assert_array_equal(cy[1], py[1])


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
def test_policy_eu_agrees_with_sweep_incumbent(backend):
    rng = np.random.default_rng(4)
    weight, dvals, sidxs, n_states, n_alts = random_tables(rng)
    offsets = np.concatenate(([0], np.cumsum(n_states)[:-1])).astype(np.int64)
    best_eu, best_choice = backend.policy_sweep(weight, dvals, sidxs, n_states, n_alts)
    assert backend.policy_eu(weight, dvals, sidxs, offsets,
                             np.ascontiguousarray(best_choice)) == pytest.approx(best_eu)
