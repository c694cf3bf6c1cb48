import numpy as np
import pytest

from conftest import make_betpass, make_coin_payout, with_gamma
from infdiag import errors as er
from infdiag.lottery import Lottery, statistics, value_lottery
from infdiag.model import Diagram, Policy, chance, decision, value
from infdiag.randgen import random_diagram
from infdiag.risk import RiskProfile
from infdiag.solve import certain_equivalent, solve


def constant_policy(decision_id: str, alternative: int) -> Policy:
    return Policy(decision_id, (), (), np.array([alternative]))


# ---------------------------------------------------------------------------
# value_lottery
# ---------------------------------------------------------------------------

def test_bet_policy_lottery():
    lot = value_lottery(make_betpass(), [constant_policy("bet", 0)])
    assert lot.atoms == ((-50.0, 0.6), (100.0, 0.4))


def test_pass_policy_lottery_is_degenerate():
    lot = value_lottery(make_betpass(), [constant_policy("bet", 1)])
    assert lot.atoms == ((0.0, 1.0),)


def test_no_decision_lottery():
    lot = value_lottery(make_coin_payout(), [])
    assert lot.atoms == ((0.0, 0.5), (100.0, 0.5))


def test_missing_policy_is_an_error():
    with pytest.raises(er.PreconditionError) as exc:
        value_lottery(make_betpass(), [])
    assert exc.value.code == er.MISSING_POLICY


def test_enumeration_bound_is_enforced():
    with pytest.raises(er.EnumerationLimitError):
        value_lottery(make_coin_payout(), [], limit=1)


def test_informed_policy_lottery():
    # Bet only on a win: mass moves off the losing branch.
    d = make_betpass()
    amended = Diagram.from_nodes([
        d.nodes["outcome"],
        decision("bet", "Bet", ["bet", "pass"], ["outcome"]),
        d.nodes["payout"],
    ])
    clairvoyant = Policy("bet", ("outcome",), (2,), np.array([0, 1]))
    lot = value_lottery(amended, [clairvoyant])
    assert lot.atoms == ((0.0, 0.6), (100.0, 0.4))


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------

def test_statistics_of_bet_lottery():
    lot = Lottery.from_atoms([(100.0, 0.4), (-50.0, 0.6)])
    ev, sd, ce = statistics(lot, RiskProfile(0.0))
    assert ev == pytest.approx(10.0)
    assert sd == pytest.approx(np.sqrt(5400.0), abs=1e-9)
    assert ce == pytest.approx(10.0)


def test_statistics_of_risky_coin():
    lot = Lottery.from_atoms([(0.0, 0.5), (100.0, 0.5)])
    ev, sd, ce = statistics(lot, RiskProfile(0.002))
    assert ev == pytest.approx(50.0)
    assert sd == pytest.approx(50.0)
    assert ce == pytest.approx(47.504, abs=1e-3)


def test_statistics_of_degenerate_lottery():
    ev, sd, ce = statistics(Lottery.from_atoms([(7.0, 1.0)]), RiskProfile(0.002))
    assert (ev, sd, ce) == (pytest.approx(7.0), pytest.approx(0.0), pytest.approx(7.0))


def test_statistics_reject_unnormalized():
    with pytest.raises(er.PreconditionError):
        statistics(Lottery.from_atoms([(1.0, 0.5)]), RiskProfile(0.0))


def test_atoms_merge_within_tolerance():
    lot = Lottery.from_atoms([(1.0, 0.25), (1.0 + 1e-13, 0.25), (2.0, 0.5)])
    assert len(lot.atoms) == 2
    assert lot.atoms[0][1] == pytest.approx(0.5)


def test_zero_probability_atoms_dropped():
    lot = Lottery.from_atoms([(1.0, 0.0), (2.0, 1.0)])
    assert lot.atoms == ((2.0, 1.0),)


# ---------------------------------------------------------------------------
# consistency with the reduction path
# ---------------------------------------------------------------------------

def test_lottery_ev_matches_solve_value_risk_neutral():
    s = solve(make_betpass())
    lot = value_lottery(s.source, s.policy_map())
    assert lot.expected_value() == pytest.approx(s.optimal_value, abs=1e-9)


def test_lottery_ce_matches_solve_value_on_fixtures(betpass, wildcatter):
    for d in (betpass, with_gamma(betpass, 0.002), wildcatter):
        s = solve(d)
        lot = value_lottery(s.source, s.policy_map())
        assert certain_equivalent(lot, s.risk) == pytest.approx(s.optimal_value, abs=1e-9)


def test_lottery_ce_matches_solve_value_on_random_diagrams():
    rng = np.random.default_rng(17)
    for k in range(30):
        d = random_diagram(rng, gamma=0.002 if k % 2 else 0.0)
        s = solve(d)
        lot = value_lottery(s.source, s.policy_map())
        assert lot.total_probability() == pytest.approx(1.0, abs=1e-9)
        assert certain_equivalent(lot, s.risk) == pytest.approx(s.optimal_value, abs=1e-9)
