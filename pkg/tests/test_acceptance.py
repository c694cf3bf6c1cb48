"""Acceptance suite: one test per release criterion, at pinned tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion.
"""

import copy
import json
import time

import numpy as np
import pytest

from conftest import FIXTURES, GOLDEN, load_fixture, make_betpass, with_gamma
from infdiag import errors as er
from infdiag import io as dio
from infdiag import plan, transforms
from infdiag.lottery import Lottery, value_lottery
from infdiag.model import validate
from infdiag.randgen import random_chance_diagram, random_diagram, reversible_arcs
from infdiag.risk import RiskProfile
from infdiag.solve import (
    brute_force_solve, certain_equivalent, expected_utility_under, solve,
    value_of_information,
)


def ok(label: str) -> None:
    print(f"PASS: {label}")


def test_oracle_equivalence_200_random_diagrams():
    rng = np.random.default_rng(20240817)
    started = time.monotonic()
    for k in range(200):
        gamma = 0.002 if k % 2 else 0.0
        d = random_diagram(rng, gamma=gamma)
        s = solve(d)
        b = brute_force_solve(d)
        assert abs(s.optimal_expected_utility - b.optimal_expected_utility) <= 1e-9, k
        induced_s = expected_utility_under(d, list(s.policies))
        induced_b = expected_utility_under(d, list(b.policies))
        assert abs(induced_s - induced_b) <= 1e-9, k
    elapsed = time.monotonic() - started
    assert elapsed < 60.0, f"took {elapsed:.1f}s"
    ok(f"oracle equivalence on 200 random diagrams ({elapsed:.1f}s)")


def test_joint_preservation_under_arc_reversal():
    rng = np.random.default_rng(7)
    diagrams = 0
    while diagrams < 100:
        d = random_chance_diagram(rng)
        ids0, joint0 = plan.chance_joint(d)
        for i, j in reversible_arcs(d):
            once = transforms.reverse_arc(d, i, j)
            ids1, joint1 = plan.chance_joint(once)
            assert ids0 == ids1
            assert np.max(np.abs(joint0 - joint1)) <= 1e-9
            twice = transforms.reverse_arc(once, j, i)
            _, joint2 = plan.chance_joint(twice)
            assert np.max(np.abs(joint0 - joint2)) <= 1e-9
        diagrams += 1
    ok("joint preserved entrywise across reversals on 100 chance-only diagrams")


def test_wildcatter_reversal_numerics():
    d = load_fixture("wildcatter.idg.json")
    # Independent enumeration oracle for the two-node joint.
    prior = d.nodes["oil"].table.probabilities[0]
    cpt = d.nodes["seismic"].table.probabilities
    joint = prior[:, None] * cpt
    marginal_oracle = joint.sum(axis=0)
    posterior_oracle = (joint / marginal_oracle).T

    flipped = transforms.reverse_arc(d, "oil", "seismic")
    marginal = flipped.nodes["seismic"].table.probabilities[0]
    posterior = flipped.nodes["oil"].table.probabilities
    assert np.max(np.abs(marginal - np.array([0.41, 0.35, 0.24]))) <= 1e-9
    assert np.max(np.abs(marginal - marginal_oracle)) <= 1e-9
    closed = posterior[2]
    assert np.max(np.abs(closed - np.array([5 / 24, 3 / 8, 5 / 12]))) <= 1e-9
    assert np.max(np.abs(posterior - posterior_oracle)) <= 1e-9
    ok("wildcatter reversal: marginal (.41,.35,.24), posterior (5/24, 3/8, 5/12)")


def test_betpass_fixture_numbers():
    d = load_fixture("betpass.idg.json")
    s = solve(d)
    assert abs(s.optimal_value - 10.0) <= 1e-9
    assert s.source.nodes["bet"].space.labels[int(s.policies[0].choice[0])] == "bet"

    risky = solve(with_gamma(d, 0.002))
    assert abs(risky.optimal_value - 4.725) <= 1e-3
    assert risky.source.nodes["bet"].space.labels[int(risky.policies[0].choice[0])] == "bet"

    assert abs(value_of_information(d, "outcome", "bet") - 30.0) <= 1e-9
    ok("bet/pass: value 10 / policy bet; CE 4.725 at gamma .002; VOI 30")


def test_risk_properties():
    rng = np.random.default_rng(99)
    profile = RiskProfile(0.002)
    for _ in range(100):
        n = int(rng.integers(2, 5))
        xs = rng.uniform(-100, 100, size=n)
        while np.ptp(xs) < 1e-6:
            xs = rng.uniform(-100, 100, size=n)
        ps = rng.dirichlet(np.ones(n))
        lot = Lottery.from_atoms(zip(xs, ps))
        ev = certain_equivalent(lot, RiskProfile(0.0))
        ce = certain_equivalent(lot, profile)
        assert ce < ev

        c = float(rng.uniform(-50, 50))
        shifted = Lottery.from_atoms(zip(xs + c, ps))
        assert abs(certain_equivalent(shifted, profile) - (ce + c)) <= 1e-9

        assert abs(certain_equivalent(lot, RiskProfile(1e-9)) - ev) <= 1e-4
    ok("risk: CE < EV, delta property within 1e-9, CE(1e-9) -> EV within 1e-4")


def test_lottery_reduction_consistency():
    rng = np.random.default_rng(1717)
    cases = [load_fixture("betpass.idg.json"),
             with_gamma(load_fixture("betpass.idg.json"), 0.002),
             load_fixture("wildcatter.idg.json")]
    cases += [random_diagram(rng, gamma=0.002 if k % 2 else 0.0) for k in range(100)]
    for d in cases:
        s = solve(d)
        lot = value_lottery(s.source, s.policy_map())
        assert abs(certain_equivalent(lot, s.risk) - s.optimal_value) <= 1e-9
    ok("CE of the value lottery equals the reduction value on fixtures + 100 random")


def test_report_layout_is_the_acceptance_surface():
    # What is pinned here is the report shape, not any historical solution
    # values: a (certain equivalent, expected value, standard deviation)
    # column order and the gamma = .002 convention, frozen as a golden file.
    d = load_fixture("wildcatter.idg.json")
    assert d.value_node.risk_aversion == 0.002
    text = dio.export_report(solve(d), "text").decode()
    assert text == (GOLDEN / "wildcatter_solve.txt").read_text()
    assert "(certain equivalent, expected value, standard deviation)" in text
    assert "risk aversion: 0.002" in text
    ok("report layout golden: CE/EV/SD column order under the .002 convention")


def test_transform_outputs_and_snapshots_validate():
    rng = np.random.default_rng(4242)
    for _ in range(40):
        d = random_diagram(rng)
        s = solve(d)
        for rec in s.transcript:
            assert validate(rec.after) == []
    # API snapshots: run a session through edits and transforms.
    from fastapi.testclient import TestClient
    from infdiag.service import create_app
    client = TestClient(create_app(static_dir="/nonexistent"))
    doc = json.loads((FIXTURES / "wildcatter.idg.json").read_text())
    sid = client.post("/api/sessions", json={"document": doc}).json()["session_id"]
    snaps = [client.get(f"/api/sessions/{sid}").json()]
    r = client.post(f"/api/sessions/{sid}/transforms",
                    json={"kind": "reverse", "from": "oil", "to": "seismic"})
    snaps.append(r.json())
    r = client.post(f"/api/sessions/{sid}/edits",
                    json={"op": "set_name", "node": "drill", "name": "Drill?"})
    snaps.append(r.json())
    for snap in snaps:
        assert validate(dio.from_document(snap["diagram"])) == []
    ok("every transform output and API snapshot validates empty")


def test_round_trip_and_loader_robustness():
    for name in ("betpass.idg.json", "wildcatter.idg.json"):
        d = load_fixture(name)
        assert dio.load(dio.save(d)) == d
    rng = np.random.default_rng(31337)
    base = json.loads((FIXTURES / "wildcatter.idg.json").read_text())
    for _ in range(300):
        doc = copy.deepcopy(base)
        spot = doc["nodes"][int(rng.integers(0, len(doc["nodes"])))]
        action = int(rng.integers(0, 6))
        if action == 0:
            spot.pop(list(spot.keys())[int(rng.integers(0, len(spot)))], None)
        elif action == 1:
            spot["parents"] = [str(rng.integers(0, 100))]
        elif action == 2 and "table" in spot:
            spot["table"] = spot["table"][: int(rng.integers(0, len(spot["table"])))]
        elif action == 3:
            spot["kind"] = rng.choice(["chance", "decision", "value", "bogus"])
        elif action == 4:
            doc["schema_version"] = int(rng.integers(0, 3))
        else:
            spot["outcomes"] = []
        try:
            dio.from_document(doc)
        except er.DocumentError:
            pass
    ok("load/save round trip on fixtures; 300 fuzzed documents never crash the loader")
