import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_fixture, make_betpass
from infdiag import errors as er
from infdiag.model import (
    Diagram, chance, complete_no_forgetting, config_count, decode_config, decision,
    encode_config, iter_configs, validate, value,
)

cards_lists = st.lists(st.integers(min_value=1, max_value=5), min_size=0, max_size=5)


# ---------------------------------------------------------------------------
# Mixed-radix indexing
# ---------------------------------------------------------------------------

@given(cards_lists, st.data())
def test_encode_decode_roundtrip(cards, data):
    index = data.draw(st.integers(min_value=0, max_value=config_count(cards) - 1))
    assert encode_config(decode_config(index, cards), cards) == index


@given(cards_lists)
@settings(max_examples=100)
def test_iter_configs_matches_row_order(cards):
    configs = list(iter_configs(cards))
    assert len(configs) == config_count(cards)
    for row, cfg in enumerate(configs):
        assert encode_config(cfg, cards) == row


def test_parent_configurations_mixed_radix_order():
    d = Diagram.from_nodes([
        chance("a", "A", ["0", "1", "2"], rows=[[0.2, 0.3, 0.5]]),
        chance("b", "B", ["0", "1"], rows=[[0.5, 0.5]]),
        chance("c", "C", ["0", "1"], ["a", "b"], np.full((6, 2), 0.5), parent_cards=(3, 2)),
        value("v", "V", [], [0.0]),
    ])
    configs = list(d.parent_configurations("c"))
    assert configs[:3] == [(0, 0), (0, 1), (1, 0)]
    assert len(configs) == 6


def test_parent_configurations_no_parents_yields_empty_tuple():
    d = make_betpass()
    assert list(d.parent_configurations("outcome")) == [()]


def test_parent_configurations_seismic_three_rows():
    d = load_fixture("wildcatter.idg.json")
    assert list(d.parent_configurations("seismic")) == [(0,), (1,), (2,)]


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def test_wildcatter_fixture_is_valid():
    assert validate(load_fixture("wildcatter.idg.json")) == []


def test_betpass_fixture_is_valid():
    assert validate(make_betpass()) == []


def test_unnormalized_row_message_names_row_and_sum():
    d = Diagram.from_nodes([
        chance("x", "X", ["a", "b"], rows=[[0.5, 0.6]]),
        value("v", "V", [], [0.0]),
    ])
    report = validate(d)
    assert [v.code for v in report] == [er.ROW_NOT_NORMALIZED]
    assert "row 0 sums to 1.1" in report[0].message


def test_two_node_cycle_is_reported():
    d = Diagram.from_nodes([
        chance("a", "A", ["0", "1"], ["b"], [[0.5, 0.5], [0.5, 0.5]], parent_cards=(2,)),
        chance("b", "B", ["0", "1"], ["a"], [[0.5, 0.5], [0.5, 0.5]], parent_cards=(2,)),
        value("v", "V", [], [0.0]),
    ])
    assert er.CYCLE in [v.code for v in validate(d)]


@pytest.mark.parametrize("mutate,expected", [
    ("no_value", er.NO_VALUE_NODE),
    ("two_values", er.MULTIPLE_VALUE_NODES),
    ("value_child", er.VALUE_HAS_CHILDREN),
    ("bad_shape", er.TABLE_SHAPE_MISMATCH),
    ("nan_payoff", er.PAYOFF_NOT_FINITE),
    ("negative_gamma", er.BAD_RISK_AVERSION),
    ("unknown_parent", er.UNKNOWN_PARENT),
    ("unordered_decisions", er.DECISIONS_UNORDERED),
    ("forgetting", er.NO_FORGETTING_VIOLATION),
])
def test_single_injected_violation_is_named(mutate, expected):
    base = [
        chance("c", "C", ["0", "1"], rows=[[0.4, 0.6]]),
        decision("d1", "D1", ["a", "b"], ["c"]),
        decision("d2", "D2", ["a", "b"], ["d1", "c"]),
        value("v", "V", ["d2"], [1.0, 2.0]),
    ]
    if mutate == "no_value":
        nodes = base[:-1]
    elif mutate == "two_values":
        nodes = base + [value("v2", "V2", [], [0.0])]
    elif mutate == "value_child":
        nodes = base[:3] + [value("v", "V", ["d2"], [1.0, 2.0]),
                            chance("w", "W", ["0", "1"], ["v"],
                                   [[0.5, 0.5], [0.5, 0.5]], parent_cards=(2,))]
    elif mutate == "bad_shape":
        nodes = list(base)
        nodes[0] = chance("c", "C", ["0", "1"], rows=[[0.4, 0.6], [0.5, 0.5]],
                          parent_cards=(2,))
    elif mutate == "nan_payoff":
        nodes = base[:-1] + [value("v", "V", ["d2"], [float("nan"), 2.0])]
    elif mutate == "negative_gamma":
        nodes = base[:-1] + [value("v", "V", ["d2"], [1.0, 2.0], risk_aversion=-1.0)]
    elif mutate == "unknown_parent":
        nodes = base[:-1] + [value("v", "V", ["ghost"], [1.0])]
    elif mutate == "unordered_decisions":
        nodes = [base[0], decision("d1", "D1", ["a", "b"], ["c"]),
                 decision("d2", "D2", ["a", "b"], ["c"]),
                 value("v", "V", ["d1", "d2"], [1.0, 2.0, 3.0, 4.0])]
    elif mutate == "forgetting":
        nodes = [base[0], base[1], decision("d2", "D2", ["a", "b"], ["d1"]),
                 value("v", "V", ["d2"], [1.0, 2.0])]
    d = Diagram.from_nodes(nodes)
    assert expected in [v.code for v in validate(d)], validate(d)


def test_valid_base_diagram_for_injections_is_valid():
    d = Diagram.from_nodes([
        chance("c", "C", ["0", "1"], rows=[[0.4, 0.6]]),
        decision("d1", "D1", ["a", "b"], ["c"]),
        decision("d2", "D2", ["a", "b"], ["d1", "c"]),
        value("v", "V", ["d2"], [1.0, 2.0]),
    ])
    assert validate(d) == []


def test_duplicate_node_id_rejected_at_construction():
    with pytest.raises(ValueError, match="duplicate node id"):
        Diagram.from_nodes([
            chance("x", "X", ["a"], rows=[[1.0]]),
            chance("x", "X2", ["a"], rows=[[1.0]]),
            value("v", "V", [], [0.0]),
        ])


# ---------------------------------------------------------------------------
# No-forgetting completion
# ---------------------------------------------------------------------------

def _forgetful() -> Diagram:
    return Diagram.from_nodes([
        chance("c", "C", ["0", "1"], rows=[[0.4, 0.6]]),
        decision("d1", "D1", ["a", "b"], ["c"]),
        decision("d2", "D2", ["a", "b"], ["d1"]),
        value("v", "V", ["d2"], [1.0, 2.0]),
    ])


def test_completion_adds_earlier_information():
    completed = complete_no_forgetting(_forgetful())
    assert completed.nodes["d2"].informational_parents == ("d1", "c")
    assert validate(completed) == []


def test_completion_is_idempotent_and_only_adds():
    d = _forgetful()
    once = complete_no_forgetting(d)
    assert complete_no_forgetting(once) == once
    for nid in d.nodes:
        before = set(d.nodes[nid].parents)
        after = set(once.nodes[nid].parents)
        assert before <= after


def test_completion_on_complete_diagram_is_identity():
    d = load_fixture("wildcatter.idg.json")
    assert complete_no_forgetting(d) == d


def test_drill_inherits_test_and_its_information():
    # Wildcatter variant: the seismic reading arrives at the test decision and
    # the drill decision lists only the test; completion hands it the reading.
    d = load_fixture("wildcatter.idg.json")
    forgetful = d.with_nodes([
        decision("test", "Test", ["test", "skip"], ["seismic"]),
        decision("drill", "Drill", ["drill", "skip"], ["test"]),
    ])
    completed = complete_no_forgetting(forgetful)
    assert completed.nodes["drill"].informational_parents == ("test", "seismic")
    assert completed.nodes["test"].informational_parents == ("seismic",)


def test_completion_requires_orderable_decisions():
    d = Diagram.from_nodes([
        decision("d1", "D1", ["a", "b"]),
        decision("d2", "D2", ["a", "b"]),
        value("v", "V", ["d1", "d2"], [1.0, 2.0, 3.0, 4.0]),
    ])
    with pytest.raises(er.PreconditionError) as exc:
        complete_no_forgetting(d)
    assert exc.value.code == er.DECISIONS_UNORDERED
