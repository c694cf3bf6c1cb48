from dataclasses import replace
from pathlib import Path

import pytest

from infdiag import io as dio
from infdiag.model import Diagram, chance, decision, value

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


def load_fixture(name: str) -> Diagram:
    return dio.load((FIXTURES / name).read_bytes())


def with_gamma(d: Diagram, gamma: float) -> Diagram:
    return d.with_nodes([replace(d.value_node, risk_aversion=gamma)])


def make_betpass(gamma: float = 0.0) -> Diagram:
    """Bet/pass micro model: decide before a .4/.6 win-lose draw."""
    return Diagram.from_nodes([
        chance("outcome", "Outcome", ["win", "lose"], rows=[[0.4, 0.6]]),
        decision("bet", "Bet", ["bet", "pass"]),
        value("payout", "Payout", ["bet", "outcome"], [100.0, -50.0, 0.0, 0.0], gamma),
    ])


def make_coin_payout(gamma: float = 0.0) -> Diagram:
    """Single chance node paying 0 or 100 with even odds."""
    return Diagram.from_nodes([
        chance("x", "X", ["zero", "hundred"], rows=[[0.5, 0.5]]),
        value("v", "Value", ["x"], [0.0, 100.0], gamma),
    ])


@pytest.fixture
def betpass() -> Diagram:
    return load_fixture("betpass.idg.json")


@pytest.fixture
def wildcatter() -> Diagram:
    return load_fixture("wildcatter.idg.json")
