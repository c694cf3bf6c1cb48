"""Influence diagram workbench.

Build decision models as directed acyclic graphs of chance, decision, and
value nodes; validate them; reduce them step by step through value-preserving
transformations (barren removal, Bayes arc reversal, conditional expectation,
expected-utility maximization); and read off optimal policies, value
lotteries, certain equivalents, and the value of information.
"""

from .errors import (
    DiagramError, DocumentError, EnumerationLimitError, InvalidDiagramError,
    PreconditionError, SolverInternalError,
)
from .io import export_report, load, save
from .lottery import Lottery, statistics, value_lottery
from .model import (
    ChanceNode, ConditionalTable, DecisionNode, Diagram, OutcomeSpace, Policy,
    ValueNode, Violation, chance, complete_no_forgetting, decision, validate, value,
)
from .randgen import random_chance_diagram, random_diagram
from .risk import RiskProfile
from .solve import (
    AlternativeStat, Solution, alternative_statistics, brute_force_solve,
    certain_equivalent, solve, value_of_information,
)
from .transforms import (
    TransformRecord, add_informational_arc, remove_barren, remove_chance_into_value,
    remove_decision_into_value, reverse_arc,
)

__version__ = "0.1.0"
