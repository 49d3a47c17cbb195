"""Cell suppression analysis for two-dimensional tables with published sums.

Finds which suppressed cells an adversary can pin down exactly, tests whether
a set of suppressed cells is totally protected, and computes the fewest extra
cells to suppress so that it becomes so.
"""

from __future__ import annotations

import json
from importlib import resources

from .detection import (
    ProtectionReport,
    invariant_cells,
    perturbation_witness,
    protection_test,
    test_total_protection,
)
from .graph import MixedGraph, Orientation, suppressed_graph, total_graph
from .suppress import EXACT, PAPER, InfeasibleError, SuppressionPlan, optimal_protection_set
from .table import Cell, CellRef, Table, TableError, parse_table, render_table, validate

__all__ = [
    "Cell",
    "CellRef",
    "EXACT",
    "InfeasibleError",
    "MixedGraph",
    "Orientation",
    "PAPER",
    "ProtectionReport",
    "SuppressionPlan",
    "Table",
    "TableError",
    "invariant_cells",
    "load_fixture",
    "optimal_protection_set",
    "parse_table",
    "perturbation_witness",
    "protection_test",
    "render_table",
    "suppressed_graph",
    "test_total_protection",
    "total_graph",
    "validate",
]

FIXTURES = ("fig1", "fig2", "fig3", "tk22")


def load_fixture(name: str) -> Table:
    """One of the bundled example tables: ``fig1``, ``fig2``, ``fig3``, ``tk22``."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURES}")
    text = resources.files(__package__).joinpath("data", f"{name}.json").read_text()
    return parse_table(json.loads(text))

