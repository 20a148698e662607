"""Influence gap metrics, hRC graph generation and voting-game simulations."""

from fractions import Fraction

from . import _core
from ._core import (
    Graph,
    PartyAssignment,
    assign_parties_spa,
    build_caveman,
    caveman_gap_closed,
    clique_gap,
    equal_rep_gap,
    generate_hrc,
    metric_report,
    pcc,
    pearson,
    poll_fractions,
    regress,
    rewire_relaxed,
    simulate,
    surface,
    sweep,
    sweep_csv,
)


def _frac(pair):
    return Fraction(*pair)


def node_assortment(graph, assignment, node, assortment="dominant-negative"):
    """Exact assortment of one node as a Fraction."""
    return _frac(_core.node_assortment(graph, assignment, node, assortment))


def party_assortment(graph, assignment, party, assortment="dominant-negative"):
    return _frac(_core.party_assortment(graph, assignment, party, assortment))


def influence_gap(graph, assignment, party, assortment="dominant-negative", gap="vs-most-influential"):
    """Exact gap(s) of `party`. The runner-up convention can give several values."""
    values = [_frac(p) for p in _core.influence_gap(graph, assignment, party, assortment, gap)]
    return values[0] if gap == "vs-most-influential" else values


__all__ = [
    "Graph",
    "PartyAssignment",
    "assign_parties_spa",
    "build_caveman",
    "caveman_gap_closed",
    "clique_gap",
    "equal_rep_gap",
    "generate_hrc",
    "influence_gap",
    "metric_report",
    "node_assortment",
    "party_assortment",
    "pcc",
    "pearson",
    "poll_fractions",
    "regress",
    "rewire_relaxed",
    "simulate",
    "surface",
    "sweep",
    "sweep_csv",
]
