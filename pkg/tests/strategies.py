"""Hypothesis strategies: small random graphs (at most 25 units) with plans and votes."""

import random

from hypothesis import strategies as st

from ftvtest.graph import DualGraph, Plan, Unit
from helpers import grow_plan

ELECTIONS = ("E1", "E2", "E3", "E4")
MAX_UNITS = 25


def build_graph(n, parents, chords, tallies, pops):
    ids = [f"u{i:02d}" for i in range(n)]
    edges = {(ids[p], ids[i + 1]) for i, p in enumerate(parents)}
    for a, b in chords:
        if a != b:
            edges.add((ids[min(a, b)], ids[max(a, b)]))
    units = [
        Unit(u, pops[i], {e: tallies[j][i] for j, e in enumerate(ELECTIONS)}) for i, u in enumerate(ids)
    ]
    return DualGraph(units, sorted(edges))


@st.composite
def graph_and_plan(draw, min_units=2, max_k=5, max_votes=30, even=False):
    """Connected graph, four elections, and a contiguous plan.

    With ``even=True`` every election has statewide V = 1/2 exactly.
    """
    n = draw(st.integers(min_units, MAX_UNITS))
    parents = [draw(st.integers(0, i)) for i in range(n - 1)]
    chords = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n))
    votes = st.tuples(st.integers(0, max_votes), st.integers(0, max_votes))
    tallies = [draw(st.lists(votes, min_size=n, max_size=n)) for _ in ELECTIONS]
    for j, col in enumerate(tallies):
        r = sum(x[0] for x in col)
        d = sum(x[1] for x in col)
        if even or r + d == 0:
            # top up unit 0 so R = D statewide (and the total is nonzero)
            r0, d0 = col[0]
            gap = r - d
            col[0] = (r0 + max(-gap, 0) + (r + d == 0), d0 + max(gap, 0) + (r + d == 0))
    pops = draw(st.lists(st.integers(1, 5), min_size=n, max_size=n))
    graph = build_graph(n, parents, chords, tallies, pops)
    k = draw(st.integers(1, min(max_k, n)))
    plan = grow_plan(graph, k, random.Random(draw(st.integers(0, 2**32))))
    return graph, plan


def swap_parties(graph):
    units = [Unit(u.id, u.population, {e: (d, r) for e, (r, d) in u.votes.items()}) for u in graph.units]
    return DualGraph(units, sorted(graph.edges))


def relabel(plan, perm):
    return Plan(tuple(perm[d] for d in plan.assignment), plan.k)
