"""Synthetic dual graphs for tests and demos."""

from __future__ import annotations

import random

from .graph import DualGraph, Unit


def grid_id(row: int, col: int) -> str:
    # Zero padding keeps lexicographic order equal to row-major order.
    return f"r{row:03d}c{col:03d}"


def grid_graph(rows: int, cols: int, population=1, votes=None) -> DualGraph:
    """``rows x cols`` rook-adjacency grid.

    ``population`` is an int or a callable ``(row, col) -> int``; ``votes``
    is ``None`` or a callable ``(row, col) -> {election: (R, D)}``.
    """
    units = []
    for r in range(rows):
        for c in range(cols):
            pop = population(r, c) if callable(population) else population
            v = votes(r, c) if votes is not None else {}
            units.append(Unit(grid_id(r, c), pop, v))
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((grid_id(r, c), grid_id(r, c + 1)))
            if r + 1 < rows:
                edges.append((grid_id(r, c), grid_id(r + 1, c)))
    return DualGraph(units, edges)


def random_votes(rng: random.Random, election_ids, max_votes: int = 100):
    """Callable suitable for ``grid_graph(votes=...)`` drawing uniform tallies."""

    def draw(_r, _c):
        return {
            eid: (rng.randint(0, max_votes), rng.randint(0, max_votes)) for eid in election_ids
        }

    return draw


def random_connected_graph(
    rng: random.Random, n: int, extra_edges: int, election_ids=(), max_pop: int = 5
) -> DualGraph:
    """Random spanning tree on ``n`` nodes plus up to ``extra_edges`` chords."""
    ids = [f"u{i:02d}" for i in range(n)]
    edges = set()
    for i in range(1, n):
        j = rng.randrange(i)
        edges.add((ids[j], ids[i]))
    for _ in range(extra_edges):
        a, b = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if a != b:
            edges.add((ids[min(a, b)], ids[max(a, b)]))
    units = [
        Unit(
            uid,
            rng.randint(0, max_pop),
            {eid: (rng.randint(0, 50), rng.randint(0, 50)) for eid in election_ids},
        )
        for uid in ids
    ]
    return DualGraph(units, sorted(edges))
