import json
import random

from ftvtest.graph import DualGraph, Plan, Unit


def path_graph(ids, pops=None, votes=None):
    pops = pops or [1] * len(ids)
    units = [Unit(u, p, (votes or {}).get(u, {})) for u, p in zip(ids, pops)]
    return DualGraph(units, list(zip(ids, ids[1:])))


def write_json(path, obj):
    path.write_text(json.dumps(obj), encoding="utf-8")
    return path


def grow_plan(graph, k, rng: random.Random) -> Plan:
    """Random contiguous k-district plan by randomized multi-source growth."""
    n = len(graph)
    seeds = rng.sample(range(n), k)
    assign = [-1] * n
    frontier = []
    for d, s in enumerate(seeds):
        assign[s] = d
        frontier.extend((v, d) for v in graph.adjacency[s])
    while frontier:
        v, d = frontier.pop(rng.randrange(len(frontier)))
        if assign[v] != -1:
            continue
        assign[v] = d
        frontier.extend((w, d) for w in graph.adjacency[v] if assign[w] == -1)
    return Plan(tuple(assign), k)


def table_graph(elections, v_shares, seat_counts, k, unit_votes=100000):
    """k single-unit districts whose tallies realize exact (V, R seats) pairs.

    ``v_shares`` must be multiples of 1/unit_votes. Returns (graph, plan).
    """
    from fractions import Fraction

    half = unit_votes // 2
    votes = [dict() for _ in range(k)]
    for e, v, s in zip(elections, v_shares, seat_counts):
        total_r = Fraction(v) * unit_votes * k
        assert total_r.denominator == 1, "share not representable"
        r = [half + 1] * s + [half - 1] * (k - s)
        spare = int(total_r) - sum(r)
        # Push the residue into units without crossing the majority line.
        for i in range(k):
            lo, hi = (half + 1, unit_votes) if i < s else (0, half - 1)
            step = max(lo - r[i], min(hi - r[i], spare))
            r[i] += step
            spare -= step
        assert spare == 0, "no tallies realize this (V, seats) pair"
        for i in range(k):
            votes[i][e] = (r[i], unit_votes - r[i])
    ids = [f"d{i:02d}" for i in range(k)]
    units = [Unit(u, 1, votes[i]) for i, u in enumerate(ids)]
    graph = DualGraph(units, list(zip(ids, ids[1:])))
    return graph, Plan(tuple(range(k)), k)


def load_reference_table():
    import pathlib

    return json.loads((pathlib.Path(__file__).parent / "fixtures" / "reference_table.json").read_text())
