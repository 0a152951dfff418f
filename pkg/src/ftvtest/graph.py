"""Dual graph and districting plan data model.

Units are stored in lexicographic order of their ids; that order is used for
every index-based structure (adjacency lists, assignment vectors, ensemble
files), which is what makes seeded runs reproducible.
"""

from __future__ import annotations

import csv
import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DisconnectedGraphError,
    DiscontiguousDistrictError,
    DistrictIndexError,
    DuplicateEdgeError,
    DuplicateUnitError,
    EmptyDistrictError,
    GraphParseError,
    InconsistentElectionsError,
    MissingUnitError,
    NegativeValueError,
    PlanParseError,
    PopulationImbalanceError,
    SelfLoopError,
    ThirdPartyColumnError,
    UnknownElectionError,
    UnknownEndpointError,
    UnknownUnitError,
)

PARTIES = ("R", "D")


def as_fraction(x) -> Fraction:
    """Exact rational from int, Fraction, decimal string or float.

    Floats go through their shortest repr so that ``0.01`` means 1/100.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"not a finite number: {x!r}")
        return Fraction(repr(x))
    return Fraction(str(x))


@dataclass(frozen=True)
class Unit:
    id: str
    population: int
    votes: Mapping[str, tuple[int, int]]


class DualGraph:
    """Connected adjacency graph of geographic units.

    Construction validates every structural invariant and raises a distinct
    error class for each kind of defect. Instances are not mutated afterwards.
    """

    def __init__(self, units: Iterable[Unit], edges: Iterable[Sequence[str]]):
        units = sorted(units, key=lambda u: u.id)
        if not units:
            raise GraphParseError("graph has no units")
        ids = tuple(u.id for u in units)
        for a, b in zip(ids, ids[1:]):
            if a == b:
                raise DuplicateUnitError(f"duplicate unit id {a!r}")

        election_ids = frozenset(units[0].votes)
        for u in units:
            if u.population < 0:
                raise NegativeValueError(f"unit {u.id!r} has negative population")
            if frozenset(u.votes) != election_ids:
                raise InconsistentElectionsError(
                    f"unit {u.id!r} has elections {sorted(u.votes)}, "
                    f"expected {sorted(election_ids)}"
                )
            for eid, (r, d) in u.votes.items():
                if r < 0 or d < 0:
                    raise NegativeValueError(f"unit {u.id!r} has a negative tally in {eid!r}")

        index = {uid: i for i, uid in enumerate(ids)}
        seen = set()
        edge_ix = []
        for edge in edges:
            a, b = edge
            for end in (a, b):
                if end not in index:
                    raise UnknownEndpointError(f"edge ({a!r}, {b!r}) names unknown unit {end!r}")
            if a == b:
                raise SelfLoopError(f"self-loop on unit {a!r}")
            i, j = sorted((index[a], index[b]))
            if (i, j) in seen:
                raise DuplicateEdgeError(f"duplicate edge ({a!r}, {b!r})")
            seen.add((i, j))
            edge_ix.append((i, j))
        edge_ix.sort()

        n = len(ids)
        adj: list[list[int]] = [[] for _ in range(n)]
        for i, j in edge_ix:
            adj[i].append(j)
            adj[j].append(i)

        self.units: tuple[Unit, ...] = tuple(units)
        self.ids: tuple[str, ...] = ids
        self.index: dict[str, int] = index
        self.edge_indices: tuple[tuple[int, int], ...] = tuple(edge_ix)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)
        self.populations: tuple[int, ...] = tuple(u.population for u in units)
        self.total_population: int = sum(self.populations)
        self.election_ids: tuple[str, ...] = tuple(sorted(election_ids))
        self._tallies = {
            eid: (
                np.array([u.votes[eid][0] for u in units], dtype=np.int64),
                np.array([u.votes[eid][1] for u in units], dtype=np.int64),
            )
            for eid in self.election_ids
        }

        if len(connected_component(self.adjacency, 0)) != n:
            raise DisconnectedGraphError("dual graph is not connected")

    def __len__(self):
        return len(self.ids)

    def __repr__(self):
        return f"DualGraph({len(self.ids)} units, {len(self.edge_indices)} edges)"

    @property
    def edges(self) -> set[tuple[str, str]]:
        return {(self.ids[i], self.ids[j]) for i, j in self.edge_indices}

    def tallies(self, election_id: str) -> tuple[np.ndarray, np.ndarray]:
        """Per-unit (R, D) vote arrays in unit order."""
        try:
            return self._tallies[election_id]
        except KeyError:
            raise UnknownElectionError(f"unknown election {election_id!r}") from None

    def indices(self, unit_ids: Iterable[str]) -> list[int]:
        try:
            return sorted(self.index[u] for u in unit_ids)
        except KeyError as exc:
            raise UnknownUnitError(f"unknown unit {exc.args[0]!r}") from None

    def to_dict(self) -> dict:
        return {
            "units": [
                {
                    "id": u.id,
                    "pop": u.population,
                    "votes": {eid: {"R": r, "D": d} for eid, (r, d) in sorted(u.votes.items())},
                }
                for u in self.units
            ],
            "edges": [[self.ids[i], self.ids[j]] for i, j in self.edge_indices],
        }

    def __eq__(self, other):
        if not isinstance(other, DualGraph):
            return NotImplemented
        return self.units == other.units and self.edge_indices == other.edge_indices

    __hash__ = None


def connected_component(adjacency, start: int, allowed=None) -> set[int]:
    """Nodes reachable from ``start``; if ``allowed`` is given, walk only inside it."""
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if v not in seen and (allowed is None or v in allowed):
                seen.add(v)
                queue.append(v)
    return seen


def is_connected_subset(adjacency, nodes) -> bool:
    nodes = set(nodes)
    if not nodes:
        return False
    start = min(nodes)
    return len(connected_component(adjacency, start, nodes)) == len(nodes)


# --- graph IO ---------------------------------------------------------------

def _nonneg_int(value, what):
    if isinstance(value, bool) or not isinstance(value, int):
        raise GraphParseError(f"{what} must be an integer, got {value!r}")
    return value


def graph_from_dict(data) -> DualGraph:
    if not isinstance(data, dict) or "units" not in data or "edges" not in data:
        raise GraphParseError("graph JSON needs top-level 'units' and 'edges'")
    if not isinstance(data["units"], list) or not isinstance(data["edges"], list):
        raise GraphParseError("'units' and 'edges' must be arrays")
    units = []
    for raw in data["units"]:
        if not isinstance(raw, dict) or "id" not in raw or "pop" not in raw:
            raise GraphParseError(f"unit entry needs 'id' and 'pop': {raw!r}")
        uid = raw["id"]
        if not isinstance(uid, str):
            raise GraphParseError(f"unit id must be a string, got {uid!r}")
        pop = _nonneg_int(raw["pop"], f"population of {uid!r}")
        votes = {}
        raw_votes = raw.get("votes", {})
        if not isinstance(raw_votes, dict):
            raise GraphParseError(f"votes of {uid!r} must be an object")
        for eid, tally in raw_votes.items():
            if not isinstance(tally, dict):
                raise GraphParseError(f"tally {eid!r} of {uid!r} must be an object")
            extra = set(tally) - set(PARTIES)
            if extra:
                raise ThirdPartyColumnError(
                    f"unit {uid!r}, election {eid!r}: unsupported party columns {sorted(extra)}"
                )
            if set(tally) != set(PARTIES):
                raise GraphParseError(f"unit {uid!r}, election {eid!r}: need both R and D")
            votes[eid] = (
                _nonneg_int(tally["R"], f"R votes of {uid!r}"),
                _nonneg_int(tally["D"], f"D votes of {uid!r}"),
            )
        units.append(Unit(uid, pop, votes))
    edges = []
    for e in data["edges"]:
        if not isinstance(e, list) or len(e) != 2 or not all(isinstance(x, str) for x in e):
            raise GraphParseError(f"edge must be a pair of unit ids: {e!r}")
        edges.append(tuple(e))
    return DualGraph(units, edges)


def load_graph(path) -> DualGraph:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"{path}: invalid JSON: {exc}") from None
    return graph_from_dict(data)


def dump_graph(graph: DualGraph, path) -> None:
    Path(path).write_text(json.dumps(graph.to_dict(), indent=1) + "\n", encoding="utf-8")


# --- plans ------------------------------------------------------------------

@dataclass(frozen=True)
class Plan:
    """Assignment of every unit (in graph order) to a district in ``0..k-1``."""

    assignment: tuple[int, ...]
    k: int

    def districts(self) -> list[list[int]]:
        parts: list[list[int]] = [[] for _ in range(self.k)]
        for node, d in enumerate(self.assignment):
            parts[d].append(node)
        return parts

    def mapping(self, graph: DualGraph) -> dict[str, int]:
        return dict(zip(graph.ids, self.assignment))


def validate_plan(graph: DualGraph, plan: Plan, epsilon=None) -> None:
    """Raise if ``plan`` breaks a structural invariant.

    The population check runs only when ``epsilon`` is given.
    """
    if len(plan.assignment) != len(graph):
        raise MissingUnitError(
            f"plan assigns {len(plan.assignment)} units, graph has {len(graph)}"
        )
    if plan.k < 1:
        raise DistrictIndexError("k must be positive")
    for node, d in enumerate(plan.assignment):
        if not 0 <= d < plan.k:
            raise DistrictIndexError(
                f"unit {graph.ids[node]!r} assigned to district {d}, outside 0..{plan.k - 1}"
            )
    for d, nodes in enumerate(plan.districts()):
        if not nodes:
            raise EmptyDistrictError(f"district {d} is empty")
        if not is_connected_subset(graph.adjacency, nodes):
            raise DiscontiguousDistrictError(f"district {d} is not contiguous")
    if epsilon is not None:
        pops = district_populations(graph, plan)
        if not check_population_balance(pops, plan.k, epsilon):
            raise PopulationImbalanceError(
                f"district populations {pops} exceed tolerance {epsilon}"
            )


def plan_from_mapping(graph: DualGraph, mapping: Mapping[str, int], k: int) -> Plan:
    for uid in mapping:
        if uid not in graph.index:
            raise UnknownUnitError(f"plan names unknown unit {uid!r}")
    missing = [uid for uid in graph.ids if uid not in mapping]
    if missing:
        raise MissingUnitError(f"plan does not assign {len(missing)} unit(s), e.g. {missing[0]!r}")
    plan = Plan(tuple(int(mapping[uid]) for uid in graph.ids), k)
    validate_plan(graph, plan)
    return plan


def load_plan(path, graph: DualGraph, k: int | None = None) -> Plan:
    """Read a ``unit_id,district`` CSV; ``k`` defaults to the largest index + 1."""
    mapping: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["unit_id", "district"]:
            raise PlanParseError(f"{path}: header must be 'unit_id,district'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise PlanParseError(f"{path}:{lineno}: expected 2 columns")
            uid, raw = row[0].strip(), row[1].strip()
            try:
                district = int(raw, 10)
            except ValueError:
                raise PlanParseError(f"{path}:{lineno}: district {raw!r} is not an integer") from None
            if uid in mapping:
                raise PlanParseError(f"{path}:{lineno}: unit {uid!r} listed twice")
            mapping[uid] = district
    if k is None:
        k = max(mapping.values(), default=-1) + 1
    return plan_from_mapping(graph, mapping, k)


def write_plan(graph: DualGraph, plan: Plan, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["unit_id", "district"])
        for uid, d in zip(graph.ids, plan.assignment):
            w.writerow([uid, d])


def district_populations(graph: DualGraph, plan: Plan) -> list[int]:
    pops = [0] * plan.k
    for p, d in zip(graph.populations, plan.assignment):
        pops[d] += p
    return pops


def check_population_balance(populations: Sequence[int], k: int, epsilon) -> bool:
    """True iff every district is within ``epsilon`` of ideal (inclusive)."""
    if len(populations) != k:
        raise ValueError(f"expected {k} populations, got {len(populations)}")
    eps = as_fraction(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be non-negative")
    ideal = Fraction(sum(populations), k)
    slack = eps * ideal
    return all(abs(p - ideal) <= slack for p in populations)
