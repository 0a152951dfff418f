"""Uniform spanning trees on induced subgraphs and balanced tree cuts.

Random sources are ``random.Random`` instances (Mersenne Twister). All
choices go through ``Random.choice`` / ``Random.randrange``, which draw exact
uniform integers, and node/neighbor iteration follows lexicographic unit
order, so a fixed seed gives the same tree on every platform.

The ``_``-prefixed functions work on graph indices and are what the chain
uses; the public functions speak unit ids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DisconnectedSubsetError, SubsetTooLargeError
from .graph import DualGraph, Plan, as_fraction, is_connected_subset

MAX_EXACT_NODES = 64


@dataclass(frozen=True)
class Tree:
    """Spanning tree stored as ``(child, parent)`` edges toward ``root``."""

    nodes: frozenset[str]
    edges: tuple[tuple[str, str], ...]
    root: str

    def edge_set(self) -> frozenset[frozenset[str]]:
        return frozenset(frozenset(e) for e in self.edges)

    def is_spanning_tree(self) -> bool:
        if len(self.edges) != len(self.nodes) - 1:
            return False
        adj: dict[str, list[str]] = {v: [] for v in self.nodes}
        for a, b in self.edges:
            if a not in adj or b not in adj:
                return False
            adj[a].append(b)
            adj[b].append(a)
        seen = {self.root}
        stack = [self.root]
        while stack:
            for v in adj[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen == set(self.nodes)


@dataclass(frozen=True)
class CutCandidate:
    """Tree edge plus the populations on each side, ordered as ``edge``."""

    edge: tuple[str, str]
    side_populations: tuple[int, int]


# --- index-space core -------------------------------------------------------

def _local_neighbors(adjacency, nodes: list[int]) -> list[list[int]]:
    local = {g: i for i, g in enumerate(nodes)}
    return [[local[v] for v in adjacency[g] if v in local] for g in nodes]


def _wilson(nbrs: list[list[int]], rng) -> tuple[list[int], int]:
    """Loop-erased random walk (Wilson). Returns (parent array, root)."""
    n = len(nbrs)
    choice = rng.choice
    in_tree = [False] * n
    parent = [-1] * n
    root = rng.randrange(n)
    in_tree[root] = True
    for start in range(n):
        u = start
        # Overwriting parent[u] on revisits performs the loop erasure.
        while not in_tree[u]:
            nxt = choice(nbrs[u])
            parent[u] = nxt
            u = nxt
        u = start
        while not in_tree[u]:
            in_tree[u] = True
            u = parent[u]
    parent[root] = -1
    return parent, root


def _bottom_up_order(parent: list[int], root: int) -> list[int]:
    children: list[list[int]] = [[] for _ in parent]
    for v, p in enumerate(parent):
        if p >= 0:
            children[p].append(v)
    order = [root]
    for v in order:
        order.extend(children[v])
    order.reverse()
    return order


def _subtree_populations(parent, root, pops) -> list[int]:
    sub = list(pops)
    for v in _bottom_up_order(parent, root):
        p = parent[v]
        if p >= 0:
            sub[p] += sub[v]
    return sub


def _population_window(ideal: Fraction, epsilon: Fraction) -> tuple[int, int]:
    """Integer populations p with ideal*(1-eps) <= p <= ideal*(1+eps)."""
    return math.ceil(ideal * (1 - epsilon)), math.floor(ideal * (1 + epsilon))


def _balanced_children(parent, root, pops, lo: int, hi: int) -> list[int]:
    """Children v whose edge (v, parent[v]) splits the tree into two sides in [lo, hi]."""
    sub = _subtree_populations(parent, root, pops)
    total = sub[root]
    return [
        v
        for v in range(len(parent))
        if v != root and lo <= sub[v] <= hi and lo <= total - sub[v] <= hi
    ]


def _subtree_nodes(parent, root, child: int) -> list[int]:
    """Local nodes whose path to the root passes through ``child``."""
    inside = [False] * len(parent)
    inside[child] = True
    out = []
    for v in reversed(_bottom_up_order(parent, root)):
        p = parent[v]
        if v == child or (p >= 0 and inside[p]):
            inside[v] = True
            out.append(v)
    return out


def _bareiss_determinant(m: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _count_trees(adjacency, nodes: list[int]) -> int:
    nbrs = _local_neighbors(adjacency, nodes)
    n = len(nodes)
    lap = [[0] * n for _ in range(n)]
    for i, ns in enumerate(nbrs):
        lap[i][i] = len(ns)
        for j in ns:
            lap[i][j] -= 1
    minor = [row[:-1] for row in lap[:-1]]
    return _bareiss_determinant(minor)


# --- public API -------------------------------------------------------------

def _subset_indices(graph: DualGraph, node_subset: Iterable[str]) -> list[int]:
    nodes = graph.indices(set(node_subset))
    if not nodes or not is_connected_subset(graph.adjacency, nodes):
        raise DisconnectedSubsetError("node subset does not induce a connected subgraph")
    return nodes


def wilson_ust(graph: DualGraph, node_subset: Iterable[str], rng) -> Tree:
    """Draw a uniformly random spanning tree of the subgraph induced by ``node_subset``."""
    nodes = _subset_indices(graph, node_subset)
    parent, root = _wilson(_local_neighbors(graph.adjacency, nodes), rng)
    ids = [graph.ids[g] for g in nodes]
    edges = tuple((ids[v], ids[p]) for v, p in enumerate(parent) if p >= 0)
    return Tree(frozenset(ids), edges, ids[root])


def count_spanning_trees(graph: DualGraph, node_subset: Iterable[str]) -> int:
    """Number of spanning trees of the induced subgraph (Matrix-Tree theorem)."""
    node_subset = set(node_subset)
    if len(node_subset) > MAX_EXACT_NODES:
        raise SubsetTooLargeError(
            f"{len(node_subset)} nodes exceeds the exact-count limit of {MAX_EXACT_NODES}"
        )
    return _count_trees(graph.adjacency, _subset_indices(graph, node_subset))


def spanning_tree_score(graph: DualGraph, plan: Plan) -> list[int]:
    """Per-district spanning tree counts; their product is spanning-tree compactness."""
    return [
        count_spanning_trees(graph, [graph.ids[v] for v in nodes]) for nodes in plan.districts()
    ]


def balanced_cuts(
    tree: Tree, unit_populations: Mapping[str, int], ideal, epsilon
) -> list[CutCandidate]:
    """Tree edges whose removal leaves both sides within ``epsilon`` of ``ideal``.

    One pass of subtree sums; candidates come back in lexicographic order of
    the child endpoint.
    """
    ideal = as_fraction(ideal)
    if ideal <= 0:
        raise ValueError("ideal population must be positive")
    lo, hi = _population_window(ideal, as_fraction(epsilon))
    ids = sorted(tree.nodes)
    local = {uid: i for i, uid in enumerate(ids)}
    parent = [-1] * len(ids)
    for child, par in tree.edges:
        parent[local[child]] = local[par]
    root = local[tree.root]
    pops = [unit_populations[uid] for uid in ids]
    sub = _subtree_populations(parent, root, pops)
    total = sub[root]
    return [
        CutCandidate((ids[v], ids[parent[v]]), (sub[v], total - sub[v]))
        for v in _balanced_children(parent, root, pops, lo, hi)
    ]
