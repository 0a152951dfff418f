"""Recombination (ReCom) Markov chain over contiguous, balanced plans.

Each step picks a cut edge uniformly, merges the two districts it joins,
draws a uniform spanning tree of the merged region (Wilson's algorithm) and
cuts one of its balanced edges. Balance is always measured against the
statewide ideal ``total_population / k``, so every emitted plan satisfies the
global tolerance.

Randomness comes from :func:`make_rng`, a ``random.Random`` (Mersenne
Twister) seeded with ``stream * 2**64 + seed``; stream 0 drives the chain and
stream 1 the initial plan.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .errors import ConfigError, SeedingFailedError, StepFailedError
from .graph import DualGraph, Plan, as_fraction, validate_plan
from .spanning_tree import (
    _balanced_children,
    _local_neighbors,
    _population_window,
    _subtree_nodes,
    _subtree_populations,
    _wilson,
)

CHAIN_STREAM = 0
SEED_STREAM = 1
RETRY_BUDGET_FACTOR = 10


def make_rng(seed: int, stream: int = CHAIN_STREAM) -> random.Random:
    if not 0 <= seed < 2**64:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return random.Random(stream * 2**64 + seed)


@dataclass(frozen=True)
class ChainConfig:
    k: int
    steps: int
    seed: int = 0
    epsilon: float | Fraction = 0.01
    max_retries_per_step: int = 1000
    record_every: int = 1
    burn_in: int = 0

    def __post_init__(self):
        for name in ("k", "steps", "max_retries_per_step", "record_every"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.burn_in, int) or self.burn_in < 0:
            raise ConfigError(f"burn_in must be a non-negative integer, got {self.burn_in!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        try:
            eps = as_fraction(self.epsilon)
        except (ValueError, TypeError, ZeroDivisionError):
            raise ConfigError(f"epsilon must be a number, got {self.epsilon!r}") from None
        if eps < 0:
            raise ConfigError("epsilon must be non-negative")

    @property
    def exact_epsilon(self) -> Fraction:
        return as_fraction(self.epsilon)

    @classmethod
    def from_dict(cls, data: dict) -> "ChainConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path) -> "ChainConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        if isinstance(self.epsilon, Fraction):
            d["epsilon"] = str(self.epsilon)
        return d


@dataclass(frozen=True)
class EnsembleRecord:
    step_index: int
    plan: Plan


@dataclass
class RunSummary:
    steps_completed: int = 0
    records_emitted: int = 0
    trees_drawn: int = 0
    wall_time: float = 0.0

    @property
    def retries_used(self) -> int:
        """Trees drawn beyond the one per step a lucky run would need."""
        return self.trees_drawn - self.steps_completed

    def to_dict(self) -> dict:
        return {
            "steps_completed": self.steps_completed,
            "records_emitted": self.records_emitted,
            "trees_drawn": self.trees_drawn,
            "retries_used": self.retries_used,
            "wall_time": round(self.wall_time, 3),
        }


def seed_plan(graph: DualGraph, config: ChainConfig, rng) -> Plan:
    """Initial plan by recursive spanning-tree bipartition.

    Districts are split off one at a time; a split is accepted only if the
    new district is within tolerance and the remainder can still hold the
    remaining districts within tolerance.
    """
    k = config.k
    n = len(graph)
    if k == 1:
        return Plan((0,) * n, 1)
    if k > n:
        raise SeedingFailedError(f"cannot make {k} nonempty districts from {n} units")
    eps = config.exact_epsilon
    ideal = Fraction(graph.total_population, k)
    lo, hi = _population_window(ideal, eps)
    assignment = [k - 1] * n
    remaining = list(range(n))
    for d in range(k - 1):
        left = k - d - 1
        rest_lo, rest_hi = _population_window(ideal * left, eps)
        nbrs = _local_neighbors(graph.adjacency, remaining)
        pops = [graph.populations[g] for g in remaining]
        for _ in range(config.max_retries_per_step):
            parent, root = _wilson(nbrs, rng)
            sub = _subtree_populations(parent, root, pops)
            total = sub[root]
            candidates = []
            for v in range(len(remaining)):
                if v == root:
                    continue
                s, c = sub[v], total - sub[v]
                if lo <= s <= hi and rest_lo <= c <= rest_hi:
                    candidates.append((v, True))
                if lo <= c <= hi and rest_lo <= s <= rest_hi:
                    candidates.append((v, False))
            if candidates:
                break
        else:
            raise SeedingFailedError(
                f"no balanced split for district {d} after {config.max_retries_per_step} trees "
                f"(k={k}, epsilon={config.epsilon})"
            )
        v, subtree_is_district = rng.choice(candidates)
        inside = set(_subtree_nodes(parent, root, v))
        district = [g for i, g in enumerate(remaining) if (i in inside) == subtree_is_district]
        for g in district:
            assignment[g] = d
        taken = set(district)
        remaining = [g for g in remaining if g not in taken]
    return Plan(tuple(assignment), k)


class _Stepper:
    """Chain state shared across steps: balance window and retry limits."""

    def __init__(self, graph: DualGraph, config: ChainConfig):
        self.graph = graph
        self.k = config.k
        self.lo, self.hi = _population_window(
            Fraction(graph.total_population, config.k), config.exact_epsilon
        )
        self.max_retries = config.max_retries_per_step
        self.budget = RETRY_BUDGET_FACTOR * config.max_retries_per_step

    def step(self, assignment: Sequence[int], rng) -> tuple[tuple[int, ...], int]:
        graph = self.graph
        cut_edges = [(i, j) for i, j in graph.edge_indices if assignment[i] != assignment[j]]
        if not cut_edges:
            # k == 1: the only plan is the whole state.
            return tuple(assignment), 0
        trees = 0
        while trees < self.budget:
            i, j = rng.choice(cut_edges)
            da, db = assignment[i], assignment[j]
            nodes = [v for v, d in enumerate(assignment) if d == da or d == db]
            nbrs = _local_neighbors(graph.adjacency, nodes)
            pops = [graph.populations[g] for g in nodes]
            for _ in range(min(self.max_retries, self.budget - trees)):
                trees += 1
                parent, root = _wilson(nbrs, rng)
                children = _balanced_children(parent, root, pops, self.lo, self.hi)
                if not children:
                    continue
                child = rng.choice(children)
                inside_label, outside_label = (da, db) if rng.randrange(2) == 0 else (db, da)
                new = list(assignment)
                for g in nodes:
                    new[g] = outside_label
                for v in _subtree_nodes(parent, root, child):
                    new[nodes[v]] = inside_label
                return tuple(new), trees
        exc = StepFailedError(f"no balanced recombination found in {trees} spanning trees")
        exc.trees = trees
        raise exc


def recom_step(graph: DualGraph, plan: Plan, config: ChainConfig, rng) -> Plan:
    """One recombination move; only the two merged districts can change."""
    assignment, _ = _Stepper(graph, config).step(plan.assignment, rng)
    return Plan(assignment, plan.k)


def run_chain(
    graph: DualGraph,
    start: Plan,
    config: ChainConfig,
    sink: Callable[[EnsembleRecord], None],
    rng=None,
) -> RunSummary:
    """Run ``config.steps`` recombination steps, passing every recorded plan to ``sink``.

    If a step fails, ``sink.flush()`` (when present) is called before the
    :class:`StepFailedError` propagates with the partial summary attached.
    """
    if start.k != config.k:
        raise ConfigError(f"start plan has k={start.k}, config has k={config.k}")
    validate_plan(graph, start, config.exact_epsilon)
    if rng is None:
        rng = make_rng(config.seed, CHAIN_STREAM)
    stepper = _Stepper(graph, config)
    summary = RunSummary()
    t0 = time.perf_counter()
    assignment = start.assignment
    try:
        for step in range(1, config.steps + 1):
            assignment, trees = stepper.step(assignment, rng)
            summary.trees_drawn += trees
            summary.steps_completed = step
            offset = step - config.burn_in
            if offset > 0 and offset % config.record_every == 0:
                sink(EnsembleRecord(step, Plan(assignment, config.k)))
                summary.records_emitted += 1
    except StepFailedError as exc:
        summary.trees_drawn += getattr(exc, "trees", 0)
        summary.wall_time = time.perf_counter() - t0
        flush = getattr(sink, "flush", None)
        if flush is not None:
            flush()
        exc.summary = summary
        raise
    summary.wall_time = time.perf_counter() - t0
    return summary


@dataclass
class _ListSink:
    records: list = field(default_factory=list)

    def __call__(self, record):
        self.records.append(record)


def _run_collect(args):
    graph, start, config = args
    sink = _ListSink()
    summary = run_chain(graph, start, config, sink)
    return config.seed, sink.records, summary


def run_chains(
    graph: DualGraph, start: Plan, configs: Sequence[ChainConfig], max_workers: int | None = None
) -> tuple[list[tuple[int, EnsembleRecord]], list[RunSummary]]:
    """Run independent chains (distinct seeds) in worker processes.

    Records are merged in ``(seed, step_index)`` order, so the combined
    ensemble does not depend on scheduling.
    """
    seeds = [c.seed for c in configs]
    if len(set(seeds)) != len(seeds):
        raise ConfigError("parallel chains need distinct seeds")
    jobs = [(graph, start, c) for c in configs]
    if max_workers == 1:
        results = [_run_collect(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(_run_collect, jobs))
    merged = sorted(
        ((seed, rec) for seed, records, _ in results for rec in records),
        key=lambda item: (item[0], item[1].step_index),
    )
    summaries = [s for _, _, s in sorted(results, key=lambda r: r[0])]
    return merged, summaries
