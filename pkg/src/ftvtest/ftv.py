"""Pass/fail screening of plans on four designated elections.

A plan-election pair gets a check mark when the seat share is strictly
closer than ``t`` to the standard's target; otherwise ``+`` (R-favoring) or
``-`` (D-favoring). A plan passes with at least three check marks.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import EmptyEnsembleError, MissingEnsembleMeansError
from .graph import DualGraph, Plan, as_fraction
from .metrics import (
    ENSEMBLE_MEAN,
    Standard,
    _plans,
    deviation_from_target,
    republican_seats,
    vote_share,
)

FTV_FLOOR = Fraction(7, 100)
N_ELECTIONS = 4
PASS_SCORE = 3


class Mark(str, Enum):
    PASS = "✓"
    PLUS = "+"
    MINUS = "-"

    @property
    def rank(self) -> int:
        return _MARK_RANK[self]


_MARK_RANK = {Mark.PASS: 0, Mark.PLUS: 1, Mark.MINUS: 2}


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"


def ftv_threshold(k: int) -> Fraction:
    """max(0.07, 1/k): seven percent or one seat, whichever is greater."""
    if k < 1:
        raise ValueError("k must be positive")
    return max(FTV_FLOOR, Fraction(1, k))


@dataclass(frozen=True)
class FtvConfig:
    """Four election ids, a standard, and ``threshold`` = ``"ftv"`` or a fixed t > 0."""

    election_ids: tuple[str, ...]
    standard: Standard = Standard()
    threshold: object = "ftv"

    def __post_init__(self):
        object.__setattr__(self, "election_ids", tuple(self.election_ids))
        if len(self.election_ids) != N_ELECTIONS:
            raise ValueError(f"exactly {N_ELECTIONS} elections required, got {len(self.election_ids)}")
        if self.threshold != "ftv":
            t = as_fraction(self.threshold)
            if t <= 0:
                raise ValueError("fixed threshold must be positive")
            object.__setattr__(self, "threshold", t)

    def threshold_for(self, k: int) -> Fraction:
        return ftv_threshold(k) if self.threshold == "ftv" else self.threshold


@dataclass(frozen=True)
class FtvResult:
    marks: tuple[Mark, ...]
    threshold: Fraction
    deviations: tuple[Fraction, ...] = ()

    @property
    def score(self) -> int:
        return sum(1 for m in self.marks if m == Mark.PASS)

    @property
    def verdict(self) -> Verdict:
        return Verdict.PASS if self.score >= PASS_SCORE else Verdict.FAIL

    def to_dict(self) -> dict:
        return {
            "t": round(float(self.threshold), 4),
            "marks": [m.value for m in self.marks],
            "score": self.score,
            "verdict": self.verdict.value,
        }


def mark_for(deviation, t) -> Mark:
    if abs(deviation) < t:
        return Mark.PASS
    return Mark.PLUS if deviation > 0 else Mark.MINUS


def _standards(config: FtvConfig, ensemble_means: Mapping[str, object] | None) -> list[Standard]:
    std = config.standard
    if std.kind != ENSEMBLE_MEAN:
        return [std] * N_ELECTIONS
    if ensemble_means is None:
        if std.ensemble_mean_share is not None:
            return [std] * N_ELECTIONS
        raise MissingEnsembleMeansError("ensemble_mean standard needs per-election ensemble means")
    missing = [e for e in config.election_ids if e not in ensemble_means]
    if missing:
        raise MissingEnsembleMeansError(f"no ensemble mean for {missing}")
    return [std.with_share(ensemble_means[e]) for e in config.election_ids]


def evaluate_outcomes(
    seat_shares: Sequence,
    vote_shares: Sequence,
    k: int,
    config: FtvConfig,
    ensemble_means: Mapping[str, object] | None = None,
) -> FtvResult:
    """Score precomputed (S, V) pairs given in ``config.election_ids`` order."""
    t = config.threshold_for(k)
    devs = tuple(
        deviation_from_target(S, std, V)
        for S, V, std in zip(seat_shares, vote_shares, _standards(config, ensemble_means))
    )
    return FtvResult(tuple(mark_for(d, t) for d in devs), t, devs)


class _Scorer:
    """Caches vote shares and per-election standards across many plans."""

    def __init__(self, graph: DualGraph, config: FtvConfig, ensemble_means=None):
        self.graph = graph
        self.config = config
        self.votes = [vote_share(graph, e) for e in config.election_ids]
        self.standards = _standards(config, ensemble_means)

    def __call__(self, plan: Plan) -> FtvResult:
        seats = republican_seats(self.graph, plan, self.config.election_ids)
        t = self.config.threshold_for(plan.k)
        devs = tuple(
            deviation_from_target(Fraction(s, plan.k), std, V)
            for s, V, std in zip(seats, self.votes, self.standards)
        )
        return FtvResult(tuple(mark_for(d, t) for d in devs), t, devs)


def evaluate(graph: DualGraph, plan: Plan, config: FtvConfig, ensemble_means=None) -> FtvResult:
    return _Scorer(graph, config, ensemble_means)(plan)


@dataclass(frozen=True)
class BreakdownReport:
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def shares(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.total) for c in self.counts)

    def to_dict(self) -> dict:
        return {
            "counts": list(self.counts),
            "shares": [round(float(s), 6) for s in self.shares],
        }


def breakdown_from_scores(scores) -> BreakdownReport:
    counts = [0] * (N_ELECTIONS + 1)
    for s in scores:
        counts[s] += 1
    if not any(counts):
        raise EmptyEnsembleError("ensemble is empty")
    return BreakdownReport(tuple(counts))


def breakdown(ensemble, graph: DualGraph, config: FtvConfig, ensemble_means=None) -> BreakdownReport:
    """Tally of plans by how many of the four elections they pass."""
    scorer = _Scorer(graph, config, ensemble_means)
    return breakdown_from_scores(scorer(p).score for p in _plans(ensemble))


@dataclass(frozen=True)
class PercentileReport:
    index: int
    result: FtvResult
    modal_marks: tuple[Mark, ...]

    def to_dict(self) -> dict:
        d = self.result.to_dict()
        d["plan_index"] = self.index
        d["modal_marks"] = [m.value for m in self.modal_marks]
        return d


def percentile_from_results(results: Sequence[FtvResult], p) -> PercentileReport:
    """Plan at rank ``ceil(p*N) - 1`` when sorted by score, best first.

    Ties keep ensemble order. ``modal_marks`` is the most common mark vector
    among all plans with the selected score; equal counts go to the
    lexicographically smallest vector under check < plus < minus.
    """
    n = len(results)
    if n == 0:
        raise EmptyEnsembleError("ensemble is empty")
    p = as_fraction(p)
    if not 0 < p < 1:
        raise ValueError("percentile must be strictly between 0 and 1")
    order = sorted(range(n), key=lambda i: -results[i].score)
    chosen = order[math.ceil(p * n) - 1]
    score = results[chosen].score
    tally = Counter(r.marks for r in results if r.score == score)
    modal = min(tally, key=lambda marks: (-tally[marks], [m.rank for m in marks]))
    return PercentileReport(chosen, results[chosen], modal)


def percentile_report(ensemble, graph: DualGraph, config: FtvConfig, p, ensemble_means=None) -> PercentileReport:
    scorer = _Scorer(graph, config, ensemble_means)
    return percentile_from_results([scorer(plan) for plan in _plans(ensemble)], p)
