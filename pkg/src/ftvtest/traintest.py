"""Does near-proportionality on early elections predict it on later ones?

Each plan gets a training score (near-proportional elections among
``early_ids``) and a test score (same on ``later_ids``). Plans are grouped by
training score and each group gets a histogram of test scores.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import EmptyEnsembleError
from .ftv import ftv_threshold
from .graph import DualGraph, Plan, as_fraction
from .metrics import _plans, republican_seats, vote_share

DEFAULT_T = Fraction(7, 100)


@dataclass(frozen=True)
class SplitConfig:
    """Early/later election lists and threshold; ``t="ftv"`` selects max(0.07, 1/k).

    The lists must be disjoint unless ``require_disjoint`` is False, which
    the self-consistency check (later == early) relies on.
    """

    early_ids: tuple[str, ...]
    later_ids: tuple[str, ...]
    t: object = DEFAULT_T
    require_disjoint: bool = True

    def __post_init__(self):
        object.__setattr__(self, "early_ids", tuple(self.early_ids))
        object.__setattr__(self, "later_ids", tuple(self.later_ids))
        if not self.early_ids or not self.later_ids:
            raise ValueError("early and later election lists must be nonempty")
        if self.require_disjoint and set(self.early_ids) & set(self.later_ids):
            raise ValueError("early and later election lists overlap")
        if self.t != "ftv":
            t = as_fraction(self.t)
            if t <= 0:
                raise ValueError("t must be positive")
            object.__setattr__(self, "t", t)

    def threshold_for(self, k: int) -> Fraction:
        return ftv_threshold(k) if self.t == "ftv" else self.t


@dataclass(frozen=True)
class ConditionalHistogram:
    s: int
    test_counts: tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(self.test_counts)

    @property
    def mean_test(self) -> Fraction | None:
        if self.size == 0:
            return None
        return Fraction(sum(j * c for j, c in enumerate(self.test_counts)), self.size)


@dataclass(frozen=True)
class TrainTestResult:
    training_hist: tuple[int, ...]
    buckets: tuple[ConditionalHistogram, ...]

    def to_dict(self) -> dict:
        return {
            "training_hist": list(self.training_hist),
            "buckets": [
                {
                    "s": b.s,
                    "test_hist": list(b.test_counts),
                    "mean": None if b.mean_test is None else round(float(b.mean_test), 6),
                }
                for b in self.buckets
            ],
        }


def proportionality_score(graph: DualGraph, plan: Plan, election_ids: Sequence[str], t) -> int:
    """Number of elections with |disprop| < t."""
    t = as_fraction(t)
    seats = republican_seats(graph, plan, election_ids)
    return sum(
        1 for s, e in zip(seats, election_ids) if abs(Fraction(s, plan.k) - vote_share(graph, e)) < t
    )


def train_test_from_scores(pairs: Iterable[tuple[int, int]], n_early: int, n_later: int) -> TrainTestResult:
    grid = [[0] * (n_later + 1) for _ in range(n_early + 1)]
    n = 0
    for train, test in pairs:
        grid[train][test] += 1
        n += 1
    if n == 0:
        raise EmptyEnsembleError("ensemble is empty")
    return TrainTestResult(
        tuple(sum(row) for row in grid),
        tuple(ConditionalHistogram(s, tuple(row)) for s, row in enumerate(grid)),
    )


def train_test(ensemble, graph: DualGraph, split: SplitConfig) -> TrainTestResult:
    early_v = [vote_share(graph, e) for e in split.early_ids]
    later_v = [vote_share(graph, e) for e in split.later_ids]

    def scores(plan):
        t = split.threshold_for(plan.k)
        early = republican_seats(graph, plan, split.early_ids)
        later = republican_seats(graph, plan, split.later_ids)
        train = sum(1 for s, v in zip(early, early_v) if abs(Fraction(s, plan.k) - v) < t)
        test = sum(1 for s, v in zip(later, later_v) if abs(Fraction(s, plan.k) - v) < t)
        return train, test

    return train_test_from_scores(
        (scores(p) for p in _plans(ensemble)), len(split.early_ids), len(split.later_ids)
    )
