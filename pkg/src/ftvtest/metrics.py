"""Vote shares, seat shares, disproportionality and fairness targets.

Shares are exact :class:`~fractions.Fraction` values whenever the inputs are
(vote tallies always are); rounding happens only in :mod:`ftvtest.report`.
All shares are from the Republican point of view.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyEnsembleError,
    EmptySeriesError,
    MissingEnsembleMeansError,
    ZeroVoteError,
)
from .graph import DualGraph, Plan, as_fraction

PROPORTIONAL = "proportional"
EFFICIENCY_GAP = "efficiency_gap"
ENSEMBLE_MEAN = "ensemble_mean"
STANDARD_KINDS = (PROPORTIONAL, EFFICIENCY_GAP, ENSEMBLE_MEAN)

HALF = Fraction(1, 2)


class Winner(str, Enum):
    R = "R"
    D = "D"
    TIE = "TIE"


@dataclass(frozen=True)
class ElectionResult:
    election_id: str
    v_share: Fraction
    district_winners: tuple[Winner, ...]

    @property
    def seat_share(self) -> Fraction:
        return seat_share(self.district_winners)


@dataclass(frozen=True)
class Standard:
    """Rule that sets the ideal seat share for a given vote share.

    ``slope`` only matters for the efficiency-gap standard (ideal
    ``slope*V - 1/2``). An ensemble-mean standard may be built without a share
    and filled per election later with :meth:`with_share`.
    """

    kind: str = PROPORTIONAL
    slope: Fraction = Fraction(2)
    ensemble_mean_share: Fraction | None = None

    def __post_init__(self):
        if self.kind not in STANDARD_KINDS:
            raise ValueError(f"unknown standard {self.kind!r}; expected one of {STANDARD_KINDS}")
        object.__setattr__(self, "slope", as_fraction(self.slope))
        if self.slope <= 0:
            raise ValueError("slope must be positive")
        if self.ensemble_mean_share is not None:
            if self.kind != ENSEMBLE_MEAN:
                raise ValueError("ensemble_mean_share is only valid for the ensemble_mean standard")
            object.__setattr__(self, "ensemble_mean_share", as_fraction(self.ensemble_mean_share))

    @classmethod
    def proportional(cls) -> "Standard":
        return cls(PROPORTIONAL)

    @classmethod
    def efficiency_gap(cls, slope=2) -> "Standard":
        return cls(EFFICIENCY_GAP, slope=slope)

    @classmethod
    def ensemble_mean(cls, share=None) -> "Standard":
        return cls(ENSEMBLE_MEAN, ensemble_mean_share=share)

    def with_share(self, share) -> "Standard":
        return Standard(self.kind, self.slope, share)

    @property
    def label(self) -> str:
        if self.kind == EFFICIENCY_GAP and self.slope != 2:
            return f"efficiency_gap(slope={self.slope})"
        return self.kind


@dataclass(frozen=True)
class DispropSummary:
    mean: Fraction
    variance: Fraction


def vote_share(graph: DualGraph, election_id: str) -> Fraction:
    r, d = graph.tallies(election_id)
    total_r, total_d = int(r.sum()), int(d.sum())
    if total_r + total_d == 0:
        raise ZeroVoteError(f"election {election_id!r} has no votes")
    return Fraction(total_r, total_r + total_d)


def _assignment_array(plan: Plan) -> np.ndarray:
    return np.asarray(plan.assignment, dtype=np.intp)


def _margins(graph: DualGraph, assign: np.ndarray, k: int, election_id: str) -> np.ndarray:
    r, d = graph.tallies(election_id)
    # float64 sums of integers are exact below 2**53 votes.
    return np.bincount(assign, weights=(r - d).astype(np.float64), minlength=k)


def _winners_from_margins(margins) -> tuple[Winner, ...]:
    return tuple(Winner.R if m > 0 else Winner.D if m < 0 else Winner.TIE for m in margins)


def district_winners(graph: DualGraph, plan: Plan, election_id: str) -> tuple[Winner, ...]:
    """Strict-majority winner of each district; equal totals give TIE."""
    return _winners_from_margins(_margins(graph, _assignment_array(plan), plan.k, election_id))


def republican_seats(graph: DualGraph, plan: Plan, election_ids: Sequence[str]) -> list[int]:
    """Number of R-majority districts under each election."""
    assign = _assignment_array(plan)
    return [int((_margins(graph, assign, plan.k, e) > 0).sum()) for e in election_ids]


def seat_share(winners: Sequence[Winner]) -> Fraction:
    if not winners:
        raise ValueError("seat_share needs at least one district")
    return Fraction(sum(1 for w in winners if w == Winner.R), len(winners))


def election_result(graph: DualGraph, plan: Plan, election_id: str) -> ElectionResult:
    return ElectionResult(
        election_id, vote_share(graph, election_id), district_winners(graph, plan, election_id)
    )


def disprop(S, V):
    return S - V


def target_share(standard: Standard, V):
    if standard.kind == PROPORTIONAL:
        return V
    if standard.kind == EFFICIENCY_GAP:
        return min(max(standard.slope * V - HALF, 0), 1)
    if standard.ensemble_mean_share is None:
        raise MissingEnsembleMeansError("ensemble_mean standard has no ensemble mean share")
    return standard.ensemble_mean_share


def deviation_from_target(S, standard: Standard, V):
    return S - target_share(standard, V)


def disprop_series(graph: DualGraph, plan: Plan, elections: Sequence[str]) -> list[Fraction]:
    seats = republican_seats(graph, plan, elections)
    return [Fraction(s, plan.k) - vote_share(graph, e) for s, e in zip(seats, elections)]


def mean_variance(series: Sequence) -> DispropSummary:
    """Arithmetic mean and population variance (divide by n)."""
    n = len(series)
    if n == 0:
        raise EmptySeriesError("mean_variance needs a nonempty series")
    mean = sum(series, Fraction(0)) / n
    variance = sum(((x - mean) ** 2 for x in series), Fraction(0)) / n
    return DispropSummary(mean, variance)


def _plans(ensemble) -> Iterable[Plan]:
    for item in ensemble:
        yield item.plan if hasattr(item, "plan") else item


def ensemble_mean_share(ensemble, graph: DualGraph, election_id: str) -> Fraction:
    """Exact mean R seat share over the plans of an ensemble."""
    return ensemble_mean_shares(ensemble, graph, [election_id])[election_id]


def ensemble_mean_shares(ensemble, graph: DualGraph, election_ids: Sequence[str]) -> dict[str, Fraction]:
    """Mean R seat share for several elections in a single pass over ``ensemble``."""
    totals = [0] * len(election_ids)
    n = 0
    k = None
    for plan in _plans(ensemble):
        if k is None:
            k = plan.k
        elif plan.k != k:
            raise ValueError(f"ensemble mixes k={k} and k={plan.k}")
        for i, s in enumerate(republican_seats(graph, plan, election_ids)):
            totals[i] += s
        n += 1
    if n == 0:
        raise EmptyEnsembleError("ensemble is empty")
    return {e: Fraction(t, n * k) for e, t in zip(election_ids, totals)}
