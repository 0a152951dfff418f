"""Plot-ready and table-ready outputs.

Every number is rendered by :func:`fixed` from its exact rational value, with
round-half-away-from-zero, so output files are byte-stable across platforms.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .errors import EmptyEnsembleError, EmptySeriesError
from .ftv import N_ELECTIONS, BreakdownReport, FtvConfig, FtvResult, evaluate
from .graph import DualGraph, Plan, as_fraction
from .metrics import (
    DispropSummary,
    Standard,
    _plans,
    disprop,
    disprop_series,
    mean_variance,
    republican_seats,
    target_share,
    vote_share,
)


def fixed(x, places: int) -> str:
    """Fixed-point decimal string of ``x`` (exact for Fractions and ints)."""
    q = as_fraction(x) * 10**places
    n = abs(q.numerator) // q.denominator
    if abs(q) - n >= Fraction(1, 2):
        n += 1
    sign = "-" if q < 0 and n else ""
    digits = str(n).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def fixed_float(x, places: int) -> float:
    return float(fixed(x, places))


@dataclass(frozen=True)
class ScoreRecord:
    plan_name: str
    elections: tuple[str, ...]
    series: tuple[Fraction, ...]
    summary: DispropSummary
    ftv: dict[str, FtvResult] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "plan": self.plan_name,
            "elections": list(self.elections),
            "disprop": [fixed_float(x, 3) for x in self.series],
            "mean": fixed_float(self.summary.mean, 6),
            "variance": fixed_float(self.summary.variance, 6),
            "ftv": {label: r.to_dict() for label, r in self.ftv.items()},
        }


def score_plan(
    graph: DualGraph,
    plan: Plan,
    elections: Sequence[str],
    ftv_configs: Sequence[FtvConfig] = (),
    ensemble_means=None,
    name: str = "plan",
) -> ScoreRecord:
    series = tuple(disprop_series(graph, plan, elections))
    results = {c.standard.label: evaluate(graph, plan, c, ensemble_means) for c in ftv_configs}
    return ScoreRecord(name, tuple(elections), series, mean_variance(series), results)


def mean_variance_rows(ensemble, graph: DualGraph, elections: Sequence[str]):
    if not elections:
        raise EmptySeriesError("need at least one election")
    votes = [vote_share(graph, e) for e in elections]
    for plan in _plans(ensemble):
        seats = republican_seats(graph, plan, elections)
        yield mean_variance([disprop(Fraction(s, plan.k), v) for s, v in zip(seats, votes)])


def emit_mean_variance_csv(ensemble, graph: DualGraph, elections: Sequence[str], path) -> int:
    """Write ``variance,mean`` rows, one per plan; returns the row count."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("variance,mean\n")
        for summary in mean_variance_rows(ensemble, graph, elections):
            fh.write(f"{fixed(summary.variance, 6)},{fixed(summary.mean, 6)}\n")
            n += 1
    if n == 0:
        raise EmptyEnsembleError("ensemble is empty")
    return n


# --- target table -----------------------------------------------------------

@dataclass
class TargetTable:
    """Per-election vote share, standard targets (in seats) and plan outcomes."""

    k: int
    elections: list[str]
    vote_shares: list[Fraction]
    targets: dict[str, list[Fraction]]
    seats: dict[str, list[int]]

    def seat_shares(self, plan: str) -> list[Fraction]:
        return [Fraction(s, self.k) for s in self.seats[plan]]

    def disprops(self, plan: str) -> list[Fraction]:
        return [disprop(S, V) for S, V in zip(self.seat_shares(plan), self.vote_shares)]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "elections": self.elections,
            "vote_share": [fixed(v, 3) for v in self.vote_shares],
            "targets": {name: [fixed(t, 1) for t in row] for name, row in self.targets.items()},
            "plans": {
                plan: {
                    "seats": self.seats[plan],
                    "seat_share": [fixed(s, 3) for s in self.seat_shares(plan)],
                    "disprop": [fixed(d, 3) for d in self.disprops(plan)],
                }
                for plan in self.seats
            },
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["row", "field", *self.elections])
        w.writerow(["election", "R vote share", *(fixed(v, 3) for v in self.vote_shares)])
        for name, row in self.targets.items():
            w.writerow(["target", name, *(fixed(t, 1) for t in row)])
        for plan in self.seats:
            w.writerow([plan, "R seats", *self.seats[plan]])
            w.writerow([plan, "R seat share", *(fixed(s, 3) for s in self.seat_shares(plan))])
            w.writerow([plan, "disprop", *(fixed(d, 3) for d in self.disprops(plan))])
        return out.getvalue()


def target_table(
    elections: Sequence[str],
    vote_shares: Sequence,
    seat_counts: Mapping[str, Sequence[int]],
    k: int,
    standards: Sequence[Standard],
    ensemble_means: Mapping[str, object] | None = None,
) -> TargetTable:
    """Build the table from vote shares and per-plan R seat counts."""
    targets = {}
    for std in standards:
        row = []
        for e, V in zip(elections, vote_shares):
            per_election = std
            if std.kind == "ensemble_mean" and ensemble_means is not None:
                per_election = std.with_share(ensemble_means[e])
            row.append(k * target_share(per_election, V))
        targets[std.label] = row
    return TargetTable(
        k, list(elections), list(vote_shares), targets, {p: list(s) for p, s in seat_counts.items()}
    )


def emit_target_table(
    graph: DualGraph,
    plans: Mapping[str, Plan],
    elections: Sequence[str],
    standards: Sequence[Standard],
    ensemble_means=None,
) -> TargetTable:
    ks = {p.k for p in plans.values()}
    if len(ks) != 1:
        raise ValueError(f"plans must share one k, got {sorted(ks)}")
    return target_table(
        elections,
        [vote_share(graph, e) for e in elections],
        {name: republican_seats(graph, p, elections) for name, p in plans.items()},
        ks.pop(),
        standards,
        ensemble_means,
    )


# --- breakdown --------------------------------------------------------------

def breakdown_percentages(report: BreakdownReport) -> list[float]:
    """Shares as percentages (1 decimal), ordered from score 4 down to 0."""
    return [fixed_float(100 * s, 1) for s in reversed(report.shares)]


def emit_breakdown(report: BreakdownReport, path) -> list[float]:
    if len(report.counts) != N_ELECTIONS + 1:
        raise ValueError("breakdown must have five score buckets")
    pct = breakdown_percentages(report)
    Path(path).write_text(json.dumps(pct) + "\n", encoding="utf-8")
    return pct
