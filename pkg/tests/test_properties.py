"""Invariants beyond the acceptance properties."""

import random
from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from ftvtest import errors
from ftvtest.ftv import FtvConfig, breakdown_from_scores, evaluate
from ftvtest.graph import district_populations, validate_plan
from ftvtest.metrics import (
    Standard,
    deviation_from_target,
    disprop,
    disprop_series,
    district_winners,
    mean_variance,
    seat_share,
)
from ftvtest.recom import ChainConfig, recom_step
from ftvtest.report import breakdown_percentages, fixed
from ftvtest.traintest import SplitConfig, train_test
from helpers import grow_plan
from strategies import ELECTIONS, graph_and_plan, relabel

N = 200
shares = st.fractions(min_value=0, max_value=1)
small_fracs = st.fractions(min_value=-1, max_value=1, max_denominator=1000)


@settings(max_examples=N, deadline=None)
@given(st.lists(small_fracs, min_size=1, max_size=12), small_fracs)
def test_variance_shift_invariant(series, c):
    base = mean_variance(series)
    shifted = mean_variance([x + c for x in series])
    assert shifted.variance == base.variance
    assert shifted.mean == base.mean + c
    assert base.variance >= 0


@settings(max_examples=N, deadline=None)
@given(shares, shares)
def test_proportional_deviation_is_disprop(S, V):
    assert deviation_from_target(S, Standard.proportional(), V) == disprop(S, V)


@settings(max_examples=N, deadline=None)
@given(graph_and_plan(), st.randoms(use_true_random=False))
def test_relabel_invariance(gp, rnd):
    g, plan = gp
    perm = list(range(plan.k))
    rnd.shuffle(perm)
    cfg = FtvConfig(ELECTIONS)
    assert evaluate(g, plan, cfg).marks == evaluate(g, relabel(plan, perm), cfg).marks


@settings(max_examples=N, deadline=None)
@given(graph_and_plan())
def test_seat_share_on_lattice(gp):
    g, plan = gp
    for e in ELECTIONS:
        s = seat_share(district_winners(g, plan, e))
        assert (s * plan.k).denominator == 1 and 0 <= s <= 1
    for d in disprop_series(g, plan, ELECTIONS):
        assert -1 <= d <= 1


@settings(max_examples=N, deadline=None)
@given(graph_and_plan())
def test_verdict_iff_at_most_one_miss(gp):
    g, plan = gp
    res = evaluate(g, plan, FtvConfig(ELECTIONS))
    misses = sum(1 for m in res.marks if m.value != "✓")
    assert (res.verdict.value == "PASS") == (misses <= 1)


@settings(max_examples=N, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=500))
def test_percentages_sum(scores):
    pct = breakdown_percentages(breakdown_from_scores(scores))
    assert abs(sum(pct) - 100.0) <= 0.2 + 1e-9
    report = breakdown_from_scores(scores)
    assert sum(report.shares) == 1 and report.total == len(scores)


@settings(max_examples=N, deadline=None)
@given(st.fractions(min_value=-10, max_value=10), st.integers(0, 6))
def test_fixed_reparses_within_precision(x, places):
    assert abs(F(fixed(x, places)) - x) <= F(1, 2 * 10**places)


@settings(max_examples=N, deadline=None)
@given(graph_and_plan(min_units=4, max_k=3), st.integers(1, 6), st.randoms(use_true_random=False))
def test_traintest_buckets(gp, copies, rnd):
    g, plan = gp
    plans = [grow_plan(g, plan.k, random.Random(rnd.random())) for _ in range(copies)]
    split = SplitConfig(ELECTIONS[:2], ELECTIONS[2:])
    res = train_test(plans, g, split)
    assert sum(res.training_hist) == len(plans)
    assert [b.size for b in res.buckets] == list(res.training_hist)
    for b in res.buckets:
        assert b.mean_test is None or 0 <= b.mean_test <= 2
    shuffled = plans[:]
    rnd.shuffle(shuffled)
    assert train_test(shuffled, g, split) == res


@settings(max_examples=100, deadline=None)
@given(graph_and_plan(min_units=4, max_k=3), st.integers(0, 2**32))
def test_recom_step_preserves_invariants(gp, seed):
    g, plan = gp
    pops = district_populations(g, plan)
    ideal = F(g.total_population, plan.k)
    eps = max(abs(p - ideal) / ideal for p in pops)  # tolerance at which the start is valid
    cfg = ChainConfig(k=plan.k, steps=1, epsilon=eps, max_retries_per_step=50)
    try:
        nxt = recom_step(g, plan, cfg, random.Random(seed))
    except errors.StepFailedError:
        return  # a hard geography may exhaust the small budget
    validate_plan(g, nxt, eps)
    moved = [i for i in range(len(g)) if plan.assignment[i] != nxt.assignment[i]]
    changed = {plan.assignment[i] for i in moved} | {nxt.assignment[i] for i in moved}
    assert len(changed) in (0, 2)
