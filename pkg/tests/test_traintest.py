from fractions import Fraction as F

import pytest

from ftvtest import errors
from ftvtest.graph import Plan
from ftvtest.traintest import (
    ConditionalHistogram,
    SplitConfig,
    proportionality_score,
    train_test,
    train_test_from_scores,
)
from helpers import load_reference_table, path_graph, table_graph

# Hand-built tallies for the 4-unit path; A = (0,0,1,1), B = (0,1,1,1).
# B_ONLY is near-proportional for B but not A, BOTH for both plans.
B_ONLY = ((5, 3), (4, 6), (1, 5), (6, 5))
BOTH = ((3, 6), (3, 3), (5, 3), (6, 1))
ELECTIONS = {"E1": B_ONLY, "E2": B_ONLY, "L1": BOTH, "L2": B_ONLY, "L3": B_ONLY}
A, B = Plan((0, 0, 1, 1), 2), Plan((0, 1, 1, 1), 2)


def hand_graph():
    ids = list("abcd")
    return path_graph(ids, votes={u: {e: t[i] for e, t in ELECTIONS.items()} for i, u in enumerate(ids)})


def oracle_near(plan, tallies, t=F(7, 100)):
    seats = 0
    for d in range(plan.k):
        r = sum(x[0] for x, a in zip(tallies, plan.assignment) if a == d)
        dem = sum(x[1] for x, a in zip(tallies, plan.assignment) if a == d)
        seats += r > dem
    v = F(sum(x[0] for x in tallies), sum(x[0] + x[1] for x in tallies))
    return abs(F(seats, plan.k) - v) < t


def test_oracle_agrees_with_construction():
    assert [oracle_near(A, ELECTIONS[e]) for e in ("E1", "E2")] == [False, False]
    assert [oracle_near(B, ELECTIONS[e]) for e in ("E1", "E2")] == [True, True]
    assert sum(oracle_near(A, ELECTIONS[e]) for e in ("L1", "L2", "L3")) == 1
    assert sum(oracle_near(B, ELECTIONS[e]) for e in ("L1", "L2", "L3")) == 3


def test_two_plan_buckets():
    res = train_test([A, B], hand_graph(), SplitConfig(["E1", "E2"], ["L1", "L2", "L3"]))
    assert res.training_hist == (1, 0, 1)
    b0, b1, b2 = res.buckets
    assert b0.test_counts == (0, 1, 0, 0) and b0.mean_test == 1
    assert b1.test_counts == (0, 0, 0, 0) and b1.mean_test is None
    assert b2.test_counts == (0, 0, 0, 1) and b2.mean_test == 3


def test_identical_plans_point_mass():
    res = train_test([B] * 5, hand_graph(), SplitConfig(["E1", "E2"], ["L1", "L2", "L3"]))
    assert res.training_hist == (0, 0, 5)
    assert res.buckets[2].test_counts == (0, 0, 0, 5)


def test_proportionality_score_examples():
    g = hand_graph()
    assert proportionality_score(g, B, list(ELECTIONS), F(7, 100)) == 5
    t = load_reference_table()
    names = ["Pres12", "Sen14", "Pres16", "Sen16"]
    idx = [t["elections"].index(e) for e in names]
    v = [F(str(t["v_unrounded"][i])) for i in idx]
    seats = [t["plans"]["Leg12"]["seats"][i] for i in idx]
    tg, plan = table_graph(names, v, seats, 13)
    assert proportionality_score(tg, plan, names, "0.07") == 0


def test_strict_threshold_count():
    # disprops .05, -.08 and .069 against t = .07 give 2.
    names = ["x", "y", "z"]
    v = [F(1, 2) - F(5, 100), F(1, 2) + F(8, 100), F(1, 2) - F(69, 1000)]
    g, plan = table_graph(names, v, [1, 1, 1], 2)
    assert proportionality_score(g, plan, names, F(7, 100)) == 2
    # exactly t away is not near
    g2, plan2 = table_graph(["w"], [F(43, 100)], [1], 2)
    assert proportionality_score(g2, plan2, ["w"], F(7, 100)) == 0


def test_split_config_invariants():
    with pytest.raises(ValueError):
        SplitConfig([], ["a"])
    with pytest.raises(ValueError):
        SplitConfig(["a", "b"], ["b"])
    with pytest.raises(ValueError):
        SplitConfig(["a"], ["b"], t=0)
    assert SplitConfig(["a"], ["a"], require_disjoint=False).later_ids == ("a",)
    assert SplitConfig(["a"], ["b"]).t == F(7, 100)
    assert SplitConfig(["a"], ["b"], t="ftv").threshold_for(13) == F(1, 13)


def test_from_scores():
    res = train_test_from_scores([(0, 1), (0, 0), (2, 2), (0, 1)], 2, 2)
    assert res.training_hist == (3, 0, 1)
    assert res.buckets[0].mean_test == F(2, 3)
    with pytest.raises(errors.EmptyEnsembleError):
        train_test_from_scores([], 2, 2)


def test_to_dict_shape():
    d = train_test([A, B], hand_graph(), SplitConfig(["E1", "E2"], ["L1", "L2", "L3"])).to_dict()
    assert d == {
        "training_hist": [1, 0, 1],
        "buckets": [
            {"s": 0, "test_hist": [0, 1, 0, 0], "mean": 1.0},
            {"s": 1, "test_hist": [0, 0, 0, 0], "mean": None},
            {"s": 2, "test_hist": [0, 0, 0, 1], "mean": 3.0},
        ],
    }


def test_histogram_mean():
    assert ConditionalHistogram(0, (2, 1, 1)).mean_test == F(3, 4)
