"""Redistricting ensembles (ReCom) and seats-votes fairness screening."""

from .ftv import FtvConfig, FtvResult, Mark, Verdict, breakdown, evaluate, ftv_threshold, percentile_report
from .graph import DualGraph, Plan, Unit, check_population_balance, district_populations, load_graph, load_plan
from .metrics import Standard, disprop, disprop_series, mean_variance, seat_share, target_share, vote_share
from .recom import ChainConfig, make_rng, recom_step, run_chain, seed_plan
from .spanning_tree import balanced_cuts, count_spanning_trees, spanning_tree_score, wilson_ust
from .traintest import SplitConfig, proportionality_score, train_test

__version__ = "0.1.0"
