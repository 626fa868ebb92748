"""Detecting correlation between two random graphs by counting signed trees."""

from .counting import brute_WH, colorful_probability, decompose, xh_bruteforce, xh_dp
from .graphs import (
    CenteredMatrix,
    CorrelatedPair,
    Graph,
    ParameterError,
    center,
    complement,
    joint_law,
    read_edgelist,
    sample_correlated_pair,
    sample_independent_pair,
    subsampling_params,
    write_edgelist,
)
from .harness import ExperimentConfig, TestRun, roc_auc, run_experiment
from .statistic import StatConfig, StatResult, beta, evaluate, f_exact, f_tilde, g_exact, z_tilde
from .trees import CapacityError, NotATreeError, TreeFamily, UnlabeledTree, enumerate_free_trees

__version__ = "0.1.0"

__all__ = [
    "brute_WH",
    "colorful_probability",
    "decompose",
    "xh_bruteforce",
    "xh_dp",
    "CenteredMatrix",
    "CorrelatedPair",
    "Graph",
    "ParameterError",
    "center",
    "complement",
    "joint_law",
    "read_edgelist",
    "sample_correlated_pair",
    "sample_independent_pair",
    "subsampling_params",
    "write_edgelist",
    "ExperimentConfig",
    "TestRun",
    "roc_auc",
    "run_experiment",
    "StatConfig",
    "StatResult",
    "beta",
    "evaluate",
    "f_exact",
    "f_tilde",
    "g_exact",
    "z_tilde",
    "CapacityError",
    "NotATreeError",
    "TreeFamily",
    "UnlabeledTree",
    "enumerate_free_trees",
]
