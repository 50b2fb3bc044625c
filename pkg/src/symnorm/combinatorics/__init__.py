"""Doubly stochastic matrices, level statistics and the tail integrals."""

from .integrals import CalcResult, Cc1Result, integral_calc, integral_cc1
from .levels import (
    TUPLE_GUARD,
    LevelStatistic,
    H_distribution,
    binom_moment,
    exact_H_moment,
    herz_bound,
    herz_bound_printed,
    level_pmf,
    level_prob_exact,
    level_stat,
    mc_H_moment,
    poisson_binomial,
    tail_bound,
    tail_prob,
    tuple_probabilities,
    tuple_table,
)
from .stochastic import BirkhoffDecomposition, DoublyStochastic, birkhoff, perfect_matching, sinkhorn

__all__ = [
    "TUPLE_GUARD",
    "BirkhoffDecomposition",
    "CalcResult",
    "Cc1Result",
    "DoublyStochastic",
    "H_distribution",
    "LevelStatistic",
    "binom_moment",
    "birkhoff",
    "exact_H_moment",
    "herz_bound",
    "herz_bound_printed",
    "integral_calc",
    "integral_cc1",
    "level_pmf",
    "level_prob_exact",
    "level_stat",
    "mc_H_moment",
    "perfect_matching",
    "poisson_binomial",
    "sinkhorn",
    "tail_bound",
    "tail_prob",
    "tuple_probabilities",
    "tuple_table",
]
