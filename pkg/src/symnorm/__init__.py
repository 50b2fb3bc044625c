"""Symmetric norms, rearrangements and doubly stochastic matrices, with numerical checks
of two-sided moment inequalities for sums of independent random variables."""

from .combinatorics import (
    BirkhoffDecomposition,
    DoublyStochastic,
    binom_moment,
    birkhoff,
    exact_H_moment,
    herz_bound,
    integral_calc,
    integral_cc1,
    level_pmf,
    level_prob_exact,
    level_stat,
    mc_H_moment,
    sinkhorn,
    tail_bound,
    tail_prob,
)
from .distributions import DiscreteDistribution, disjoint_profile, split_three_parts, sup_moment
from .errors import ConfigError, ConvergenceError, DomainError, NumericError, ResourceError, SymnormError
from .norms import NormSpec, RepetitionProfile, abel_pairing, eval_norm, expand_repetition, hardy_transform, rearrange, repetition_factor

__version__ = "0.1.0"

__all__ = [
    "BirkhoffDecomposition",
    "ConfigError",
    "ConvergenceError",
    "DiscreteDistribution",
    "DomainError",
    "DoublyStochastic",
    "NormSpec",
    "NumericError",
    "RepetitionProfile",
    "ResourceError",
    "SymnormError",
    "abel_pairing",
    "binom_moment",
    "birkhoff",
    "disjoint_profile",
    "eval_norm",
    "exact_H_moment",
    "expand_repetition",
    "hardy_transform",
    "herz_bound",
    "integral_calc",
    "integral_cc1",
    "level_pmf",
    "level_prob_exact",
    "level_stat",
    "mc_H_moment",
    "rearrange",
    "repetition_factor",
    "sinkhorn",
    "split_three_parts",
    "sup_moment",
    "tail_bound",
    "tail_prob",
]
