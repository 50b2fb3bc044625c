"""Seeded generators for distribution lists, matrices and vectors.

Instance ``index`` of a corpus drawn with ``seed`` always uses the generator
``default_rng([seed, index])``, so any single instance can be rebuilt from
its ``(family, seed, index)`` triple without replaying the others.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .combinatorics.stochastic import DoublyStochastic, sinkhorn
from .distributions import DiscreteDistribution
from .errors import ConfigError

DIST_FAMILIES = ("bernoulli", "uniform", "geometric", "mixed")


def instance_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def _bernoulli(rng: np.random.Generator, max_atoms: int, q: float | None) -> DiscreteDistribution:
    qi = float(rng.uniform(0.05, 0.95)) if q is None else float(q)
    if qi >= 1.0:
        return DiscreteDistribution.point(1.0)
    return DiscreteDistribution((1.0, 0.0), (qi, 1.0 - qi))


def _uniform(rng: np.random.Generator, max_atoms: int, q: float | None) -> DiscreteDistribution:
    k = int(rng.integers(1, max_atoms + 1))
    vals = np.round(rng.uniform(-3.0, 3.0, size=k), 6)
    return DiscreteDistribution(tuple(vals.tolist()), (1.0 / k,) * k)


def _geometric(rng: np.random.Generator, max_atoms: int, q: float | None) -> DiscreteDistribution:
    k = int(rng.integers(1, max_atoms + 1))
    rho = float(rng.uniform(0.2, 0.8)) if q is None else float(q)
    w = rho ** np.arange(k)
    scale = float(rng.uniform(0.5, 2.0))
    return DiscreteDistribution(tuple((scale * np.arange(k)).tolist()), tuple((w / w.sum()).tolist()))


def _mixed(rng: np.random.Generator, max_atoms: int, q: float | None) -> DiscreteDistribution:
    k = int(rng.integers(1, max_atoms + 1))
    vals = rng.standard_normal(k) * rng.uniform(0.2, 4.0)
    probs = rng.dirichlet(np.ones(k))
    probs = np.maximum(probs, 1e-3)
    return DiscreteDistribution(tuple(vals.tolist()), tuple((probs / probs.sum()).tolist()))


_GENERATORS: dict[str, Callable[..., DiscreteDistribution]] = {
    "bernoulli": _bernoulli,
    "uniform": _uniform,
    "geometric": _geometric,
    "mixed": _mixed,
}


def family_for(family: str, index: int) -> str:
    """Resolve ``"all"`` to a concrete family by cycling on the instance index."""
    if family == "all":
        return DIST_FAMILIES[index % len(DIST_FAMILIES)]
    if family not in _GENERATORS:
        raise ConfigError(f"unknown distribution family {family!r}; choose from {DIST_FAMILIES + ('all',)}")
    return family


def make_distributions(
    family: str, n: int, seed: int, index: int, max_atoms: int = 4, q: float | None = None
) -> list[DiscreteDistribution]:
    """``n`` independent laws from one named family.

    ``q`` pins the Bernoulli success probability (or the geometric ratio);
    when omitted it is drawn per variable.
    """
    fam = family_for(family, index)
    rng = instance_rng(seed, index)
    return [_GENERATORS[fam](rng, max_atoms, q) for _ in range(n)]


def random_doubly_stochastic(n: int, seed: int, index: int) -> DoublyStochastic:
    """Sinkhorn scaling of a random positive matrix with a random degree of concentration."""
    rng = instance_rng(seed, index)
    power = float(rng.choice([1.0, 2.0, 4.0, 6.0]))
    return sinkhorn(rng.random((n, n)) ** power + 1e-3)


def random_permutation_matrix(n: int, seed: int, index: int) -> DoublyStochastic:
    rng = instance_rng(seed, index)
    return DoublyStochastic.permutation(rng.permutation(n).tolist())


def random_matrix(n: int, seed: int, index: int) -> np.ndarray:
    rng = instance_rng(seed, index)
    kind = index % 3
    if kind == 0:
        return rng.standard_normal((n, n))
    if kind == 1:
        return rng.exponential(size=(n, n)) ** 2
    # a few large entries on a small background
    a = rng.uniform(0, 0.1, size=(n, n))
    a[rng.integers(0, n, size=n), rng.integers(0, n, size=n)] += rng.uniform(1, 5, size=n)
    return a


def random_vector(n: int, seed: int, index: int) -> np.ndarray:
    rng = instance_rng(seed, index)
    x = rng.standard_normal(n) * rng.uniform(0.1, 5.0)
    if index % 4 == 0:
        x[rng.integers(0, n)] *= 10.0
    return x
