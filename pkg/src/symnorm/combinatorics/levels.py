"""Level counts ``h_r`` under the product measure ``P_mu`` and their bounds.

For ``j = (j_1..j_n)`` drawn with ``j_k`` from row ``k`` of a doubly
stochastic ``mu``, ``h_r`` counts coordinates with ``j_k <= r`` and
``H = max_r h_r / r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

from ..errors import DomainError, ResourceError
from ..montecarlo import MomentEstimate, mc_moment
from .stochastic import DoublyStochastic

TUPLE_GUARD = 7


@dataclass(frozen=True)
class LevelStatistic:
    j: tuple[int, ...]
    h: tuple[int, ...]
    H: float


def level_stat(j: Sequence[int]) -> LevelStatistic:
    """``h_r`` for ``r = 1..n`` and ``H`` for a tuple with entries in ``1..n``."""
    n = len(j)
    if n == 0:
        raise DomainError("empty tuple")
    if any(int(v) != v or not 1 <= v <= n for v in j):
        raise DomainError(f"tuple entries must lie in 1..{n}: {tuple(j)}")
    counts = np.bincount(np.asarray(j, dtype=int) - 1, minlength=n)
    h = np.cumsum(counts)
    H = float(np.max(h / np.arange(1, n + 1)))
    return LevelStatistic(tuple(int(v) for v in j), tuple(int(v) for v in h), H)


def _H_of_columns(cols: np.ndarray, n: int) -> np.ndarray:
    """``H`` for each row of a ``(T, n)`` array of 0-based column indices."""
    counts = np.zeros((cols.shape[0], n))
    rows = np.arange(cols.shape[0])
    for k in range(cols.shape[1]):
        counts[rows, cols[:, k]] += 1.0  # one hit per row, so fancy indexing is safe
    h = np.cumsum(counts, axis=1)
    return np.max(h / np.arange(1, n + 1), axis=1)


@lru_cache(maxsize=8)
def tuple_table(n: int) -> np.ndarray:
    """All ``n**n`` tuples as 0-based column indices, lexicographic order."""
    if n > TUPLE_GUARD:
        raise ResourceError(f"n = {n} exceeds the enumeration guard n <= {TUPLE_GUARD}; use Monte Carlo")
    table = np.indices([n] * n, dtype=np.int8).reshape(n, -1).T.copy()
    table.setflags(write=False)
    return table


def _canonical_rows(ds: DoublyStochastic) -> np.ndarray:
    # H is invariant under relabeling coordinates; a fixed row order makes results bit-identical too
    rows = ds.rows
    order = np.lexsort(rows.T[::-1])
    return rows[order]


def tuple_probabilities(rows: np.ndarray) -> np.ndarray:
    """``P_mu`` of every tuple in :func:`tuple_table` order."""
    n = rows.shape[0]
    table = tuple_table(n)
    prob = np.ones(table.shape[0])
    for k in range(n):
        prob *= rows[k, table[:, k]]
    return prob


@lru_cache(maxsize=8)
def _table_H(n: int) -> np.ndarray:
    out = _H_of_columns(tuple_table(n).astype(np.intp), n)
    out.setflags(write=False)
    return out


def H_distribution(ds: DoublyStochastic) -> tuple[np.ndarray, np.ndarray]:
    """Exact law of ``H``: distinct values and their probabilities."""
    prob = tuple_probabilities(_canonical_rows(ds))
    H = _table_H(ds.n)
    vals, inv = np.unique(H, return_inverse=True)
    return vals, np.bincount(inv, weights=prob, minlength=vals.size)


def exact_H_moment(ds: DoublyStochastic, p: float) -> float:
    """``(sum_j H(j)^p P_mu(j))^{1/p}`` over all ``n**n`` tuples (``n <= 7``)."""
    if not p >= 1:
        raise DomainError(f"p must be >= 1, got {p}")
    vals, probs = H_distribution(ds)
    return float(np.sum(probs * vals**p) ** (1.0 / p))


def sample_H(ds: DoublyStochastic):
    """Sampler ``(rng, size) -> H values`` for :func:`symnorm.montecarlo.mc_moment`."""
    rows = ds.rows
    n = ds.n
    cdf = np.cumsum(rows, axis=1)
    cdf[:, -1] = 1.0

    def draw(rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random((size, n))
        cols = np.empty((size, n), dtype=np.intp)
        for k in range(n):
            cols[:, k] = np.minimum(np.searchsorted(cdf[k], u[:, k], side="right"), n - 1)
        return _H_of_columns(cols, n)

    return draw


def mc_H_moment(ds: DoublyStochastic, p: float, samples: int, seed: int, threads: int = 1) -> MomentEstimate:
    """Monte Carlo ``(E H^p)^{1/p}`` with a delta-method standard error."""
    return mc_moment(sample_H(ds), p, samples, seed, threads=threads)


def level_pmf(ds: DoublyStochastic, r: int) -> np.ndarray:
    """Law of ``h_r`` (length ``n + 1``): a Poisson-binomial with ``q_i = sum_{s<=r} mu_is``."""
    n = ds.n
    if not 1 <= r <= n:
        raise DomainError(f"r must lie in 1..{n}, got {r}")
    q = np.clip(ds.rows[:, :r].sum(axis=1), 0.0, 1.0)
    return poisson_binomial(q)


def poisson_binomial(q: np.ndarray) -> np.ndarray:
    pmf = np.zeros(q.size + 1)
    pmf[0] = 1.0
    for i, qi in enumerate(q):
        pmf[1 : i + 2] = pmf[1 : i + 2] * (1 - qi) + pmf[: i + 1] * qi
        pmf[0] *= 1 - qi
    return pmf


def level_prob_exact(ds: DoublyStochastic, r: int, j: int) -> float:
    if not 0 <= j <= ds.n:
        raise DomainError(f"j must lie in 0..{ds.n}, got {j}")
    return float(level_pmf(ds, r)[j])


def _check_herz_args(n: int, r: int, j: int) -> None:
    if not (1 <= j <= r <= n):
        raise DomainError(f"need 1 <= j <= r <= n, got n={n}, r={r}, j={j}")
    if j == n and r != n:
        raise DomainError("j = n requires r = n")


def herz_bound(n: int, r: int, j: int) -> float:
    """Upper bound on ``P_mu(h_r = j)`` valid for every doubly stochastic ``mu``.

    It is the value at the identity matrix of the convex majorant
    ``sum_{|B|=j} (L_B/j)^j ((n-r-j+L_B)/(n-j))^{n-j}``, grouped by
    ``k = |B cap {1..r}|``::

        sum_k C(r,k) C(n-r,j-k) (k/j)^j ((n-r-j+k)/(n-j))^(n-j)

    over ``max(0, j-(n-r)) <= k <= min(r, j)``. For ``j = r = n`` the value is 1.
    """
    _check_herz_args(n, r, j)
    if j == n:
        return 1.0
    logs = []
    for k in range(max(0, j - (n - r)), min(r, j) + 1):
        rest = n - r - j + k
        if k == 0 or rest == 0:
            continue  # (0/j)^j = 0 and 0^(n-j) = 0 since j >= 1 and n - j >= 1
        logs.append(
            _log_comb(r, k) + _log_comb(n - r, j - k) + j * math.log(k / j) + (n - j) * math.log(rest / (n - j))
        )
    return float(math.exp(logsumexp(logs))) if logs else 0.0


def herz_bound_printed(n: int, r: int, j: int) -> float:
    """The same sum with ``(j-k)/(n-j)`` and ``C(n-j, j-k)`` in place of the majorant's factors.

    Kept for comparison only: it is not an upper bound (at the identity
    matrix with ``n = 4, r = j = 2`` it gives 0.25 while the probability is 1).
    """
    _check_herz_args(n, r, j)
    if j == n:
        return 1.0
    total = 0.0
    for k in range(0, min(r, j) + 1):
        if n - j < j - k or k == 0 or k == j:
            continue
        total += math.comb(r, k) * math.comb(n - j, j - k) * (k / j) ** j * ((j - k) / (n - j)) ** (n - j)
    return total


def _log_comb(a: int, b: int) -> float:
    return float(gammaln(a + 1) - gammaln(b + 1) - gammaln(a - b + 1))


def tail_prob(ds: DoublyStochastic, r: int, t: float) -> float:
    """Exact ``P_mu(h_r >= t r)``."""
    pmf = level_pmf(ds, r)
    start = max(0, math.ceil(t * r - 1e-12))
    return float(pmf[start:].sum()) if start <= ds.n else 0.0


def tail_bound(r: int, t: float, n: int | None = None) -> float:
    """``2 (e^3/t)^{t r}``, valid for ``t >= e^2`` and ``r < n``."""
    if t < math.e**2:
        raise DomainError(f"tail bound needs t >= e^2, got {t}")
    if r < 1 or (n is not None and r >= n):
        raise DomainError(f"tail bound needs 1 <= r < n, got r={r}, n={n}")
    return 2.0 * math.exp(t * r * (3.0 - math.log(t)))


def binom_moment(n: int, p: float) -> float:
    """``(E[B^p])^{1/p}`` for ``B ~ Binomial(n, 1/n)``, summed in the log domain."""
    if n < 1 or not p >= 1:
        raise DomainError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
    if n == 1:
        return 1.0
    k = np.arange(1, n + 1)
    log_pmf = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1) + k * math.log(1.0 / n) + (n - k) * math.log1p(-1.0 / n)
    return float(math.exp(logsumexp(log_pmf + p * np.log(k)) / p))
