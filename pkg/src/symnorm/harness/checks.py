"""Single-instance checks: each builds one :class:`VerificationReport`."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Sequence

import numpy as np
from scipy import optimize

from ..combinatorics import (
    TUPLE_GUARD,
    DoublyStochastic,
    H_distribution,
    birkhoff,
    herz_bound,
    herz_bound_printed,
    level_pmf,
    mc_H_moment,
    tail_bound,
    tail_prob,
    tuple_probabilities,
    tuple_table,
)
from ..distributions import (
    ENUMERATION_GUARD,
    DiscreteDistribution,
    disjoint_profile,
    product_support,
    sample_rows,
    sup_moment,
)
from ..errors import DomainError, ResourceError
from ..montecarlo import mc_moment
from ..norms import NormSpec, eval_norm, eval_rows, rearrange
from .reports import VerificationReport

LOWER_CONSTANT = 1.0 / (2.0 + 4.0 * math.sqrt(2.0))
MAIN_TOL = 1e-9
GEISS_TOL = 1e-9
KS_TOL = 1e-12
HERZ_TOL = 1e-12
PROP21_TOL = 1e-12
PERM_GUARD = 8
CONCRETE_P1 = 2.0 + math.e**4


def growth_factor(p: float) -> float:
    """``(1 + ln p) / p``: multiplying by it normalizes the p/(1+ln p) growth."""
    return (1.0 + math.log(p)) / p


def _log10(x: float) -> float:
    return math.log10(x) if x > 0 else -math.inf


# --- two-sided moment inequality -------------------------------------------------


@dataclass(frozen=True)
class MainInstance:
    """Norm values of ``sum f_i e_i`` on the product support, reusable across ``p``."""

    norms: np.ndarray
    weights: np.ndarray

    @classmethod
    def build(cls, ds: Sequence[DiscreteDistribution], spec: NormSpec, guard: int = ENUMERATION_GUARD) -> "MainInstance":
        vals, wts = product_support(ds, guard)
        return cls(eval_rows(spec, vals), wts)

    def moment(self, p: float) -> float:
        return float(np.sum(self.weights * self.norms**p) ** (1.0 / p))


def surrogate(ds: Sequence[DiscreteDistribution], spec: NormSpec, p: float) -> tuple[float, float]:
    """``(tail_p, ||block averages||_X)``; their sum is the surrogate ``D``."""
    prof = disjoint_profile(ds, p)
    return prof.tail_p, eval_norm(spec, prof.block_avgs)


def tail_constant(values: np.ndarray, weights: np.ndarray) -> float:
    """Smallest ``C >= 1`` with ``P(X > t) <= C exp(-t ln t / C)`` for all ``t``.

    ``P(X > t)`` is a right-continuous step function, so on each step the
    binding ``t`` is the left limit at the next atom.
    """
    order = np.argsort(values, kind="stable")
    x = np.asarray(values, dtype=float)[order]
    w = np.asarray(weights, dtype=float)[order]
    uniq, start = np.unique(x, return_index=True)
    mass = np.add.reduceat(w, start)
    survival = 1.0 - np.concatenate([[0.0], np.cumsum(mass)[:-1]])
    best = 1.0
    for t, s in zip(uniq, survival):
        if t <= 1.0 or s <= 0.0:
            continue
        a = t * math.log(t)
        target = math.log(s)

        def phi(c: float) -> float:
            return math.log(c) - a / c - target

        if phi(best) >= 0:
            continue
        hi = best * 2.0
        while phi(hi) < 0:
            hi *= 2.0
        best = optimize.brentq(phi, best, hi, xtol=1e-12, rtol=1e-12)
    return float(best)


def verify_main(
    ds: Sequence[DiscreteDistribution],
    spec: NormSpec,
    p: float,
    *,
    mode: str = "exact",
    samples: int = 100_000,
    seed: int = 0,
    threads: int = 1,
    descriptor: dict[str, Any] | None = None,
    instance: MainInstance | None = None,
    guard: int = ENUMERATION_GUARD,
) -> VerificationReport:
    """Moment ``M`` of ``||sum f_i e_i||_X`` against the surrogate ``D``.

    Asserts ``M >= D / (2 + 4 sqrt 2) - 1e-9``; in Monte Carlo mode the
    estimate is credited three standard errors. ``R = M / D`` and its
    normalized form are recorded for the growth scan.
    """
    if not p >= 1:
        raise DomainError(f"p must be >= 1, got {p}")
    desc = dict(descriptor or {})
    desc.setdefault("n", len(ds))
    desc.setdefault("norm", spec.label)
    desc["p"] = float(p)
    tail, block = surrogate(ds, spec, p)
    D = tail + block
    constants: dict[str, float] = {}
    if mode == "exact":
        inst = instance if instance is not None else MainInstance.build(ds, spec, guard)
        M, se = inst.moment(p), 0.0
        if D > 0:
            constants["tail_C"] = tail_constant(inst.norms / D, inst.weights)
    elif mode == "mc":

        def draw(rng: np.random.Generator, size: int) -> np.ndarray:
            return eval_rows(spec, sample_rows(ds, rng, size))

        M, se, _ = mc_moment(draw, p, samples, seed, threads=threads)
    else:
        raise DomainError(f"mode must be 'exact' or 'mc', got {mode!r}")
    lower = LOWER_CONSTANT * D
    R = M / D if D > 0 else math.nan
    q = {
        "M": M,
        "M_std_error": se,
        "tail_p": tail,
        "block_norm": block,
        "D": D,
        "lower_bound": lower,
        "R": R,
        "R_normalized": R * growth_factor(p),
    }
    flags = {"lower": M + 3.0 * se >= lower - MAIN_TOL}
    return VerificationReport("main", desc, q, flags, constants)


def verify_geiss(
    ds: Sequence[DiscreteDistribution],
    p: float,
    *,
    descriptor: dict[str, Any] | None = None,
    guard: int = ENUMERATION_GUARD,
) -> VerificationReport:
    """``2^{-1/p} tail_p <= (E sup|f_i|^p)^{1/p} <= 2^{1-1/p} tail_p``."""
    desc = dict(descriptor or {})
    desc.setdefault("n", len(ds))
    desc["p"] = float(p)
    tail = disjoint_profile(ds, p).tail_p
    sup = sup_moment(ds, p, guard)
    lower = 2.0 ** (-1.0 / p) * tail
    upper = 2.0 ** (1.0 - 1.0 / p) * tail
    q = {"tail_p": tail, "sup_moment": sup, "lower_bound": lower, "upper_bound": upper}
    flags = {"lower": lower <= sup + GEISS_TOL, "upper": sup <= upper + GEISS_TOL}
    return VerificationReport("geiss", desc, q, flags)


# --- permutation averages --------------------------------------------------------


@lru_cache(maxsize=PERM_GUARD + 1)
def _permutations(n: int) -> np.ndarray:
    out = np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)
    out.setflags(write=False)
    return out


def ks_average(alpha: Any) -> float:
    """Exact mean over all permutations ``pi`` of ``max_i |alpha[pi(i), i]|``."""
    a = np.abs(np.asarray(alpha, dtype=float))
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DomainError(f"need a non-empty square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > PERM_GUARD:
        raise ResourceError(f"n = {n} exceeds the permutation guard n <= {PERM_GUARD}")
    perms = _permutations(n)
    return float(np.mean(a[perms, np.arange(n)].max(axis=1)))


def ks_bounds(alpha: Any) -> tuple[float, float]:
    """``(avg / 2, avg)`` with ``avg`` the mean of the ``n`` largest entries of ``|alpha|``."""
    a = np.asarray(alpha, dtype=float)
    n = a.shape[0]
    avg = float(np.sum(rearrange(a.ravel())[:n]) / n)
    return 0.5 * avg, avg


def verify_ks(alpha: Any, *, descriptor: dict[str, Any] | None = None) -> VerificationReport:
    desc = dict(descriptor or {})
    desc.setdefault("n", int(np.shape(alpha)[0]))
    value = ks_average(alpha)
    lower, upper = ks_bounds(alpha)
    q = {"average": value, "lower_bound": lower, "upper_bound": upper}
    flags = {"lower": lower <= value + KS_TOL, "upper": value <= upper + KS_TOL}
    return VerificationReport("ks", desc, q, flags)


def kk_average(x: Any, k: int) -> float:
    """Exact mean over permutations of ``max_{i <= n/k} |x_pi(i)|``.

    The first ``floor(n/k)`` positions of a uniform permutation form a
    uniform subset of that size, so the mean runs over subsets.
    """
    v = np.abs(np.asarray(x, dtype=float).ravel())
    n = v.size
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    if n > PERM_GUARD:
        raise ResourceError(f"n = {n} exceeds the permutation guard n <= {PERM_GUARD}")
    m = n // k
    subsets = np.array(list(itertools.combinations(range(n), m)), dtype=np.intp)
    return float(np.mean(v[subsets].max(axis=1)))


def kk_check(x: Any, k: int, *, descriptor: dict[str, Any] | None = None) -> VerificationReport:
    """``(1/4) avg_k <= value <= 2 avg_k`` with ``avg_k`` the mean of the ``k`` largest ``|x_j|``."""
    v = np.asarray(x, dtype=float).ravel()
    desc = dict(descriptor or {})
    desc.setdefault("n", v.size)
    desc["k"] = int(k)
    value = kk_average(v, k)
    avg = float(np.sum(rearrange(v)[:k]) / k)
    q = {"average": value, "top_k_mean": avg, "lower_bound": 0.25 * avg, "upper_bound": 2.0 * avg}
    flags = {"lower": 0.25 * avg <= value + KS_TOL, "upper": value <= 2.0 * avg + KS_TOL}
    return VerificationReport("kk", desc, q, flags)


# --- matrix rearrangement --------------------------------------------------------


def induced_doubly_stochastic(alpha: Any) -> DoublyStochastic:
    """``mu_ik = #{j : alpha_ij in block k} / n`` where block ``k`` holds ranks ``(k-1)n+1 .. kn``.

    Ranks order ``|alpha|`` non-increasingly with ties broken by row-major
    position, so each block has exactly ``n`` entries.
    """
    a = np.abs(np.asarray(alpha, dtype=float))
    n = a.shape[0]
    order = np.argsort(-a.ravel(), kind="stable")
    rank = np.empty(n * n, dtype=np.intp)
    rank[order] = np.arange(n * n)
    counts = np.zeros((n, n))
    rows = np.repeat(np.arange(n), n)
    np.add.at(counts, (rows, rank // n), 1.0)
    return DoublyStochastic(counts / n)


def verify_prop21(
    alpha: Any,
    spec: NormSpec,
    p: float,
    *,
    mode: str = "exact",
    samples: int = 100_000,
    seed: int = 0,
    threads: int = 1,
    descriptor: dict[str, Any] | None = None,
) -> VerificationReport:
    """Uniform-tuple moment of ``||sum_k alpha_{k j_k} e_k||_X`` against ``||(alpha*_{(k-1)n+1})_k||_X``.

    Beside the ratio it records the chain
    ``LHS <= (E_mu ||alpha*_block||^p)^{1/p} <= 2 ||H||_p RHS`` on the
    induced ``mu``; the first link is asserted always, the second only for
    norms (the repetition bound behind it needs the triangle inequality).
    """
    a = np.abs(np.asarray(alpha, dtype=float))
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DomainError(f"need a non-empty square matrix, got shape {a.shape}")
    if not p >= 1:
        raise DomainError(f"p must be >= 1, got {p}")
    n = a.shape[0]
    desc = dict(descriptor or {})
    desc.setdefault("n", n)
    desc.setdefault("norm", spec.label)
    desc["p"] = float(p)
    diag = rearrange(a.ravel())[::n][:n]
    rhs = eval_norm(spec, diag)
    mu = induced_doubly_stochastic(a)
    q: dict[str, float] = {"RHS": rhs}
    flags: dict[str, bool] = {}
    if mode == "exact":
        table = tuple_table(n)
        lhs = float(np.mean(eval_rows(spec, a[np.arange(n), table]) ** p) ** (1.0 / p))
        probs = tuple_probabilities(mu.rows)
        majorant = float(np.sum(probs * eval_rows(spec, diag[table]) ** p) ** (1.0 / p))
        H_moment = _H_moment(mu, p)
        q.update(LHS=lhs, LHS_std_error=0.0, majorant=majorant, H_moment=H_moment)
        flags["majorant"] = lhs <= majorant * (1 + PROP21_TOL)
    elif mode == "mc":

        def draw(rng: np.random.Generator, size: int) -> np.ndarray:
            cols = rng.integers(0, n, size=(size, n))
            return eval_rows(spec, a[np.arange(n), cols])

        lhs, se, _ = mc_moment(draw, p, samples, seed, threads=threads)
        H_moment = _H_moment(mu, p) if n <= TUPLE_GUARD else mc_H_moment(mu, p, samples, seed, threads).estimate
        majorant = math.nan
        q.update(LHS=lhs, LHS_std_error=se, majorant=majorant, H_moment=H_moment)
    else:
        raise DomainError(f"mode must be 'exact' or 'mc', got {mode!r}")
    chain = 2.0 * H_moment * rhs
    ratio = q["LHS"] / rhs if rhs > 0 else math.nan
    q.update(chain_bound=chain, ratio=ratio, ratio_normalized=ratio * growth_factor(p))
    if mode == "exact" and not spec.quasi:
        flags["chain"] = q["majorant"] <= chain * (1 + PROP21_TOL)
    return VerificationReport("matrix_moment", desc, q, flags)


def _H_moment(mu: DoublyStochastic, p: float) -> float:
    vals, probs = H_distribution(mu)
    return float(np.sum(probs * vals**p) ** (1.0 / p))


# --- doubly stochastic corpus checks ---------------------------------------------


def H_moments(mu: DoublyStochastic, p_list: Sequence[float]) -> dict[float, float]:
    """Exact ``||H||_p`` for several ``p`` from one enumeration."""
    vals, probs = H_distribution(mu)
    return {float(p): float(np.sum(probs * vals**p) ** (1.0 / p)) for p in p_list}


def verify_comb(
    mu: DoublyStochastic,
    p_list: Sequence[float],
    *,
    mode: str = "exact",
    samples: int = 100_000,
    seed: int = 0,
    threads: int = 1,
    descriptor: dict[str, Any] | None = None,
) -> VerificationReport:
    """``||H||_p`` and its normalized form per ``p``; asserts the ``p = 1`` concrete estimate."""
    desc = dict(descriptor or {})
    desc.setdefault("n", mu.n)
    q: dict[str, float] = {}
    if mode == "exact":
        moments = H_moments(mu, p_list)
        errors = {p: 0.0 for p in moments}
    elif mode == "mc":
        ests = {float(p): mc_H_moment(mu, p, samples, seed, threads) for p in p_list}
        moments = {p: e.estimate for p, e in ests.items()}
        errors = {p: e.std_error for p, e in ests.items()}
    else:
        raise DomainError(f"mode must be 'exact' or 'mc', got {mode!r}")
    for p, m in moments.items():
        tag = f"{p:g}"
        q[f"H_p{tag}"] = m
        q[f"H_p{tag}_std_error"] = errors[p]
        q[f"H_p{tag}_normalized"] = m * growth_factor(p)
    flags = {}
    if 1.0 in moments:
        q["concrete_p1_bound"] = CONCRETE_P1
        flags["concrete_p1"] = moments[1.0] - 3.0 * errors[1.0] <= CONCRETE_P1
    return VerificationReport("comb", desc, q, flags)


@lru_cache(maxsize=None)
def _herz_pair(n: int, r: int, j: int) -> tuple[float, float]:
    return herz_bound(n, r, j), herz_bound_printed(n, r, j)


def herz_sweep(mu: DoublyStochastic, *, descriptor: dict[str, Any] | None = None) -> VerificationReport:
    """``P_mu(h_r = j) <= bound(n, r, j)`` for all ``1 <= j <= r <= n`` with ``j < n``.

    Stores the pair with the smallest slack; counts how often the
    alternative printed sum would have been violated (not asserted).
    """
    n = mu.n
    desc = dict(descriptor or {})
    desc.setdefault("n", n)
    worst = (math.inf, 0.0, 0.0, 0, 0)
    printed_violations = 0
    checked = 0
    for r in range(1, n + 1):
        pmf = level_pmf(mu, r)
        for j in range(1, r + 1):
            if j == n:
                continue
            prob = float(pmf[j])
            bound, printed = _herz_pair(n, r, j)
            checked += 1
            if bound - prob < worst[0]:
                worst = (bound - prob, prob, bound, r, j)
            if prob > printed + HERZ_TOL:
                printed_violations += 1
    q = {
        "pairs_checked": float(checked),
        "worst_r": float(worst[3]),
        "worst_j": float(worst[4]),
        "prob": worst[1],
        "log10_prob": _log10(worst[1]),
        "bound": worst[2],
        "log10_bound": _log10(worst[2]),
        "slack": worst[0],
    }
    constants = {"printed_sum_violations": float(printed_violations)}
    flags = {"dominance": worst[1] <= worst[2] + HERZ_TOL} if checked else {}
    return VerificationReport("herz", desc, q, flags, constants)


def tails_check(
    mu: DoublyStochastic, t_list: Sequence[float], *, descriptor: dict[str, Any] | None = None
) -> VerificationReport:
    """``P_mu(h_r >= t r) <= 2 (e^3/t)^{t r}`` for every ``r < n`` and each ``t``."""
    n = mu.n
    desc = dict(descriptor or {})
    desc.setdefault("n", n)
    q: dict[str, float] = {}
    flags: dict[str, bool] = {}
    for t in t_list:
        tag = f"{t:.6g}"
        worst = (-math.inf, 0.0, 0.0, 0)
        for r in range(1, n):
            prob, bound = tail_prob(mu, r, t), tail_bound(r, t, n)
            # compare in log space: bounds underflow long before probabilities vanish
            gap = _log10(prob) - _log10(bound) if prob > 0 else -math.inf
            if r == 1 or gap > worst[0]:
                worst = (gap, prob, bound, r)
        q[f"t{tag}_r"] = float(worst[3])
        q[f"t{tag}_prob"] = worst[1]
        q[f"t{tag}_log10_prob"] = _log10(worst[1])
        q[f"t{tag}_bound"] = worst[2]
        q[f"t{tag}_log10_bound"] = _log10(worst[2])
        if n > 1:
            flags[f"t{tag}"] = worst[1] <= worst[2]
    return VerificationReport("tails", desc, q, flags)


BIRKHOFF_TOL = 1e-10


def birkhoff_check(mu: DoublyStochastic, *, descriptor: dict[str, Any] | None = None) -> VerificationReport:
    """Reconstruction error, term count and weight sum of the greedy decomposition."""
    n = mu.n
    desc = dict(descriptor or {})
    desc.setdefault("n", n)
    dec = birkhoff(mu)
    err = float(np.max(np.abs(dec.reconstruct() - mu.entries)))
    terms = len(dec.terms)
    wsum = float(math.fsum(dec.weights))
    q = {
        "terms": float(terms),
        "max_terms": float((n - 1) ** 2 + 1),
        "reconstruction_error": err,
        "weight_sum": wsum,
    }
    flags = {
        "reconstruction": err <= BIRKHOFF_TOL,
        "term_count": terms <= (n - 1) ** 2 + 1,
        "weight_sum": abs(wsum - 1.0) <= BIRKHOFF_TOL,
    }
    return VerificationReport("birkhoff", desc, q, flags)


def trend_bounded(seq: Sequence[float], factor: float = 1.2) -> bool:
    """Last entry at most ``factor`` times the largest earlier entry."""
    if len(seq) < 2:
        return True
    return seq[-1] <= factor * max(seq[:-1])
