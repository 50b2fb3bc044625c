"""Seeded corpora run through the single-instance checks.

Every instance is rebuilt from its ``(family, seed, index)`` descriptor, so
any row of a report can be replayed alone. Instances run on a thread pool;
reports are sorted by descriptor before they leave this module.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence, TypeVar

import numpy as np

from ..combinatorics import (
    TUPLE_GUARD,
    DoublyStochastic,
    binom_moment,
    integral_calc,
    integral_cc1,
)
from ..corpus import (
    family_for,
    make_distributions,
    random_doubly_stochastic,
    random_matrix,
    random_vector,
)
from ..norms import NormSpec
from .checks import (
    LOWER_CONSTANT,
    MainInstance,
    birkhoff_check,
    growth_factor,
    herz_sweep,
    kk_check,
    tails_check,
    trend_bounded,
    verify_comb,
    verify_geiss,
    verify_ks,
    verify_main,
    verify_prop21,
)
from .reports import VerificationReport

T = TypeVar("T")

DEFAULT_SPECS: tuple[NormSpec, ...] = (
    NormSpec.lp(1.0),
    NormSpec.lp(2.0),
    NormSpec.sup(),
    NormSpec.weak_lp(1.0),
    NormSpec.k_functional(2),
)
MAIN_P = (1.0, 2.0, 4.0, 8.0)
GROWTH_P = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0)
TAIL_T = (math.e**2, 10.0, 20.0)
INTEGRAL_A = (4.0, 8.0, 16.0, 32.0)
CALC_GRID = tuple(
    itertools.product((0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0), (1.0,), (math.e, 2 * math.e, 4 * math.e), (0.5, 1.0, 2.0))
)
WITNESS_P = (8.0, 16.0, 32.0)
INTEGRAL_REL_TOL = 1e-8


@dataclass
class CampaignResult:
    command: str
    reports: list[VerificationReport]
    tables: dict[str, list[dict[str, Any]]] = field(default_factory=dict)
    constants: dict[str, float] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.reports = sorted(self.reports, key=VerificationReport.sort_key)

    @property
    def failures(self) -> list[str]:
        out = [f"{r.describe()}: {', '.join(r.failures)}" for r in self.reports if not r.passed]
        out += [f"campaign check {name}" for name, ok in self.checks.items() if not ok]
        return out

    @property
    def passed(self) -> bool:
        return not self.failures


def _pmap(fn: Callable[[int], T], items: Iterable[int], threads: int) -> list[T]:
    items = list(items)
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def _flatten(parts: Iterable[list[T]]) -> list[T]:
    return [x for part in parts for x in part]


def _cycle_n(n: int | None, index: int, lo: int, hi: int) -> int:
    return n if n is not None else lo + index % (hi - lo + 1)


def _growth_rows(reports: Sequence[VerificationReport], key: str, p_list: Sequence[float], label: str) -> list[dict[str, Any]]:
    rows = []
    for p in p_list:
        vals = [(r.quantities[key], r.describe()) for r in reports if r.descriptor["p"] == p and not math.isnan(r.quantities[key])]
        if not vals:
            continue
        best, where = max(vals, key=lambda v: v[0])
        rows.append({"p": p, f"{label}_max": best / growth_factor(p), f"{label}_normalized": best, "argmax": where})
    return rows


def _convergence_rows(reports: Sequence[VerificationReport], key: str, count: int) -> list[dict[str, Any]]:
    """Running maximum of ``key`` over growing prefixes of the corpus."""
    rows = []
    for size in sorted({max(1, count // 4), max(1, count // 2), count}):
        vals = [r.quantities[key] for r in reports if r.descriptor["index"] < size and not math.isnan(r.quantities[key])]
        if vals:
            rows.append({"corpus_size": size, f"max_{key}": max(vals)})
    return rows


# --- distribution corpora --------------------------------------------------------


def main_campaign(
    *,
    seed: int,
    count: int,
    n: int | None = None,
    p_list: Sequence[float] = MAIN_P,
    specs: Sequence[NormSpec] = DEFAULT_SPECS,
    family: str = "all",
    mode: str = "exact",
    samples: int = 100_000,
    threads: int = 1,
) -> CampaignResult:
    """Two-sided moment check over ``count`` distribution lists with ``n`` in 2..5 unless pinned."""

    def run(index: int) -> list[VerificationReport]:
        n_i = _cycle_n(n, index, 2, 5)
        ds = make_distributions(family, n_i, seed, index)
        out = []
        for s_idx, spec in enumerate(specs):
            inst = MainInstance.build(ds, spec) if mode == "exact" else None
            for p_idx, p in enumerate(p_list):
                desc = {"family": family_for(family, index), "seed": seed, "index": index, "n": n_i, "norm": spec.label}
                out.append(
                    verify_main(
                        ds, spec, p, mode=mode, samples=samples, seed=_mc_seed(seed, index, s_idx, p_idx),
                        descriptor=desc, instance=inst,
                    )
                )
        return out

    reports = _flatten(_pmap(run, range(count), threads))
    result = CampaignResult("verify-main", reports)
    _main_summaries(result, reports, specs, p_list, count)
    return result


def _mc_seed(seed: int, *parts: int) -> int:
    # distinct, reproducible stream per (instance, spec, p)
    return int(np.random.SeedSequence([int(seed), *parts]).generate_state(1, np.uint64)[0])


def _main_summaries(
    result: CampaignResult, reports: Sequence[VerificationReport], specs: Sequence[NormSpec], p_list: Sequence[float], count: int
) -> None:
    for spec in specs:
        mine = [r for r in reports if r.descriptor["norm"] == spec.label]
        rows = _growth_rows(mine, "R_normalized", p_list, "R")
        result.tables[f"growth {spec.label}"] = rows
        result.checks[f"trend {spec.label}"] = trend_bounded([row["R_normalized"] for row in rows])
        if rows:
            result.constants[f"upper_normalized {spec.label}"] = max(row["R_normalized"] for row in rows)
        ratios = [r.quantities["R"] for r in mine if not math.isnan(r.quantities["R"])]
        if ratios:
            result.constants[f"min_R {spec.label}"] = min(ratios)
        tails = [r.constants["tail_C"] for r in mine if "tail_C" in r.constants]
        if tails:
            result.constants[f"tail_C {spec.label}"] = max(tails)
        result.tables[f"convergence {spec.label}"] = _convergence_rows(mine, "R_normalized", count)
    result.constants["lower_constant"] = LOWER_CONSTANT


def geiss_campaign(
    *,
    seed: int,
    count: int,
    n: int | None = None,
    p_list: Sequence[float] = MAIN_P,
    family: str = "all",
    threads: int = 1,
) -> CampaignResult:
    def run(index: int) -> list[VerificationReport]:
        n_i = _cycle_n(n, index, 2, 5)
        ds = make_distributions(family, n_i, seed, index)
        desc = {"family": family_for(family, index), "seed": seed, "index": index, "n": n_i}
        return [verify_geiss(ds, p, descriptor=dict(desc)) for p in p_list]

    reports = _flatten(_pmap(run, range(count), threads))
    result = CampaignResult("verify-geiss", reports)
    for p in p_list:
        mine = [r for r in reports if r.descriptor["p"] == p]
        if mine:
            result.constants[f"max sup/tail p={p:g}"] = max(r.quantities["sup_moment"] / r.quantities["tail_p"] for r in mine)
            result.constants[f"min sup/tail p={p:g}"] = min(r.quantities["sup_moment"] / r.quantities["tail_p"] for r in mine)
    return result


def growth_campaign(
    *,
    seed: int,
    count: int,
    n: int | None = None,
    p_list: Sequence[float] = GROWTH_P,
    spec: NormSpec = NormSpec.lp(1.0),
    family: str = "all",
    mode: str = "exact",
    samples: int = 100_000,
    threads: int = 1,
) -> CampaignResult:
    """Growth scan of the normalized ratio plus the binomial witness sequence."""
    result = main_campaign(
        seed=seed, count=count, n=n, p_list=p_list, specs=(spec,), family=family, mode=mode, samples=samples, threads=threads
    )
    result.command = "growth"
    witness = witness_table(WITNESS_P)
    result.tables["binomial witness"] = witness
    vals = [row["normalized"] for row in witness]
    result.constants["witness_min_normalized"] = min(vals)
    result.constants["witness_decay"] = 1.0 - vals[-1] / vals[0]
    return result


def witness_table(p_list: Sequence[float]) -> list[dict[str, Any]]:
    """``binom_moment(10 p, p)`` and its normalized value per ``p``."""
    rows = []
    for p in p_list:
        m = binom_moment(int(10 * p), p)
        rows.append({"p": float(p), "n": int(10 * p), "moment": m, "normalized": m * growth_factor(p)})
    return rows


# --- matrices and vectors --------------------------------------------------------


def ks_campaign(*, seed: int, count: int, n: int | None = None, threads: int = 1) -> CampaignResult:
    """Permutation averages on ``count`` matrices and ``count`` vectors, ``n`` in 2..6 unless pinned."""

    def run(index: int) -> list[VerificationReport]:
        n_i = _cycle_n(n, index, 2, 6)
        desc = {"seed": seed, "index": index, "n": n_i}
        out = [verify_ks(random_matrix(n_i, seed, index), descriptor=dict(desc))]
        x = random_vector(n_i, seed, index)
        out += [kk_check(x, k, descriptor=dict(desc)) for k in range(1, n_i + 1)]
        return out

    reports = _flatten(_pmap(run, range(count), threads))
    result = CampaignResult("verify-ks", reports)
    ks = [r for r in reports if r.kind == "ks"]
    kk = [r for r in reports if r.kind == "kk"]
    if ks:
        result.constants["ks min average/upper"] = min(r.quantities["average"] / r.quantities["upper_bound"] for r in ks)
    if kk:
        result.constants["kk min average/top_k_mean"] = min(r.quantities["average"] / r.quantities["top_k_mean"] for r in kk)
        result.constants["kk max average/top_k_mean"] = max(r.quantities["average"] / r.quantities["top_k_mean"] for r in kk)
    return result


def prop21_campaign(
    *,
    seed: int,
    count: int,
    n: int | None = None,
    p_list: Sequence[float] = MAIN_P,
    specs: Sequence[NormSpec] = DEFAULT_SPECS,
    mode: str = "exact",
    samples: int = 100_000,
    threads: int = 1,
) -> CampaignResult:
    """Matrix-rearrangement moment check on ``count`` random matrices with ``n`` in 2..5 unless pinned."""
    notes: list[str] = []
    eff_mode = mode
    if mode == "exact" and n is not None and n > TUPLE_GUARD:
        eff_mode = "mc"
        notes.append(f"n = {n} exceeds the enumeration guard n <= {TUPLE_GUARD}; Monte Carlo used")

    def run(index: int) -> list[VerificationReport]:
        n_i = _cycle_n(n, index, 2, 5)
        alpha = np.abs(random_matrix(n_i, seed, index))
        out = []
        for s_idx, spec in enumerate(specs):
            for p_idx, p in enumerate(p_list):
                desc = {"seed": seed, "index": index, "n": n_i, "norm": spec.label}
                out.append(
                    verify_prop21(
                        alpha, spec, p, mode=eff_mode, samples=samples, seed=_mc_seed(seed, index, s_idx, p_idx),
                        descriptor=desc,
                    )
                )
        return out

    reports = _flatten(_pmap(run, range(count), threads))
    result = CampaignResult("verify-prop21", reports, notes=notes)
    for spec in specs:
        mine = [r for r in reports if r.descriptor["norm"] == spec.label]
        rows = _growth_rows(mine, "ratio_normalized", p_list, "ratio")
        result.tables[f"growth {spec.label}"] = rows
        if rows:
            result.constants[f"ratio_normalized {spec.label}"] = max(row["ratio_normalized"] for row in rows)
    return result


def comb_corpus(seed: int, count: int, n: int | None, lo: int = 2, hi: int = 6) -> list[tuple[dict[str, Any], DoublyStochastic]]:
    """Uniform matrices for every size in range, then ``count`` Sinkhorn matrices."""
    sizes = [n] if n is not None else list(range(lo, hi + 1))
    out = [({"family": "uniform", "seed": seed, "index": -1, "n": m}, DoublyStochastic.uniform(m)) for m in sizes]
    for index in range(count):
        n_i = _cycle_n(n, index, lo, hi)
        out.append(({"family": "sinkhorn", "seed": seed, "index": index, "n": n_i}, random_doubly_stochastic(n_i, seed, index)))
    return out


def comb_campaign(
    *,
    seed: int,
    count: int,
    n: int | None = None,
    p_list: Sequence[float] = GROWTH_P,
    mode: str = "exact",
    samples: int = 100_000,
    threads: int = 1,
) -> CampaignResult:
    """Moments of ``H`` over the corpus with the trend check on ``max ||H||_p (1+ln p)/p``."""
    corpus = comb_corpus(seed, count, n)
    notes: list[str] = []

    def run(i: int) -> VerificationReport:
        desc, mu = corpus[i]
        m = mode
        if m == "exact" and mu.n > TUPLE_GUARD:
            m = "mc"
        return verify_comb(mu, p_list, mode=m, samples=samples, seed=_mc_seed(seed, i), descriptor=desc)

    if mode == "exact" and any(mu.n > TUPLE_GUARD for _, mu in corpus):
        notes.append(f"matrices with n > {TUPLE_GUARD} exceed the enumeration guard; Monte Carlo used for them")
    reports = _pmap(run, range(len(corpus)), threads)
    result = CampaignResult("verify-comb", reports, notes=notes)
    rows = []
    for p in p_list:
        key = f"H_p{p:g}_normalized"
        best, where = max(((r.quantities[key], r.describe()) for r in reports), key=lambda v: v[0])
        rows.append({"p": p, "H_max": best / growth_factor(p), "H_normalized": best, "argmax": where})
    result.tables["growth H"] = rows
    seq = [row["H_normalized"] for row in rows]
    result.checks["trend"] = trend_bounded(seq)
    result.constants["empirical_constant"] = max(seq)
    return result


def stochastic_corpus(seed: int, count: int, n_max: int) -> list[tuple[dict[str, Any], DoublyStochastic]]:
    """``count`` Sinkhorn matrices with ``n`` cycling through ``2..n_max``."""
    return [
        ({"family": "sinkhorn", "seed": seed, "index": i, "n": _cycle_n(None, i, 2, n_max)},
         random_doubly_stochastic(_cycle_n(None, i, 2, n_max), seed, i))
        for i in range(count)
    ]


PERM_ENUM_GUARD = 7


def permutation_corpus(n_max: int) -> list[tuple[dict[str, Any], DoublyStochastic]]:
    """Every permutation matrix with ``n <= 7``; the identity for larger ``n``.

    ``P_mu(h_r = j)`` at a permutation matrix is the point mass at ``j = r``
    whatever the permutation, so one representative per size covers all.
    """
    out = []
    for m in range(1, n_max + 1):
        perms = itertools.permutations(range(m)) if m <= PERM_ENUM_GUARD else [tuple(range(m))]
        for k, perm in enumerate(perms):
            out.append(({"family": "permutation", "seed": 0, "index": k, "n": m}, DoublyStochastic.permutation(perm)))
    return out


def herz_campaign(*, seed: int, count: int, n_max: int = 10, threads: int = 1) -> CampaignResult:
    corpus = stochastic_corpus(seed, count, n_max) + permutation_corpus(n_max)
    reports = _pmap(lambda i: herz_sweep(corpus[i][1], descriptor=corpus[i][0]), range(len(corpus)), threads)
    result = CampaignResult("herz", reports)
    result.constants["min_slack"] = min(r.quantities["slack"] for r in reports if r.flags)
    result.constants["printed_sum_violations"] = sum(r.constants["printed_sum_violations"] for r in reports)
    return result


def tails_campaign(
    *, seed: int, count: int, n_max: int = 10, t_list: Sequence[float] = TAIL_T, threads: int = 1
) -> CampaignResult:
    corpus = stochastic_corpus(seed, count, n_max) + permutation_corpus(n_max)
    reports = _pmap(lambda i: tails_check(corpus[i][1], t_list, descriptor=corpus[i][0]), range(len(corpus)), threads)
    result = CampaignResult("tails", reports)
    for t in t_list:
        tag = f"{t:.6g}"
        gaps = [
            r.quantities[f"t{tag}_log10_prob"] - r.quantities[f"t{tag}_log10_bound"]
            for r in reports
            if f"t{tag}_prob" in r.quantities and r.quantities[f"t{tag}_prob"] > 0
        ]
        if gaps:
            result.constants[f"max log10(prob/bound) t={tag}"] = max(gaps)
    return result


def birkhoff_campaign(*, seed: int, count: int, n_max: int = 8, threads: int = 1) -> CampaignResult:
    corpus = stochastic_corpus(seed, count, n_max)
    reports = _pmap(lambda i: birkhoff_check(corpus[i][1], descriptor=corpus[i][0]), range(len(corpus)), threads)
    result = CampaignResult("birkhoff", reports)
    result.constants["max_reconstruction_error"] = max(r.quantities["reconstruction_error"] for r in reports)
    result.constants["max_excess_terms"] = max(r.quantities["terms"] - r.quantities["max_terms"] for r in reports)
    return result


def integrals_campaign(
    *, a_list: Sequence[float] = INTEGRAL_A, calc_grid: Sequence[tuple[float, float, float, float]] = CALC_GRID
) -> CampaignResult:
    """Quadrature against both tail-integral bounds on their precondition grids."""
    reports = []
    for a in a_list:
        res = integral_cc1(a, 1.0)
        rel = res.abs_error / res.value
        reports.append(
            VerificationReport(
                "cc1",
                {"a": float(a), "b": 1.0},
                {"value": res.value, "lower_bound": res.lower, "upper_bound": res.upper, "rel_error": rel},
                {"lower": res.lower <= res.value, "upper": res.value <= res.upper, "accuracy": rel <= INTEGRAL_REL_TOL},
            )
        )
    for a, b, d, r in calc_grid:
        res = integral_calc(a, b, d, r)
        rel = res.abs_error / res.value
        reports.append(
            VerificationReport(
                "calc",
                {"a": float(a), "b": float(b), "d": float(d), "r": float(r), "branch": res.branch},
                {"value": res.value, "upper_bound": res.bound, "rel_error": rel},
                {"upper": res.holds, "accuracy": rel <= INTEGRAL_REL_TOL},
            )
        )
    result = CampaignResult("integrals", reports)
    branches = {r.descriptor["branch"] for r in reports if r.kind == "calc"}
    result.checks["both_branches"] = branches == {"small_a", "large_a"}
    return result
