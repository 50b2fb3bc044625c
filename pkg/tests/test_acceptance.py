"""Acceptance criteria, each run at its pinned tolerance with one verdict line."""

import math
import time

import numpy as np

from symnorm.combinatorics import DoublyStochastic, binom_moment, exact_H_moment, mc_H_moment
from symnorm.corpus import instance_rng, random_doubly_stochastic
from symnorm.harness import (
    DEFAULT_SPECS,
    birkhoff_campaign,
    comb_campaign,
    geiss_campaign,
    growth_factor,
    herz_campaign,
    induced_doubly_stochastic,
    integrals_campaign,
    ks_campaign,
    main_campaign,
    tails_campaign,
    verify_prop21,
)
from symnorm.norms import NormSpec, RepetitionProfile, eval_norm, expand_repetition, repetition_factor

SEED = 20240611
MAIN_COUNT = 200
MAIN_P = (1.0, 2.0, 4.0, 8.0)
MAIN_RUNTIME = 60.0
GEISS_TOL = 1e-9
KS_COUNT = 100
HERZ_COUNT = 100
HERZ_N_MAX = 10
HERZ_RUNTIME = 30.0
TAIL_T = (math.e**2, 10.0, 20.0)
COMB_P = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0)
COMB_N_MAX = 6
TREND_FACTOR = 1.2
CONCRETE_P1 = 2.0 + math.e**4
WITNESS_P = (8.0, 16.0, 32.0)
WITNESS_MAX_DECAY = 0.10
BIRKHOFF_COUNT = 50
BIRKHOFF_N_MAX = 8
BIRKHOFF_TOL = 1e-10
INTEGRAL_REL_TOL = 1e-8
REPETITION_PROFILES = 200
REPETITION_TOL = 1e-12
IDENTITY_TOL = 1e-12
MC_COUNT = 100
MC_SAMPLES = 20_000
MC_P = 2.0
MC_SHARE = 0.95


def test_criterion_01_main_lower_bound(report_criterion):
    start = time.perf_counter()
    res = main_campaign(seed=SEED, count=MAIN_COUNT, p_list=MAIN_P, specs=DEFAULT_SPECS)
    elapsed = time.perf_counter() - start
    instances = {r.descriptor["index"] for r in res.reports}
    bad = [r.describe() for r in res.reports if not r.flags["lower"]]
    ns = {r.descriptor["n"] for r in res.reports}
    worst = min(r.quantities["M"] - r.quantities["lower_bound"] for r in res.reports)
    ok = not bad and len(instances) >= 200 and ns == {2, 3, 4, 5} and elapsed < MAIN_RUNTIME
    report_criterion(
        1, ok, f"M >= D/(2+4 sqrt 2) - 1e-9 on {len(res.reports)} checks over {len(instances)} instances; "
        f"min slack {worst:.3g}; {elapsed:.1f} s"
    )
    assert not bad, bad[:5]
    assert len(instances) >= 200 and ns == {2, 3, 4, 5}
    assert elapsed < MAIN_RUNTIME


def test_criterion_02_two_sided_maximum(report_criterion):
    res = geiss_campaign(seed=SEED, count=MAIN_COUNT, p_list=MAIN_P)
    bad = [r.describe() for r in res.reports if not r.passed]
    lo = min(r.quantities["sup_moment"] - r.quantities["lower_bound"] for r in res.reports)
    hi = min(r.quantities["upper_bound"] - r.quantities["sup_moment"] for r in res.reports)
    report_criterion(2, not bad, f"{len(res.reports)} checks at tol {GEISS_TOL:g}; min slacks lower {lo:.3g}, upper {hi:.3g}")
    assert not bad, bad[:5]


def test_criterion_03_permutation_averages(report_criterion):
    res = ks_campaign(seed=SEED, count=KS_COUNT)
    ks = [r for r in res.reports if r.kind == "ks"]
    kk = [r for r in res.reports if r.kind == "kk"]
    bad = [r.describe() for r in res.reports if not r.passed]
    sizes_ok = max(r.descriptor["n"] for r in res.reports) <= 6
    ok = not bad and len(ks) >= 100 and len({r.descriptor["index"] for r in kk}) >= 100 and sizes_ok
    report_criterion(3, ok, f"{len(ks)} matrices (1/2, 1) and {len(kk)} vector/k checks (1/4, 2), n <= 6, tol 1e-12")
    assert ok, bad[:5]


def test_criterion_04_level_probability_bound(report_criterion):
    start = time.perf_counter()
    res = herz_campaign(seed=SEED, count=HERZ_COUNT, n_max=HERZ_N_MAX)
    elapsed = time.perf_counter() - start
    sinkhorn = [r for r in res.reports if r.descriptor["family"] == "sinkhorn"]
    perms = [r for r in res.reports if r.descriptor["family"] == "permutation"]
    bad = [r.describe() for r in res.reports if not r.passed]
    pairs = int(sum(r.quantities["pairs_checked"] for r in res.reports))
    ok = not bad and len(sinkhorn) >= 100 and elapsed < HERZ_RUNTIME
    report_criterion(
        4, ok, f"{len(sinkhorn)} Sinkhorn + {len(perms)} permutation matrices, {pairs} (r, j) pairs, tol 1e-12; {elapsed:.1f} s"
    )
    assert not bad, bad[:5]
    assert len(sinkhorn) >= 100
    assert elapsed < HERZ_RUNTIME


def test_criterion_05_level_tail_bound(report_criterion):
    res = tails_campaign(seed=SEED, count=HERZ_COUNT, n_max=HERZ_N_MAX, t_list=TAIL_T)
    bad = [r.describe() for r in res.reports if not r.passed]
    checks = sum(len(r.flags) for r in res.reports)
    report_criterion(5, not bad, f"{checks} (matrix, t) checks over r < n <= 10, t in (e^2, 10, 20)")
    assert not bad, bad[:5]


def test_criterion_06_combinatorial_trend(report_criterion):
    res = comb_campaign(seed=SEED, count=60, p_list=COMB_P)
    seq = [row["H_normalized"] for row in res.tables["growth H"]]
    trend_ok = seq[-1] <= TREND_FACTOR * max(seq[:-1])
    p1_ok = all(r.quantities["H_p1"] <= CONCRETE_P1 for r in res.reports)
    sizes_ok = max(r.descriptor["n"] for r in res.reports) <= COMB_N_MAX
    ok = trend_ok and p1_ok and sizes_ok
    report_criterion(
        6, ok, "normalized max ||H||_p: " + ", ".join(f"{v:.4f}" for v in seq)
        + f"; empirical constant {max(seq):.4f}; max ||H||_1 = {max(r.quantities['H_p1'] for r in res.reports):.4f}"
    )
    assert trend_ok and p1_ok and sizes_ok


def test_criterion_07_binomial_witness(report_criterion):
    vals = [binom_moment(int(10 * p), p) * growth_factor(p) for p in WITNESS_P]
    decay = 1.0 - vals[-1] / vals[0]
    ok = min(vals) > 0 and decay <= WITNESS_MAX_DECAY
    report_criterion(
        7, ok, "binom_moment(10p, p)(1+ln p)/p at p = 8, 16, 32: " + ", ".join(f"{v:.5f}" for v in vals)
        + f"; decay across the triple {100 * decay:.1f}% (limit {100 * WITNESS_MAX_DECAY:.0f}%)"
    )
    assert min(vals) > 0
    assert decay <= WITNESS_MAX_DECAY


def test_criterion_08_birkhoff(report_criterion):
    res = birkhoff_campaign(seed=SEED, count=BIRKHOFF_COUNT, n_max=BIRKHOFF_N_MAX)
    bad = [r.describe() for r in res.reports if not r.passed]
    err = max(r.quantities["reconstruction_error"] for r in res.reports)
    wdev = max(abs(r.quantities["weight_sum"] - 1) for r in res.reports)
    ok = not bad and len(res.reports) == BIRKHOFF_COUNT
    report_criterion(8, ok, f"{len(res.reports)} matrices n <= 8; max reconstruction error {err:.3g}, max |sum w - 1| {wdev:.3g}")
    assert ok, bad[:5]


def test_criterion_09_tail_integrals(report_criterion):
    res = integrals_campaign()
    bad = [r.describe() for r in res.reports if not r.passed]
    cc1 = [r for r in res.reports if r.kind == "cc1"]
    branches = {r.descriptor["branch"] for r in res.reports if r.kind == "calc"}
    rel = max(r.quantities["rel_error"] for r in res.reports)
    ok = not bad and [r.descriptor["a"] for r in cc1] == [4.0, 8.0, 16.0, 32.0] and branches == {"small_a", "large_a"}
    report_criterion(9, ok, f"{len(cc1)} lower/upper checks, {len(res.reports) - len(cc1)} upper checks, both branches; max rel err {rel:.2g}")
    assert ok, bad[:5]


def test_criterion_10_repetition(report_criterion):
    worst = -math.inf
    checks = 0
    for index in range(REPETITION_PROFILES):
        rng = instance_rng(SEED, index)
        m = int(rng.integers(1, 7))
        base = np.sort(rng.uniform(0.01, 10.0, size=m))[::-1]
        counts = rng.integers(0, 5, size=m)
        prof = RepetitionProfile.of(base, counts)
        y = expand_repetition(prof)
        factor = repetition_factor(prof)
        for spec in DEFAULT_SPECS:
            lhs, rhs = eval_norm(spec, y), factor * eval_norm(spec, base)
            worst = max(worst, (lhs - rhs) / rhs)
            checks += 1
    ok = worst <= REPETITION_TOL
    report_criterion(10, ok, f"{checks} checks on {REPETITION_PROFILES} profiles; max relative excess {worst:.3g}")
    assert ok


def test_criterion_11_matrix_identity(report_criterion):
    worst = 0.0
    for n in range(2, 7):
        alpha = np.tile(1.0 / np.arange(1, n + 1), (n, 1))
        mu = induced_doubly_stochastic(alpha)
        for p in MAIN_P:
            rep = verify_prop21(alpha, NormSpec.weak_lp(1), p)
            worst = max(worst, abs(rep.quantities["ratio"] - exact_H_moment(mu, p)))
    ok = worst <= IDENTITY_TOL
    report_criterion(11, ok, f"n = 2..6, p in (1, 2, 4, 8): max |ratio - ||H||_p| = {worst:.3g}")
    assert ok


def test_criterion_12_monte_carlo(report_criterion):
    inside = 0
    identical = True
    for index in range(MC_COUNT):
        n = 2 + index % 5
        mu = random_doubly_stochastic(n, SEED, index)
        est = mc_H_moment(mu, MC_P, MC_SAMPLES, seed=index)
        inside += abs(est.estimate - exact_H_moment(mu, MC_P)) <= 3 * est.std_error
        if index % 10 == 0:
            identical &= mc_H_moment(mu, MC_P, MC_SAMPLES, seed=index, threads=4) == est
    share = inside / MC_COUNT
    ok = share >= MC_SHARE and identical
    report_criterion(12, ok, f"{inside}/{MC_COUNT} estimates within 3 standard errors; thread-count identical: {identical}")
    assert share >= MC_SHARE
    assert identical


def test_witness_bounded_below_supplement():
    # the normalized witness is positive and stays above a fixed floor over a wide p range
    vals = [binom_moment(int(10 * p), p) * growth_factor(p) for p in (2.0, 4.0, 8.0, 16.0, 32.0, 64.0)]
    assert min(vals) > 0.5
