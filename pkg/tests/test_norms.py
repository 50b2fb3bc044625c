import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symnorm.errors import ConfigError, DomainError
from symnorm.norms import (
    NormSpec,
    RepetitionProfile,
    abel_pairing,
    eval_norm,
    eval_rows,
    expand_repetition,
    hardy_transform,
    power_weights,
    rearrange,
    repetition_factor,
)

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)
vectors = st.lists(finite, min_size=1, max_size=12)

NORMS = [
    NormSpec.lp(1),
    NormSpec.lp(2),
    NormSpec.lp(3.5),
    NormSpec.weak_lp(1),
    NormSpec.weak_lp(2),
    NormSpec.k_functional(1),
    NormSpec.k_functional(3),
    NormSpec.sup(),
    NormSpec.lorentz(power_weights(2, 16), 2),
    NormSpec.lorentz(power_weights(1, 16), 1),
    NormSpec.lorentz([1.0] * 16),
    NormSpec.lorentz_power(power_weights(2, 16), 2, 0.5),
]
CORPUS_NORMS = [NormSpec.lp(1), NormSpec.lp(2), NormSpec.sup(), NormSpec.weak_lp(1), NormSpec.k_functional(2)]


def definitional_rearrangement(x):
    """x*_j = inf{t >= 0 : #{i : |x_i| > t} < j}, evaluated at the candidate levels |x_i| and 0."""
    a = [abs(v) for v in x]
    levels = sorted(set(a) | {0.0})
    return [min(t for t in levels if sum(1 for v in a if v > t) < j) for j in range(1, len(a) + 1)]


def test_rearrange_examples():
    assert rearrange([3, 1, 2]).tolist() == [3, 2, 1]
    assert rearrange([-4, 0, 4]).tolist() == [4, 4, 0]


def test_rearrange_matches_definition_on_random_vector():
    x = np.random.default_rng(5).standard_normal(10)
    assert rearrange(x).tolist() == definitional_rearrangement(x.tolist())


def test_rearrange_rejects_non_finite():
    with pytest.raises(DomainError):
        rearrange([1.0, math.nan])
    with pytest.raises(DomainError):
        rearrange([math.inf])


@given(vectors)
def test_rearrange_is_sorted_abs_multiset(x):
    r = rearrange(x)
    assert np.all(np.diff(r) <= 0)
    assert sorted(r.tolist()) == sorted(abs(v) for v in x)


def test_eval_examples():
    n = 9
    assert eval_norm(NormSpec.weak_lp(1), [1 / k for k in range(1, n + 1)]) == 1.0
    assert eval_norm(NormSpec.k_functional(2), [3, 1, 2]) == 5.0
    assert eval_norm(NormSpec.lp(2), [3, 4]) == 5.0
    assert eval_norm(NormSpec.sup(), [-7, 2]) == 7.0
    assert eval_norm(NormSpec.lp(1), []) == 0.0


def test_unit_vectors_normalized():
    e = np.zeros(5)
    e[2] = -1.0
    for spec in [NormSpec.lp(1), NormSpec.lp(3), NormSpec.weak_lp(2), NormSpec.k_functional(4), NormSpec.sup()]:
        assert eval_norm(spec, e) == 1.0
    lor = NormSpec.lorentz([2.5, 3.0, 3.5, 4.0, 4.5], 2)
    assert eval_norm(lor, e) == pytest.approx(2.5, rel=1e-15)
    assert not lor.normalized


def test_lorentz_matches_definition():
    f = power_weights(2, 6)
    x = np.array([0.3, -2.0, 1.0, 0.0, 5.0, -1.5])
    xs = sorted(np.abs(x), reverse=True)
    w = 2.0
    direct = sum((f[k] * (k + 1) ** (-1 / w) * xs[k]) ** w for k in range(6)) ** (1 / w)
    assert eval_norm(NormSpec.lorentz(f, w), x) == pytest.approx(direct, rel=1e-13)
    assert eval_norm(NormSpec.lorentz(f), x) == pytest.approx(max(fk * v for fk, v in zip(f, xs)), rel=1e-15)
    # f(k) = k^{1/2}, w = 2 is l2
    assert eval_norm(NormSpec.lorentz(f, 2), x) == pytest.approx(np.linalg.norm(x), rel=1e-13)


def test_lorentz_power_reduces_and_matches_definition():
    f = power_weights(1, 5)
    x = np.array([4.0, 1.0, 2.0, 0.5, 3.0])
    assert eval_norm(NormSpec.lorentz_power(f, 1, 1.0), x) == pytest.approx(eval_norm(NormSpec.lorentz(f, 1), x), rel=1e-14)
    q = 0.5
    inner = eval_norm(NormSpec.lorentz(f, 1), np.abs(x) ** q)
    assert eval_norm(NormSpec.lorentz_power(f, 1, q), x) == pytest.approx(inner ** (1 / q), rel=1e-14)


def test_lorentz_weight_too_short():
    with pytest.raises((ConfigError, DomainError)):
        eval_norm(NormSpec.lorentz([1.0, 1.0]), [1, 2, 3])


def test_quasi_flags():
    assert NormSpec.weak_lp(1).quasi
    assert NormSpec.lorentz_power(power_weights(2, 4), 2, 0.5).quasi
    assert not NormSpec.lp(2).quasi
    assert not NormSpec.lorentz(power_weights(2, 4), 2).quasi
    assert not NormSpec.lorentz([1.0] * 4).quasi
    assert NormSpec.lorentz(power_weights(2, 4)).quasi  # sup_k k^{1/2} x*_k is weak l2


@pytest.mark.parametrize(
    "bad",
    [lambda: NormSpec.lp(0.5), lambda: NormSpec.weak_lp(0), lambda: NormSpec.k_functional(0), lambda: NormSpec("bogus"),
     lambda: NormSpec.lorentz([1.0, -1.0]), lambda: NormSpec.lorentz([1.0], 0.5), lambda: NormSpec.lorentz_power([1.0], 1, 1.5)],
)
def test_spec_validation(bad):
    with pytest.raises(ConfigError):
        bad()


@pytest.mark.parametrize("spec", NORMS, ids=lambda s: s.label)
def test_json_roundtrip(spec):
    assert NormSpec.from_json(spec.to_json()) == spec


def test_json_inf_and_missing_family():
    assert NormSpec.from_json({"family": "lp", "p": "inf"}).p == math.inf
    assert NormSpec.from_json({"family": "lorentz", "f": [1, 1], "w": "inf"}).w == math.inf
    with pytest.raises(ConfigError):
        NormSpec.from_json({"p": 2})


@pytest.mark.parametrize("spec", NORMS, ids=lambda s: s.label)
@given(x=st.lists(finite, min_size=1, max_size=12), seed=st.integers(0, 2**32 - 1))
def test_permutation_and_sign_invariance_exact(spec, x, seed):
    rng = np.random.default_rng(seed)
    x = np.array(x)
    y = rng.permutation(x) * rng.choice([-1.0, 1.0], size=x.size)
    assert eval_norm(spec, y) == eval_norm(spec, x)


@pytest.mark.parametrize("spec", [s for s in NORMS if not s.quasi], ids=lambda s: s.label)
@given(data=st.data())
def test_triangle_inequality(spec, data):
    n = data.draw(st.integers(1, 12))
    x = np.array(data.draw(st.lists(finite, min_size=n, max_size=n)))
    y = np.array(data.draw(st.lists(finite, min_size=n, max_size=n)))
    lhs = eval_norm(spec, x + y)
    rhs = eval_norm(spec, x) + eval_norm(spec, y)
    assert lhs <= rhs * (1 + 1e-12) + 1e-300


@pytest.mark.parametrize("spec", NORMS, ids=lambda s: s.label)
@given(x=vectors, lam=st.floats(min_value=1e-3, max_value=1e3))
def test_homogeneity(spec, x, lam):
    assert eval_norm(spec, lam * np.array(x)) == pytest.approx(lam * eval_norm(spec, x), rel=1e-12, abs=1e-300)


def test_eval_rows_matches_eval_norm():
    xs = np.random.default_rng(3).standard_normal((20, 7))
    for spec in NORMS:
        rows = eval_rows(spec, xs)
        assert rows.tolist() == [eval_norm(spec, x) for x in xs]


def test_abel_pairing_examples():
    assert abel_pairing([2, 1], [1, 1]) == 3.0
    assert abel_pairing([1, 0, 0], [1, 0, 0]) == 1.0
    with pytest.raises(DomainError):
        abel_pairing([1, 2], [1, 1])
    with pytest.raises(DomainError):
        abel_pairing([1, 1], [1, -1])
    with pytest.raises(DomainError):
        abel_pairing([1, 1], [1])


def test_abel_pairing_random_sorted_vectors():
    rng = np.random.default_rng(11)
    for _ in range(50):
        x = np.sort(rng.exponential(size=8))[::-1]
        y = np.sort(rng.exponential(size=8))[::-1]
        assert abel_pairing(x, y) == pytest.approx(float(np.dot(x, y)), rel=1e-12)


def test_hardy_examples():
    assert hardy_transform([1, 1, 1], 1).tolist() == [1, 1, 1]
    assert hardy_transform([1, 0], 1).tolist() == [1, 0.5]
    with pytest.raises(ConfigError):
        hardy_transform([1.0], 0)


@given(x=vectors, q=st.floats(min_value=0.1, max_value=4))
def test_hardy_dominates_and_decreases(x, q):
    h = hardy_transform(x, q)
    xs = rearrange(x)
    assert np.all(h >= xs)
    assert np.all(np.diff(h) <= 0)
    direct = [(np.mean(xs[: k + 1] ** q)) ** (1 / q) for k in range(len(xs))]
    assert np.allclose(h, direct, rtol=1e-12, atol=0)


@pytest.mark.parametrize("spec", [s for s in NORMS if s.normalized], ids=lambda s: s.label)
@given(x=vectors, q=st.floats(min_value=1, max_value=4))
def test_hardy_lower_bound(spec, x, q):
    assert eval_norm(spec, x) <= eval_norm(spec, hardy_transform(x, q)) * (1 + 1e-12)


def test_expand_repetition_examples():
    assert expand_repetition(RepetitionProfile.of([2, 1], [1, 1])).tolist() == [2, 1]
    assert expand_repetition(RepetitionProfile.of([2, 1], [3, 0])).tolist() == [2, 2, 2]
    with pytest.raises(DomainError):
        RepetitionProfile.of([2, 1], [1, -1])


def test_expand_repetition_counting_oracle():
    rng = np.random.default_rng(2)
    for _ in range(30):
        base = np.sort(rng.choice(np.arange(1, 50), size=5, replace=False).astype(float))[::-1]
        counts = rng.integers(0, 4, size=5)
        y = expand_repetition(RepetitionProfile.of(base, counts))
        assert [int(np.sum(y == b)) for b in base] == counts.tolist()


def test_repetition_factor_examples():
    n = 6
    assert repetition_factor(RepetitionProfile.of(np.arange(n, 0, -1.0), [1] * n)) == 2.0
    assert repetition_factor(RepetitionProfile.of(np.arange(n, 0, -1.0), [n] + [0] * (n - 1))) == 2.0 * n
    rng = np.random.default_rng(9)
    for _ in range(30):
        counts = rng.integers(0, 5, size=7)
        brute = 2 * max(1.0, max(sum(counts[: r + 1]) / (r + 1) for r in range(7)))
        assert repetition_factor(RepetitionProfile.of(np.arange(7, 0, -1.0), counts)) == pytest.approx(brute, rel=1e-15)


@pytest.mark.parametrize("spec", [s for s in NORMS if s.normalized], ids=lambda s: s.label)
@given(
    base=st.lists(st.floats(min_value=1e-3, max_value=1e3), min_size=1, max_size=6),
    counts=st.lists(st.integers(0, 4), min_size=6, max_size=6),
)
def test_repetition_inequality(spec, base, counts):
    base = sorted(base, reverse=True)
    prof = RepetitionProfile.of(base, counts[: len(base)])
    y = expand_repetition(prof)
    if y.size > 16:
        return
    assert eval_norm(spec, y) <= repetition_factor(prof) * eval_norm(spec, base) * (1 + 1e-12)


@given(st.lists(st.integers(1, 8), min_size=1, max_size=8))
def test_weak_l1_of_reciprocals_is_level_ratio(j):
    direct = max(sum(1 for v in j if v <= r) / r for r in range(1, max(j) + 1))
    assert eval_norm(NormSpec.weak_lp(1), [1 / v for v in j]) == pytest.approx(direct, rel=1e-15)
