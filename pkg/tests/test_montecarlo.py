import numpy as np
import pytest

from symnorm.montecarlo import CHUNK, chunk_rng, mc_moment


def _uniform(rng, size):
    return rng.random(size)


def test_mc_moment_exact_for_constant():
    est = mc_moment(lambda rng, size: np.full(size, 2.0), 3, 10_000, seed=1)
    assert est.estimate == 2.0 and est.std_error == 0.0 and est.samples == 10_000


def test_mc_moment_uniform_within_three_errors():
    # E U^2 = 1/3
    est = mc_moment(_uniform, 2, 200_000, seed=5)
    assert abs(est.estimate - (1 / 3) ** 0.5) <= 3 * est.std_error


@pytest.mark.parametrize("samples", [1, CHUNK - 1, CHUNK, 3 * CHUNK + 17])
def test_thread_count_does_not_change_result(samples):
    runs = [mc_moment(_uniform, 1.5, samples, seed=9, threads=t) for t in (1, 2, 5)]
    assert all(r == runs[0] for r in runs)


def test_seed_and_stream_separate():
    a = mc_moment(_uniform, 1, 5000, seed=1)
    b = mc_moment(_uniform, 1, 5000, seed=2)
    c = mc_moment(_uniform, 1, 5000, seed=1, stream=1)
    assert a != b and a != c
    assert chunk_rng(1, 0).random() == chunk_rng(1, 0).random()


def test_rejects_zero_samples():
    with pytest.raises(ValueError):
        mc_moment(_uniform, 1, 0, seed=0)
