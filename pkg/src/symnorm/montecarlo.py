"""Seeded Monte Carlo estimation of p-th moment roots.

Samples are drawn in fixed-size chunks; chunk ``c`` always uses the
generator seeded by ``(seed, c)``. Which worker runs which chunk therefore
never changes the stream, and per-chunk sums are reduced in chunk order, so
estimates are bit-identical for any thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, NamedTuple

import numpy as np

CHUNK = 4096

Sampler = Callable[[np.random.Generator, int], np.ndarray]


class MomentEstimate(NamedTuple):
    estimate: float
    std_error: float
    samples: int


def chunk_rng(seed: int, chunk: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(stream), int(chunk)])


def _chunk_sizes(samples: int) -> list[int]:
    full, rem = divmod(samples, CHUNK)
    return [CHUNK] * full + ([rem] if rem else [])


def mc_moment(
    sampler: Sampler,
    p: float,
    samples: int,
    seed: int,
    threads: int = 1,
    stream: int = 0,
) -> MomentEstimate:
    """Estimate ``(E X^p)^{1/p}`` for a non-negative ``X`` drawn by ``sampler``.

    The standard error comes from the delta method applied to the sample
    mean of ``X^p``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    sizes = _chunk_sizes(samples)

    def run(c: int) -> tuple[float, float]:
        x = sampler(chunk_rng(seed, c, stream), sizes[c]) ** p
        return float(np.sum(x)), float(np.sum(x * x))

    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(c) for c in range(len(sizes))]
    s1 = math.fsum(a for a, _ in parts)
    s2 = math.fsum(b for _, b in parts)
    mean = s1 / samples
    var = max(s2 / samples - mean * mean, 0.0)
    if samples > 1:
        var *= samples / (samples - 1)
    se_mean = math.sqrt(var / samples)
    est = mean ** (1.0 / p)
    se = (1.0 / p) * mean ** (1.0 / p - 1.0) * se_mean if mean > 0 else 0.0
    return MomentEstimate(est, se, samples)
