"""Finite-support random variables and the disjoint-sum rearrangement.

A variable ``f_i`` is stored as a list of atoms. Everything about the
disjoint sum ``h`` (placing ``f_i`` on the i-th subinterval of width 1/n)
that matters here is distributional: its law is the equal-weight mixture of
the ``|f_i|`` laws, so ``h*`` is a finite step function and all integrals
against it are exact finite sums.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import DomainError, ResourceError

PROB_TOL = 1e-12
BREAK_TOL = 1e-12
ENUMERATION_GUARD = 10**6


@dataclass(frozen=True)
class DiscreteDistribution:
    """Law of one random variable with finitely many atoms ``(value, prob)``."""

    values: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) == 0:
            raise DomainError("a distribution needs at least one atom")
        if len(self.values) != len(self.probs):
            raise DomainError("values and probs differ in length")
        v = np.asarray(self.values, dtype=float)
        pr = np.asarray(self.probs, dtype=float)
        if not np.all(np.isfinite(v)):
            raise DomainError("atom values must be finite")
        if np.any(pr <= 0) or np.any(pr > 1):
            raise DomainError(f"atom probabilities must lie in (0, 1], got {self.probs}")
        if abs(pr.sum() - 1.0) > PROB_TOL:
            raise DomainError(f"probabilities sum to {pr.sum()!r}, not 1")

    @classmethod
    def from_atoms(cls, atoms: Iterable[Sequence[float]]) -> "DiscreteDistribution":
        pairs = [(float(v), float(p)) for v, p in atoms]
        return cls(tuple(v for v, _ in pairs), tuple(p for _, p in pairs))

    @classmethod
    def point(cls, value: float) -> "DiscreteDistribution":
        return cls((float(value),), (1.0,))

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.values, self.probs))

    def scaled(self, factor: float) -> "DiscreteDistribution":
        return DiscreteDistribution(tuple(factor * v for v in self.values), self.probs)

    def moment(self, p: float) -> float:
        """``(E|f|^p)^{1/p}``."""
        v = np.abs(np.asarray(self.values))
        return float(np.dot(self.probs, v**p) ** (1.0 / p))

    def to_json(self) -> dict[str, Any]:
        return {"atoms": [[v, p] for v, p in self.atoms]}

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "DiscreteDistribution":
        return cls.from_atoms(obj["atoms"])


def dump_distributions(ds: Sequence[DiscreteDistribution]) -> str:
    return json.dumps([d.to_json() for d in ds])


def load_distributions(text: str) -> list[DiscreteDistribution]:
    return [DiscreteDistribution.from_json(obj) for obj in json.loads(text)]


@dataclass(frozen=True)
class QuantileStep:
    """A step function on [0, 1] given by consecutive pieces ``(width, value)``.

    Pieces are half-open ``[c_{k-1}, c_k)``. At a breakpoint the value of the
    piece to the right is used, and the function is 0 from 1 onwards, which
    matches ``h*(s) = inf{t : P(|h| > t) <= s}``.
    """

    widths: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.widths) != len(self.values) or not self.widths:
            raise DomainError("a step function needs matching, non-empty widths and values")
        w = np.asarray(self.widths)
        if np.any(w <= 0):
            raise DomainError("piece widths must be positive")
        if abs(w.sum() - 1.0) > PROB_TOL:
            raise DomainError(f"widths sum to {w.sum()!r}, not 1")

    @property
    def pieces(self) -> list[tuple[float, float]]:
        return list(zip(self.widths, self.values))

    @property
    def breakpoints(self) -> np.ndarray:
        """Right ends ``c_1 < ... < c_m`` of the pieces; ``c_m`` is pinned to 1."""
        c = np.cumsum(self.widths)
        c[-1] = 1.0
        return c

    def at(self, s: float) -> float:
        if s < 0:
            raise DomainError(f"argument {s} outside [0, 1]")
        if s >= 1.0 - BREAK_TOL:
            return 0.0
        c = self.breakpoints
        # a point within BREAK_TOL of a breakpoint counts as the breakpoint itself
        idx = int(np.searchsorted(c, s + BREAK_TOL, side="right"))
        return float(self.values[min(idx, len(self.values) - 1)])

    def magnitude(self) -> "QuantileStep":
        return QuantileStep(self.widths, tuple(abs(v) for v in self.values))


def quantile_of(d: DiscreteDistribution) -> QuantileStep:
    """Non-increasing quantile representation of ``d`` on [0, 1].

    Atoms are ordered by decreasing ``|value|`` (stable for ties) and keep
    their sign; each atom occupies a piece whose width is its probability.
    """
    order = sorted(range(len(d.values)), key=lambda i: -abs(d.values[i]))
    return QuantileStep(tuple(d.probs[i] for i in order), tuple(d.values[i] for i in order))


def _mixture_step(ds: Sequence[DiscreteDistribution]) -> QuantileStep:
    n = len(ds)
    vals = np.concatenate([np.abs(np.asarray(d.values, dtype=float)) for d in ds])
    wts = np.concatenate([np.asarray(d.probs, dtype=float) / n for d in ds])
    uniq, inv = np.unique(vals, return_inverse=True)
    mass = np.bincount(inv, weights=wts)
    # descending values; renormalize the accumulated widths to absorb rounding
    uniq, mass = uniq[::-1], mass[::-1]
    mass = mass / mass.sum()
    return QuantileStep(tuple(mass.tolist()), tuple(uniq.tolist()))


def _block_integrals(step: QuantileStep, n: int, power: float = 1.0, blocks: int | None = None) -> np.ndarray:
    """``int_{(j-1)/n}^{j/n} step(s)^power ds`` for ``j = 1..blocks`` by a two-pointer sweep.

    Pieces are visited left to right, i.e. in descending value order for a
    rearrangement.
    """
    blocks = n if blocks is None else blocks
    widths = np.asarray(step.widths)
    values = np.abs(np.asarray(step.values)) ** power
    out = np.zeros(blocks)
    lo = 0.0
    j = 0
    for width, val in zip(widths, values):
        hi = lo + width
        while j < blocks:
            b_lo, b_hi = j / n, (j + 1) / n
            overlap = min(hi, b_hi) - max(lo, b_lo)
            if overlap > 0:
                out[j] += overlap * val
            if b_hi <= hi:
                j += 1
            else:
                break
        lo = hi
        if j >= blocks:
            break
    return out


@dataclass(frozen=True)
class RearrangementProfile:
    """``h*`` of a disjoint sum with its tail p-moment and block averages.

    ``tail_p = (n int_0^{1/n} h*^p)^{1/p}`` and
    ``block_avgs[j-1] = n int_{(j-1)/n}^{j/n} h*``.
    """

    n: int
    p: float
    hstar: QuantileStep
    tail_p: float
    block_avgs: np.ndarray

    def tail(self, p: float) -> float:
        return tail_moment(self.hstar, self.n, p)

    @property
    def b(self) -> float:
        """The level ``h*(1/n)`` used by the three-part split."""
        return self.hstar.at(1.0 / self.n)


def tail_moment(hstar: QuantileStep, n: int, p: float) -> float:
    integral = _block_integrals(hstar, n, power=p, blocks=1)[0]
    return float((n * integral) ** (1.0 / p))


def disjoint_profile(ds: Sequence[DiscreteDistribution], p: float = 1.0) -> RearrangementProfile:
    """Rearrangement profile of the disjoint sum of ``ds``."""
    n = len(ds)
    if n < 1:
        raise DomainError("need at least one distribution")
    if not p >= 1:
        raise DomainError(f"p must be >= 1, got {p}")
    hstar = _mixture_step(ds)
    s = n * _block_integrals(hstar, n)
    # averages of a non-increasing function over consecutive blocks are non-increasing
    s = np.minimum.accumulate(s)
    s.setflags(write=False)
    return RearrangementProfile(n=n, p=float(p), hstar=hstar, tail_p=tail_moment(hstar, n, p), block_avgs=s)


def _refine(step: QuantileStep, cut: float) -> tuple[list[float], list[float], int]:
    """Split the piece containing ``cut``; return widths, values and the number of pieces left of ``cut``."""
    widths, values = list(step.widths), list(step.values)
    lo = 0.0
    for idx, w in enumerate(widths):
        hi = lo + w
        if abs(hi - cut) <= BREAK_TOL:
            return widths, values, idx + 1
        if hi > cut:
            if cut - lo <= BREAK_TOL:
                return widths, values, idx
            widths[idx : idx + 1] = [cut - lo, hi - cut]
            values[idx : idx + 1] = [values[idx], values[idx]]
            return widths, values, idx + 1
        lo = hi
    return widths, values, len(widths)


def split_three_parts(
    ds: Sequence[DiscreteDistribution],
) -> tuple[list[QuantileStep], list[QuantileStep], list[QuantileStep]]:
    """Split each ``f_i`` into large values, a short head, and a bounded rest.

    With ``b = h*(1/n)`` and ``f_i`` in its quantile realization:
    ``f1 = f 1{|f| > b}``, ``f2 = (f - f1) 1_[0, 1/n)``, ``f3 = f - f1 - f2``.
    All three share the refined pieces of ``f_i`` so they add up exactly.
    For ``n = 1`` the level is ``h*(1) = 0`` and ``f1 = f``.
    """
    n = len(ds)
    b = disjoint_profile(ds).b
    big, head, rest = [], [], []
    for d in ds:
        widths, values, n_left = _refine(quantile_of(d), 1.0 / n)
        v1 = [v if abs(v) > b else 0.0 for v in values]
        v2 = [(v - a) if i < n_left else 0.0 for i, (v, a) in enumerate(zip(values, v1))]
        v3 = [v - a - c for v, a, c in zip(values, v1, v2)]
        big.append(QuantileStep(tuple(widths), tuple(v1)))
        head.append(QuantileStep(tuple(widths), tuple(v2)))
        rest.append(QuantileStep(tuple(widths), tuple(v3)))
    return big, head, rest


def support_size(ds: Sequence[DiscreteDistribution]) -> int:
    return math.prod(len(d.values) for d in ds)


def product_support(
    ds: Sequence[DiscreteDistribution], guard: int = ENUMERATION_GUARD
) -> tuple[np.ndarray, np.ndarray]:
    """All joint outcomes of independent ``ds``: a ``(T, n)`` value array and ``T`` weights.

    Outcomes are listed in lexicographic atom order (last variable fastest).
    """
    size = support_size(ds)
    if size > guard:
        raise ResourceError(
            f"product support has {size} outcomes, above the guard {guard}; use Monte Carlo mode"
        )
    grids = np.indices([len(d.values) for d in ds]).reshape(len(ds), -1).T
    vals = np.empty(grids.shape)
    wts = np.ones(grids.shape[0])
    for i, d in enumerate(ds):
        vals[:, i] = np.asarray(d.values)[grids[:, i]]
        wts *= np.asarray(d.probs)[grids[:, i]]
    return vals, wts


def sup_moment(ds: Sequence[DiscreteDistribution], p: float, guard: int = ENUMERATION_GUARD) -> float:
    """Exact ``(E sup_i |f_i|^p)^{1/p}`` by enumerating the product support."""
    size = support_size(ds)
    if size > guard:
        raise ResourceError(
            f"product support has {size} outcomes, above the guard {guard}; use Monte Carlo mode"
        )
    top = np.zeros(1)
    wts = np.ones(1)
    for d in ds:
        v = np.abs(np.asarray(d.values, dtype=float))
        top = np.maximum.outer(top, v).ravel()
        wts = np.multiply.outer(wts, np.asarray(d.probs)).ravel()
    return float(np.sum(wts * top**p) ** (1.0 / p))


def sample_rows(ds: Sequence[DiscreteDistribution], rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw ``size`` independent joint outcomes by inverse-CDF sampling."""
    u = rng.random((size, len(ds)))
    out = np.empty((size, len(ds)))
    for i, d in enumerate(ds):
        cdf = np.cumsum(d.probs)
        cdf[-1] = 1.0
        idx = np.minimum(np.searchsorted(cdf, u[:, i], side="right"), len(d.values) - 1)
        out[:, i] = np.asarray(d.values)[idx]
    return out
