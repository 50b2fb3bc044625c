"""Symmetric norms on finite real vectors and the rearrangement toolkit.

Every norm here is evaluated on the non-increasing rearrangement of the
absolute values, so permutation and sign invariance hold bit-for-bit and
not just up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import ConfigError, DomainError

FAMILIES = ("lp", "weak_lp", "k_functional", "sup", "lorentz", "lorentz_power")


def _as_vector(x: Any) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DomainError(f"expected a 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("vector has non-finite entries")
    return arr


def rearrange(x: Sequence[float] | np.ndarray) -> np.ndarray:
    """Return ``|x|`` sorted non-increasingly (the vector ``x*``)."""
    arr = np.abs(_as_vector(x))
    return np.sort(arr, kind="stable")[::-1].copy()


def _rearrange_rows(xs: np.ndarray) -> np.ndarray:
    return np.sort(np.abs(xs), axis=1, kind="stable")[:, ::-1]


def power_weights(s: float, length: int) -> tuple[float, ...]:
    """Lorentz weight grid ``f(k) = k**(1/s)`` for ``k = 1..length``."""
    if s <= 0:
        raise ConfigError(f"weight exponent s must be positive, got {s}")
    return tuple(float(k) ** (1.0 / s) for k in range(1, length + 1))


def _parse_w(w: Any) -> float:
    if w is None or (isinstance(w, str) and w.lower() in ("inf", "infinity")):
        return math.inf
    return float(w)


@dataclass(frozen=True)
class NormSpec:
    """Tagged description of one symmetric (quasi-)norm.

    Build instances through the classmethods (``NormSpec.lp(2)`` and so on);
    the raw constructor validates the same constraints.

    ``lorentz`` is ``(sum_k (f(k) k^{-1/w} x*_k)^w)^{1/w}`` (``sup_k f(k) x*_k``
    for ``w = inf``); its value on a unit vector is ``f(1)``.
    ``lorentz_power`` is ``||x|^q|_{f,w}^{1/q}``, a q-normed quasi-norm for
    ``q < 1`` that reduces to ``lorentz`` at ``q = 1``.
    """

    family: str
    p: float | None = None
    k: int | None = None
    f: tuple[float, ...] | None = None
    w: float | None = None
    q: float | None = None

    def __post_init__(self) -> None:
        fam = self.family
        if fam not in FAMILIES:
            raise ConfigError(f"unknown norm family {fam!r}")
        if fam in ("lp", "weak_lp"):
            if self.p is None or not self.p >= 1:
                raise ConfigError(f"{fam} needs p >= 1, got {self.p}")
        elif fam == "k_functional":
            if self.k is None or int(self.k) != self.k or self.k < 1:
                raise ConfigError(f"k_functional needs an integer k >= 1, got {self.k}")
        elif fam in ("lorentz", "lorentz_power"):
            if not self.f or any(not (v > 0 and math.isfinite(v)) for v in self.f):
                raise ConfigError("lorentz weight f must be a non-empty sequence of positive reals")
            if self.w is None or not self.w >= 1:
                raise ConfigError(f"lorentz needs w >= 1 (or inf), got {self.w}")
            if fam == "lorentz_power" and (self.q is None or not 0 < self.q <= 1):
                raise ConfigError(f"lorentz_power needs q in (0, 1], got {self.q}")

    @classmethod
    def lp(cls, p: float) -> "NormSpec":
        return cls("lp", p=float(p))

    @classmethod
    def weak_lp(cls, p: float) -> "NormSpec":
        return cls("weak_lp", p=float(p))

    @classmethod
    def k_functional(cls, k: int) -> "NormSpec":
        return cls("k_functional", k=int(k))

    @classmethod
    def sup(cls) -> "NormSpec":
        return cls("sup")

    @classmethod
    def lorentz(cls, f: Sequence[float], w: float = math.inf) -> "NormSpec":
        return cls("lorentz", f=tuple(float(v) for v in f), w=_parse_w(w))

    @classmethod
    def lorentz_power(cls, f: Sequence[float], w: float, q: float) -> "NormSpec":
        return cls("lorentz_power", f=tuple(float(v) for v in f), w=_parse_w(w), q=float(q))

    @property
    def quasi(self) -> bool:
        """True when the triangle inequality is not guaranteed."""
        if self.family == "weak_lp":
            return True
        if self.family in ("lorentz", "lorentz_power"):
            if self.family == "lorentz_power" and self.q < 1:
                return True
            f = np.asarray(self.f)
            if math.isinf(self.w):
                return bool(np.any(f != f[0]))
            # (sum v_k x*_k^w)^{1/w} is a norm when v_k = f(k)^w / k is non-increasing
            v = f**self.w / np.arange(1, f.size + 1)
            return bool(np.any(np.diff(v) > 1e-12 * v[:-1]))
        return False

    @property
    def normalized(self) -> bool:
        """True when unit vectors have norm one."""
        if self.family in ("lorentz", "lorentz_power"):
            return self.f[0] == 1.0
        return True

    @property
    def label(self) -> str:
        if self.family == "lp":
            return "linf" if math.isinf(self.p) else f"l{self.p:g}"
        if self.family == "weak_lp":
            return f"weak_l{self.p:g}"
        if self.family == "k_functional":
            return f"K{self.k}"
        if self.family == "sup":
            return "sup"
        tag = f"lorentz(w={self.w:g}"
        if self.family == "lorentz_power":
            tag += f",q={self.q:g}"
        return tag + f",m={len(self.f)})"

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"family": self.family}
        if self.family in ("lp", "weak_lp"):
            out["p"] = "inf" if math.isinf(self.p) else self.p
        elif self.family == "k_functional":
            out["k"] = self.k
        elif self.family in ("lorentz", "lorentz_power"):
            out["f"] = list(self.f)
            out["w"] = "inf" if math.isinf(self.w) else self.w
            if self.family == "lorentz_power":
                out["q"] = self.q
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "NormSpec":
        try:
            fam = obj["family"]
        except (KeyError, TypeError):
            raise ConfigError(f"norm spec needs a 'family' key: {obj!r}") from None
        if fam in ("lp", "weak_lp"):
            return cls(fam, p=_parse_w(obj.get("p")))
        if fam == "k_functional":
            return cls.k_functional(obj.get("k", 0))
        if fam == "sup":
            return cls.sup()
        if fam == "lorentz":
            return cls.lorentz(obj.get("f", ()), obj.get("w"))
        if fam == "lorentz_power":
            return cls.lorentz_power(obj.get("f", ()), obj.get("w"), obj.get("q", 0))
        raise ConfigError(f"unknown norm family {fam!r}")


def _lorentz_sorted(spec: NormSpec, xs: np.ndarray) -> np.ndarray:
    m = xs.shape[1]
    if len(spec.f) < m:
        raise DomainError(f"Lorentz weight has length {len(spec.f)} < vector length {m}")
    f = np.asarray(spec.f[:m])
    if math.isinf(spec.w):
        return np.max(f * xs, axis=1)
    k = np.arange(1, m + 1, dtype=float)
    terms = (f * k ** (-1.0 / spec.w)) * xs
    return _power_sum(terms, spec.w)


def _power_sum(terms: np.ndarray, p: float) -> np.ndarray:
    """Row-wise ``(sum t^p)^{1/p}`` for non-negative rows sorted non-increasingly."""
    if math.isinf(p):
        return terms.max(axis=1)
    scale = terms.max(axis=1)
    safe = np.where(scale > 0, scale, 1.0)
    ratio = terms / safe[:, None]
    return np.where(scale > 0, scale * np.sum(ratio**p, axis=1) ** (1.0 / p), 0.0)


def eval_sorted_rows(spec: NormSpec, xs: np.ndarray) -> np.ndarray:
    """Evaluate ``spec`` on each row of ``xs``; rows must already be rearranged.

    This is the vectorized kernel behind :func:`eval_norm` and the
    enumeration routines of the harness.
    """
    n_rows, m = xs.shape
    if m == 0:
        return np.zeros(n_rows)
    fam = spec.family
    if fam == "sup":
        return xs[:, 0].copy()
    if fam == "lp":
        return _power_sum(xs, spec.p)
    if fam == "weak_lp":
        k = np.arange(1, m + 1, dtype=float)
        return np.max(k ** (1.0 / spec.p) * xs, axis=1)
    if fam == "k_functional":
        return np.sum(xs[:, : spec.k], axis=1)
    if fam == "lorentz":
        return _lorentz_sorted(spec, xs)
    # lorentz_power: rearrangement commutes with t -> t^q
    return _lorentz_sorted(spec, xs**spec.q) ** (1.0 / spec.q)


def eval_rows(spec: NormSpec, xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 2:
        raise DomainError(f"expected a 2-d array of rows, got shape {xs.shape}")
    if not np.all(np.isfinite(xs)):
        raise DomainError("rows have non-finite entries")
    return eval_sorted_rows(spec, _rearrange_rows(xs))


def eval_norm(spec: NormSpec, x: Sequence[float] | np.ndarray) -> float:
    """Value of the symmetric (quasi-)norm ``spec`` at ``x``; 0 for the empty vector."""
    xs = rearrange(x)
    return float(eval_sorted_rows(spec, xs[None, :])[0])


def _check_monotone_nonneg(v: np.ndarray, name: str) -> None:
    if np.any(v < 0):
        raise DomainError(f"{name} has negative entries")
    if np.any(np.diff(v) > 0):
        raise DomainError(f"{name} is not non-increasing")


def abel_pairing(x: Sequence[float], y: Sequence[float]) -> float:
    """Inner product of two non-increasing non-negative vectors via Abel summation.

    Computes ``y_n S_n + sum_{k<n} (y_k - y_{k+1}) S_k`` with ``S_k`` the
    partial sums of ``x``. Every coefficient is non-negative, which is what
    makes the expression useful for lower bounds.
    """
    xa, ya = _as_vector(x), _as_vector(y)
    if xa.shape != ya.shape:
        raise DomainError(f"length mismatch: {xa.size} vs {ya.size}")
    _check_monotone_nonneg(xa, "x")
    _check_monotone_nonneg(ya, "y")
    if xa.size == 0:
        return 0.0
    partial = np.cumsum(xa)
    gaps = ya[:-1] - ya[1:]
    return float(ya[-1] * partial[-1] + np.dot(gaps, partial[:-1]))


def hardy_transform(x: Sequence[float], q: float) -> np.ndarray:
    """Running q-power means of the rearrangement: ``((1/k) sum_{j<=k} x*_j^q)^{1/q}``."""
    if not q > 0:
        raise ConfigError(f"q must be positive, got {q}")
    xs = rearrange(x)
    if xs.size == 0:
        return xs
    k = np.arange(1, xs.size + 1, dtype=float)
    out = (np.cumsum(xs**q) / k) ** (1.0 / q)
    # rounding guards: the exact transform dominates x* and is non-increasing
    out = np.maximum(out, xs)
    return np.minimum.accumulate(out)


@dataclass(frozen=True)
class RepetitionProfile:
    """A positive non-increasing ``base`` and how often each entry is repeated."""

    base: tuple[float, ...]
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        b = np.asarray(self.base, dtype=float)
        if len(self.base) != len(self.counts):
            raise DomainError("base and counts differ in length")
        if not np.all(np.isfinite(b)) or np.any(b <= 0):
            raise DomainError("base entries must be positive and finite")
        if np.any(np.diff(b) > 0):
            raise DomainError("base must be non-increasing")
        if any(int(c) != c or c < 0 for c in self.counts):
            raise DomainError(f"counts must be non-negative integers, got {self.counts}")

    @classmethod
    def of(cls, base: Sequence[float], counts: Sequence[int]) -> "RepetitionProfile":
        return cls(tuple(float(v) for v in base), tuple(int(c) for c in counts))


def expand_repetition(profile: RepetitionProfile) -> np.ndarray:
    """The vector holding ``base[i]`` exactly ``counts[i]`` times, in order."""
    return np.repeat(np.asarray(profile.base, dtype=float), np.asarray(profile.counts, dtype=int))


def repetition_factor(profile: RepetitionProfile) -> float:
    """``2 max{1, sup_r (1/r) sum_{i<=r} counts_i}``.

    Bounds the norm of the expanded vector by this multiple of the norm of
    the base, for every normalized symmetric norm.
    """
    c = np.asarray(profile.counts, dtype=float)
    if c.size == 0:
        return 2.0
    avg = np.cumsum(c) / np.arange(1, c.size + 1)
    return 2.0 * max(1.0, float(avg.max()))
