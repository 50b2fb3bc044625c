"""Doubly stochastic matrices: Sinkhorn scaling and Birkhoff peeling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from ..errors import ConvergenceError, DomainError, NumericError

DS_TOL = 1e-9


def _deviation(a: np.ndarray) -> float:
    return float(max(np.abs(a.sum(axis=1) - 1).max(), np.abs(a.sum(axis=0) - 1).max()))


@dataclass(frozen=True, eq=False)
class DoublyStochastic:
    """Square non-negative matrix whose rows and columns each sum to one (within 1e-9)."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DomainError(f"need a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)) or np.any(a < 0):
            raise DomainError("entries must be finite and non-negative")
        dev = _deviation(a)
        if dev > DS_TOL:
            raise DomainError(f"row/column sums deviate from 1 by {dev:.3g}")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def rows(self) -> np.ndarray:
        """Rows rescaled to exact probability vectors (the laws of ``j_1..j_n``)."""
        return self.entries / self.entries.sum(axis=1, keepdims=True)

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "DoublyStochastic":
        n = len(perm)
        a = np.zeros((n, n))
        a[np.arange(n), list(perm)] = 1.0
        return cls(a)

    @classmethod
    def uniform(cls, n: int) -> "DoublyStochastic":
        return cls(np.full((n, n), 1.0 / n))

    def to_json(self) -> list[list[float]]:
        return self.entries.tolist()

    @classmethod
    def from_json(cls, rows: Sequence[Sequence[float]]) -> "DoublyStochastic":
        return cls(np.asarray(rows, dtype=float))


def sinkhorn(m: Any, tol: float = 1e-12, max_iter: int = 10_000) -> DoublyStochastic:
    """Scale a positive matrix to doubly stochastic form by alternating normalization.

    Raises ConvergenceError (carrying the achieved deviation) if ``max_iter``
    sweeps do not bring every row and column sum within ``tol`` of one.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"need a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)) or np.any(a <= 0):
        raise DomainError("Sinkhorn scaling needs strictly positive entries")
    dev = _deviation(a)
    it = 0
    while dev > tol:
        if it >= max_iter:
            raise ConvergenceError(f"Sinkhorn stopped after {max_iter} sweeps at deviation {dev:.3g}", dev)
        a /= a.sum(axis=1, keepdims=True)
        a /= a.sum(axis=0, keepdims=True)
        dev = _deviation(a)
        it += 1
    return DoublyStochastic(a)


def perfect_matching(support: np.ndarray) -> list[int] | None:
    """Row-to-column perfect matching on a boolean support, or None.

    Kuhn's augmenting-path algorithm; rows are processed in order and
    columns tried in increasing index, so the result is deterministic.
    """
    n = support.shape[0]
    adj = [np.flatnonzero(support[i]).tolist() for i in range(n)]
    col_owner = [-1] * n

    def augment(row: int, seen: list[bool]) -> bool:
        for col in adj[row]:
            if seen[col]:
                continue
            seen[col] = True
            if col_owner[col] < 0 or augment(col_owner[col], seen):
                col_owner[col] = row
                return True
        return False

    for row in range(n):
        if not augment(row, [False] * n):
            return None
    match = [0] * n
    for col, row in enumerate(col_owner):
        match[row] = col
    return match


@dataclass(frozen=True)
class BirkhoffDecomposition:
    """Convex combination of permutation matrices; ``perm[i]`` is the column used by row ``i``."""

    terms: tuple[tuple[float, tuple[int, ...]], ...]

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.terms])

    def reconstruct(self) -> np.ndarray:
        n = len(self.terms[0][1]) if self.terms else 0
        out = np.zeros((n, n))
        rows = np.arange(n)
        for w, perm in self.terms:
            out[rows, list(perm)] += w
        return out

    def to_json(self) -> dict[str, Any]:
        return {"terms": [{"weight": w, "perm": list(perm)} for w, perm in self.terms]}

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "BirkhoffDecomposition":
        return cls(tuple((float(t["weight"]), tuple(int(c) for c in t["perm"])) for t in obj["terms"]))


def birkhoff(ds: DoublyStochastic, tol: float = 1e-11) -> BirkhoffDecomposition:
    """Greedy Birkhoff-von Neumann decomposition.

    Repeatedly finds a perfect matching on the entries above ``tol``,
    subtracts the smallest matched entry times that permutation matrix,
    and stops once no matching remains.
    """
    r = np.array(ds.entries, dtype=float)
    n = ds.n
    rows = np.arange(n)
    terms: list[tuple[float, tuple[int, ...]]] = []
    for _ in range(n * n + 1):
        match = perfect_matching(r > tol)
        if match is None:
            break
        vals = r[rows, match]
        w = float(vals.min())
        r[rows, match] = vals - w
        r[rows, match] = np.where(vals == w, 0.0, r[rows, match])
        terms.append((w, tuple(match)))
    residual = float(r[r > 0].sum())
    if residual > n * tol:
        raise NumericError(f"no perfect matching left but residual mass {residual:.3g} exceeds {n * tol:.3g}")
    return BirkhoffDecomposition(tuple(terms))
