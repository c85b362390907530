"""Shared vocabulary: points, supports, dominance, problem oracles, sparse projection.

Everything downstream works on a feasible set of the form
``{x in R^n : ||x||_0 <= s}`` (vectors with at most ``s`` nonzero entries),
here always called ``Omega``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

# Components with |x_i| <= ZERO_TOL are read as zero when building supports.
# The threshold is an implementation choice for floating point robustness.
ZERO_TOL = 1e-12


class CapacityError(RuntimeError):
    """A support enumeration would exceed the configured cap."""


def support(x: np.ndarray, tol: float = ZERO_TOL) -> np.ndarray:
    """Indices of the nonzero components of ``x`` (0-based, sorted)."""
    return np.flatnonzero(np.abs(np.asarray(x, dtype=float)) > tol)


def l0_norm(x: np.ndarray, tol: float = ZERO_TOL) -> int:
    """Number of nonzero components of ``x``."""
    return int(support(x, tol).size)


def check_budget(s: int, n: int) -> int:
    """Validate a cardinality bound ``1 <= s < n`` and return it as int."""
    s = int(s)
    if not 1 <= s < n:
        raise ValueError(f"cardinality bound must satisfy 1 <= s < n, got s={s}, n={n}")
    return s


def is_feasible(x: np.ndarray, s: int, tol: float = ZERO_TOL) -> bool:
    """True iff ``x`` has at most ``s`` nonzero components."""
    return l0_norm(x, tol) <= s


@dataclass(frozen=True, order=True)
class SupportSet:
    """An ordered index set over ``{0, ..., n-1}``.

    Indices are kept 0-based internally; serialized output (CSV columns)
    uses 1-based indices.  Instances are immutable and hashable, so they can
    key archives and be shared across concurrent tasks.
    """

    indices: tuple
    n: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if len(idx) > self.n:
            raise ValueError("support set larger than ambient dimension")
        if any(not 0 <= i < self.n for i in idx):
            raise ValueError(f"indices must lie in [0, {self.n}), got {idx}")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError(f"indices must be strictly increasing, got {idx}")

    @classmethod
    def from_iterable(cls, indices: Iterable[int], n: int) -> "SupportSet":
        return cls(tuple(sorted(set(int(i) for i in indices))), n)

    def as_array(self) -> np.ndarray:
        return np.array(self.indices, dtype=np.intp)

    def complement(self) -> tuple:
        inside = set(self.indices)
        return tuple(i for i in range(self.n) if i not in inside)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[list(self.indices)] = True
        return m

    def contains_support_of(self, x: np.ndarray, tol: float = ZERO_TOL) -> bool:
        return set(support(x, tol)) <= set(self.indices)

    def to_1based(self) -> tuple:
        return tuple(i + 1 for i in self.indices)

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class MultiObjectiveProblem:
    """Oracle for a continuously differentiable vector objective.

    Parameters
    ----------
    n : int
        Dimension of the variable space.
    m : int
        Number of objectives.
    evaluate : callable
        ``x -> (m,) array`` of objective values.
    gradient : callable
        ``x -> (m, n) array``; row ``j`` is the gradient of objective ``j``.
    lipschitz : (m,) array
        Per-objective gradient Lipschitz constants, all positive.

    The oracle callables must be pure (no shared mutable state) so that a
    single problem instance can be evaluated from concurrent tasks.
    """

    n: int
    m: int
    evaluate: Callable[[np.ndarray], np.ndarray]
    gradient: Callable[[np.ndarray], np.ndarray]
    lipschitz: np.ndarray

    def __post_init__(self):
        lip = np.asarray(self.lipschitz, dtype=float)
        lip.setflags(write=False)
        object.__setattr__(self, "lipschitz", lip)
        if lip.shape != (self.m,):
            raise ValueError(f"lipschitz must have shape ({self.m},), got {lip.shape}")
        if not np.all(lip > 0):
            raise ValueError("Lipschitz constants must be positive")


def dominates(u: Sequence[float], v: Sequence[float]) -> bool:
    """True iff ``u <= v`` componentwise and ``u != v`` (strict partial order)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"objective vectors differ in length: {u.shape} vs {v.shape}")
    return bool(np.all(u <= v) and np.any(u < v))


def project_sparse(x: np.ndarray, s: int) -> np.ndarray:
    """Euclidean projection of ``x`` onto ``{z : ||z||_0 <= s}``.

    Keeps the ``s`` largest-magnitude entries and zeroes the rest.  Ties in
    magnitude are broken by keeping the smaller index, which makes repeated
    runs reproducible.
    """
    x = np.asarray(x, dtype=float)
    s = check_budget(s, x.size)
    # Stable sort on -|x|: equal magnitudes keep their original index order.
    order = np.argsort(-np.abs(x), kind="stable")
    out = np.zeros_like(x)
    keep = order[:s]
    out[keep] = x[keep]
    return out


def super_supports(x: np.ndarray, s: int, max_sets: int | None = None) -> list:
    """All super support sets at ``x``: index sets ``J`` with supp(x) ⊆ J, |J| = s.

    Returned in lexicographic order; there are ``C(n - ||x||_0, s - ||x||_0)``
    of them, and exactly one when ``||x||_0 == s``.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    s = check_budget(s, n)
    base = support(x)
    k = base.size
    if k > s:
        raise ValueError(f"point has {k} nonzeros, exceeding the budget s={s}")
    count = math.comb(n - k, s - k)
    if max_sets is not None and count > max_sets:
        raise CapacityError(
            f"{count} super support sets exceed the cap {max_sets}; reduce n or s"
        )
    base_set = set(int(i) for i in base)
    free = [i for i in range(n) if i not in base_set]
    sets = [
        SupportSet(tuple(sorted(base_set.union(extra))), n)
        for extra in itertools.combinations(free, s - k)
    ]
    sets.sort()
    return sets
