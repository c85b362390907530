"""Stationarity measures for cardinality-constrained multi-objective problems.

Three nested notions are computed here, all as optimal values of strongly
convex min-max direction subproblems:

* ``theta_subspace`` — steepest common descent restricted to a fixed index
  set ``J`` (optionally for a subset ``I`` of objectives).
* ``theta_feasible`` — steepest descent over the cone of feasible directions
  at ``x``; zero value is the Pareto-stationarity test.
* ``theta_L`` — proximal subproblem with curvature ``L`` over directions
  that keep ``x + d`` feasible; zero value is the L-stationarity test.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CapacityError,
    SupportSet,
    check_budget,
    is_feasible,
    l0_norm,
    support,
)
from .simplex_qp import DirectionSolution, solve_simplex_qp

# Default cap on enumerated supports; C(n, s) beyond this raises CapacityError.
MAX_SUPPORTS = 2_000_000
_CHUNK = 131_072
_CACHE_LIMIT = 100_000


@dataclass(frozen=True)
class SparseDirectionSolution:
    """Optimal direction of a sparsity-constrained subproblem.

    ``d`` is full length and satisfies ``x + d`` feasible for the queried
    point; ``support`` is the index set attaining the optimum (lexicographic
    first among ties) and ``lam`` the optimal simplex weights on it.
    """

    d: np.ndarray
    support: SupportSet
    theta: float
    lam: np.ndarray


def _support_array(n: int, s: int):
    """All size-s subsets of range(n) as an (N, s) array, lexicographic."""
    count = math.comb(n, s)
    if count <= _CACHE_LIMIT:
        return _support_array_cached(n, s)
    return None


@functools.lru_cache(maxsize=64)
def _support_array_cached(n: int, s: int) -> np.ndarray:
    arr = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n), s)),
        dtype=np.intp,
        count=math.comb(n, s) * s,
    ).reshape(-1, s)
    arr.setflags(write=False)
    return arr


def _iter_support_chunks(n: int, s: int):
    cached = _support_array(n, s)
    if cached is not None:
        yield 0, cached
        return
    it = itertools.combinations(range(n), s)
    offset = 0
    while True:
        block = list(itertools.islice(it, _CHUNK))
        if not block:
            return
        arr = np.array(block, dtype=np.intp)
        yield offset, arr
        offset += arr.shape[0]


def _batch_theta_m2(g1, g2, K, L, b1, b2):
    """Closed-form dual optimum over each support row of K (m = 2)."""
    G1 = g1[K]
    G2 = g2[K]
    U = G1 - G2
    uu = np.einsum("ij,ij->i", U, U)
    g2u = np.einsum("ij,ij->i", G2, U)
    g22 = np.einsum("ij,ij->i", G2, G2)
    safe = np.where(uu > 0.0, uu, 1.0)
    t_int = np.clip((L * (b1 - b2) - g2u) / safe, 0.0, 1.0)
    t_flat = np.where(b1 > b2, 1.0, np.where(b1 < b2, 0.0, 0.5))
    t = np.where(uu > 0.0, t_int, t_flat)
    q = (t * t * uu + 2.0 * t * g2u + g22) / (2.0 * L) - (t * b1 + (1.0 - t) * b2)
    return -q


def _batch_theta_m1(g, K, L, b):
    G = g[K]
    return b - np.einsum("ij,ij->i", G, G) / (2.0 * L)


def _check_cap(count: int, cap: int, what: str):
    if count > cap:
        raise CapacityError(
            f"enumerating {count} {what} exceeds the cap {cap}; "
            "reduce n or s (or raise max_supports)"
        )


def _as_support(J, n: int) -> SupportSet:
    if isinstance(J, SupportSet):
        if J.n != n:
            raise ValueError(f"support set over dimension {J.n}, expected {n}")
        return J
    return SupportSet.from_iterable(J, n)


def theta_subspace(p, x, J, I=None) -> DirectionSolution:
    """Steepest common descent value/direction restricted to the set ``J``.

    Solves ``min_d max_{j in I} grad_j^T d + 0.5 ||d||^2`` subject to
    ``d = 0`` off ``J`` and returns the full-length direction.  ``I`` is an
    iterable of 0-based objective indices; ``None`` means all objectives.
    """
    x = np.asarray(x, dtype=float)
    J = _as_support(J, p.n)
    if I is None:
        I = range(p.m)
    I = sorted(set(int(j) for j in I))
    if not I:
        raise ValueError("objective subset I must be nonempty")
    if any(not 0 <= j < p.m for j in I):
        raise ValueError(f"objective indices out of range [0, {p.m})")
    grads = np.asarray(p.gradient(x), dtype=float)
    cols = J.as_array()
    G = grads[np.ix_(I, cols)].T  # (|J|, |I|)
    sol = solve_simplex_qp(G, b=None, L=1.0)
    d_full = np.zeros(p.n)
    d_full[cols] = sol.d
    # d = 0 is feasible with zero offsets, so the true value is <= 0; any
    # positive residue is floating point noise.
    return DirectionSolution(d=d_full, lam=sol.lam, theta=min(sol.theta, 0.0))


def theta_feasible(p, x, s, max_supports: int = MAX_SUPPORTS) -> SparseDirectionSolution:
    """Pareto-stationarity measure: steepest feasible descent at ``x``.

    A direction v is feasible at x exactly when x + t v stays in Omega for
    small t > 0, i.e. v adds at most ``s - ||x||_0`` fresh nonzeros.  Every
    such v has its support contained in some super support set J of x, and
    conversely every d supported on such a J is feasible; so the problem
    reduces to the minimum of ``theta_subspace`` over all J in J(x).
    """
    x = np.asarray(x, dtype=float)
    s = check_budget(s, p.n)
    if not is_feasible(x, s):
        raise ValueError(f"point with {l0_norm(x)} nonzeros is infeasible for s={s}")
    base = support(x)
    k = base.size
    _check_cap(math.comb(p.n - k, s - k), max_supports, "super support sets")

    grads = np.asarray(p.gradient(x), dtype=float)
    base_set = set(int(i) for i in base)
    free = np.array([i for i in range(p.n) if i not in base_set], dtype=np.intp)

    best_J = None
    if p.m <= 2 and s - k >= 1:
        best_theta = np.inf
        for _, extra in _iter_support_chunks(free.size, s - k):
            K = np.sort(
                np.concatenate(
                    [np.broadcast_to(base, (extra.shape[0], k)), free[extra]], axis=1
                ),
                axis=1,
            )
            zeros = np.zeros(K.shape[0])
            if p.m == 1:
                thetas = _batch_theta_m1(grads[0], K, 1.0, zeros)
            else:
                thetas = _batch_theta_m2(grads[0], grads[1], K, 1.0, zeros, zeros)
            i = int(np.argmin(thetas))
            if thetas[i] < best_theta:
                best_theta = float(thetas[i])
                best_J = SupportSet(tuple(int(v) for v in K[i]), p.n)
    else:
        best_theta = np.inf
        for extra in itertools.combinations([int(i) for i in free], s - k):
            J = SupportSet(tuple(sorted(base_set.union(extra))), p.n)
            sol = solve_simplex_qp(grads[:, J.as_array()].T, b=None, L=1.0)
            if sol.theta < best_theta:
                best_theta = sol.theta
                best_J = J

    sol = theta_subspace(p, x, best_J)
    return SparseDirectionSolution(d=sol.d, support=best_J, theta=sol.theta, lam=sol.lam)


def theta_L(p, x, s, L, max_supports: int = MAX_SUPPORTS) -> SparseDirectionSolution:
    """Proximal stationarity measure with curvature ``L``.

    Globally solves ``min max_j grad_j^T d + (L/2)||d||^2`` over directions
    with ``x + d`` feasible, by enumerating every size-s support K of the
    landing point: off K the move is pinned to ``d = -x``, contributing the
    affine offsets ``b_j = grad_j^T c + (L/2)||c||^2``; on K the remaining
    strongly convex min-max is solved exactly.  The minimum over K is the
    global optimum; the lexicographically first minimizer is returned.
    """
    x = np.asarray(x, dtype=float)
    s = check_budget(s, p.n)
    if L <= 0 or not np.isfinite(L):
        raise ValueError(f"curvature L must be positive and finite, got {L}")
    if not is_feasible(x, s):
        raise ValueError(f"point with {l0_norm(x)} nonzeros is infeasible for s={s}")
    _check_cap(math.comb(p.n, s), max_supports, "supports")

    grads = np.asarray(p.gradient(x), dtype=float)
    best_K = None

    if p.m <= 2:
        X2 = float(x @ x)
        P = grads @ x  # (m,)
        best_theta = np.inf
        for _, K in _iter_support_chunks(p.n, s):
            xK = x[K]
            x2_in = np.einsum("ij,ij->i", xK, xK)
            c2 = X2 - x2_in  # ||x_{complement}||^2 per support
            bs = []
            for j in range(p.m):
                gx_in = np.einsum("ij,ij->i", grads[j][K], xK)
                bs.append(-(P[j] - gx_in) + 0.5 * L * c2)
            if p.m == 1:
                thetas = _batch_theta_m1(grads[0], K, L, bs[0])
            else:
                thetas = _batch_theta_m2(grads[0], grads[1], K, L, bs[0], bs[1])
            i = int(np.argmin(thetas))
            if thetas[i] < best_theta:
                best_theta = float(thetas[i])
                best_K = SupportSet(tuple(int(v) for v in K[i]), p.n)
    else:
        best_theta = np.inf
        for K_tuple in itertools.combinations(range(p.n), s):
            K = SupportSet(K_tuple, p.n)
            sol = _solve_on_support(grads, x, K, L)
            if sol.theta < best_theta:
                best_theta = sol.theta
                best_K = K

    sol = _solve_on_support(grads, x, best_K, L)
    d_full = np.zeros(p.n)
    d_full[best_K.as_array()] = sol.d
    comp = list(best_K.complement())
    d_full[comp] = -x[comp]
    # d = 0 is feasible, so the true optimum is <= 0 regardless of K.
    theta = min(sol.theta, 0.0)
    assert is_feasible(x + d_full, s)
    return SparseDirectionSolution(d=d_full, support=best_K, theta=theta, lam=sol.lam)


def _solve_on_support(grads, x, K: SupportSet, L: float) -> DirectionSolution:
    cols = K.as_array()
    comp = list(K.complement())
    c = np.zeros(x.size)
    c[comp] = -x[comp]
    b = grads @ c + 0.5 * L * float(c @ c)
    return solve_simplex_qp(grads[:, cols].T, b=b, L=L)


def is_L_stationary(p, x, s, L, eps: float = 1e-7, max_supports: int = MAX_SUPPORTS) -> bool:
    """True iff ``theta_L(p, x, s, L) > -eps``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return theta_L(p, x, s, L, max_supports=max_supports).theta > -eps


def is_pareto_stationary(p, x, s, eps: float = 1e-7, max_supports: int = MAX_SUPPORTS) -> bool:
    """True iff ``theta_feasible(p, x, s) > -eps``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return theta_feasible(p, x, s, max_supports=max_supports).theta > -eps
