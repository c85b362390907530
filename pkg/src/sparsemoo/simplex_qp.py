"""Exact solver for the min-max direction subproblem via its simplex dual.

The primal problem over a free coordinate block is

    min_d  max_j ( g_j^T d + b_j ) + (L/2) ||d||^2

with columns ``g_j`` collected in ``G`` and affine offsets ``b_j`` coming
from coordinates whose value is fixed.  Its Lagrangian dual is the simplex
QP

    min_{lambda in Delta_m}  q(lambda) = (1/(2L)) ||G lambda||^2 - b^T lambda

and the primal optimum is recovered as ``d = -(1/L) G lambda*`` with value
``theta = -q(lambda*)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

# Duality-gap certificate target for the face-enumeration / projected
# gradient paths.
GAP_TOL = 1e-9


@dataclass(frozen=True)
class DirectionSolution:
    """Optimal direction, simplex weights and min-max value of one subproblem.

    ``d`` spans whatever coordinate block the caller handed in: the free
    block for :func:`solve_simplex_qp`, the full space for the wrappers in
    :mod:`sparsemoo.directions`.
    """

    d: np.ndarray
    lam: np.ndarray
    theta: float


def project_onto_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of ``v`` onto the unit simplex (sort-based)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    rho = np.nonzero(u * np.arange(1, v.size + 1) > css)[0][-1]
    tau = css[rho] / (rho + 1.0)
    return np.maximum(v - tau, 0.0)


def _primal_value(G, b, L, d):
    return float(np.max(G.T @ d + b) + 0.5 * L * float(d @ d))


def _dual_value(G, b, lam, L):
    Gl = G @ lam
    return float(Gl @ Gl) / (2.0 * L) - float(b @ lam)


def _solve_m2(G, b, L):
    # 1-D quadratic in t = lambda_1 on [0, 1]; lambda = (t, 1 - t).
    g1, g2 = G[:, 0], G[:, 1]
    u = g1 - g2
    uu = float(u @ u)
    g2u = float(g2 @ u)
    if uu > 0.0:
        t = min(1.0, max(0.0, (L * (b[0] - b[1]) - g2u) / uu))
    elif b[0] > b[1]:
        t = 1.0
    elif b[0] < b[1]:
        t = 0.0
    else:
        t = 0.5
    return np.array([t, 1.0 - t])


def _solve_faces(G, b, L):
    # The optimal lambda* has some active face A = supp(lambda*); on that
    # face it satisfies the equality-constrained KKT system, so enumerating
    # all faces and keeping the best feasible stationary point is exact.
    m = G.shape[1]
    H = (G.T @ G) / L
    ones = np.ones(m)
    best = None
    best_q = np.inf
    for size in range(1, m + 1):
        for face in itertools.combinations(range(m), size):
            idx = list(face)
            if size == 1:
                lam_face = np.array([1.0])
            else:
                kkt = np.zeros((size + 1, size + 1))
                kkt[:size, :size] = H[np.ix_(idx, idx)]
                kkt[:size, size] = 1.0
                kkt[size, :size] = 1.0
                rhs = np.append(b[idx], 1.0)
                try:
                    sol = np.linalg.solve(kkt, rhs)
                except np.linalg.LinAlgError:
                    sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
                lam_face = sol[:size]
                if np.any(lam_face < -1e-10):
                    continue
                if abs(lam_face.sum() - 1.0) > 1e-8:
                    continue
            lam = np.zeros(m)
            lam[idx] = np.clip(lam_face, 0.0, None)
            lam /= lam.sum()
            q = lam @ H @ lam / 2.0 - float(b @ lam)
            if q < best_q - 1e-15:
                best_q = q
                best = lam
    return best


def _solve_projected_gradient(G, b, L, lam0=None, tol=GAP_TOL, max_iter=200_000):
    # Frank-Wolfe gap lam@grad - min_j grad_j certifies the distance to the
    # dual optimum by convexity of q.
    m = G.shape[1]
    H = (G.T @ G) / L
    step = 1.0 / max(np.linalg.eigvalsh(H).max(), 1e-12)
    lam = np.full(m, 1.0 / m) if lam0 is None else lam0.copy()
    for _ in range(max_iter):
        grad = H @ lam - b
        gap = float(lam @ grad) - float(grad.min())
        if gap <= tol:
            break
        lam = project_onto_simplex(lam - step * grad)
    return lam


def solve_simplex_qp(G: np.ndarray, b: np.ndarray | None = None, L: float = 1.0) -> DirectionSolution:
    """Globally minimize ``max_j (g_j^T d + b_j) + (L/2)||d||^2`` over ``d``.

    Parameters
    ----------
    G : (k, m) array
        One column per objective: the gradients restricted to the free
        coordinates (``k`` may be 0 when every coordinate is fixed).
    b : (m,) array, optional
        Affine offsets from the fixed coordinates; defaults to zero.
    L : float
        Curvature of the quadratic term, strictly positive.

    The dual is solved exactly: closed form for m <= 2, active-face
    enumeration for m <= 4, and projected gradient with a duality-gap
    certificate below ``1e-9`` otherwise.
    """
    G = np.atleast_2d(np.asarray(G, dtype=float))
    if G.ndim != 2:
        raise ValueError("G must be a (k, m) matrix of gradient columns")
    m = G.shape[1]
    b = np.zeros(m) if b is None else np.asarray(b, dtype=float)
    if b.shape != (m,):
        raise ValueError(f"b must have shape ({m},), got {b.shape}")
    if m < 1:
        raise ValueError("need at least one objective column")
    if not np.isfinite(G).all() or not np.isfinite(b).all() or not np.isfinite(L):
        raise ValueError("non-finite inputs to the direction subproblem")
    if L <= 0:
        raise ValueError(f"curvature L must be positive, got {L}")

    if not G.any():
        # Degenerate all-zero gradients: d = 0 is optimal for any weights.
        lam = np.full(m, 1.0 / m)
        d = np.zeros(G.shape[0])
        return DirectionSolution(d=d, lam=lam, theta=float(b.max()))

    if m == 1:
        lam = np.ones(1)
    elif m == 2:
        lam = _solve_m2(G, b, L)
    elif m <= 4:
        lam = _solve_faces(G, b, L)
        grad = (G.T @ G) @ lam / L - b
        if float(lam @ grad) - float(grad.min()) > GAP_TOL / 10.0:
            # Degenerate faces can hide the optimum from the KKT solve;
            # polish until the certificate holds.
            lam = _solve_projected_gradient(G, b, L, lam0=lam, tol=GAP_TOL / 10.0)
    else:
        lam = _solve_projected_gradient(G, b, L)

    d = -(G @ lam) / L
    theta = _primal_value(G, b, L, d)
    # Weak duality sandwich; equality certifies global optimality.
    assert theta - (-_dual_value(G, b, lam, L)) <= 1e-7 * max(1.0, abs(theta))
    return DirectionSolution(d=d, lam=lam, theta=theta)
