"""Single-point solvers: hard-thresholding descent, penalty decomposition,
their cascade, a fixed-support steepest-descent refiner and a scalarized
baseline.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from .core import (
    MultiObjectiveProblem,
    SupportSet,
    check_budget,
    is_feasible,
    l0_norm,
    project_sparse,
)
from .directions import theta_L, theta_subspace


@dataclass(frozen=True)
class ArmijoParams:
    """Backtracking line-search parameters: alpha0 * delta^h steps."""

    alpha0: float = 1.0
    delta: float = 0.5
    gamma: float = 1e-4

    def __post_init__(self):
        if self.alpha0 <= 0:
            raise ValueError("alpha0 must be positive")
        if not 0 < self.delta < 1 or not 0 < self.gamma < 1:
            raise ValueError("delta and gamma must lie in (0, 1)")


@dataclass(frozen=True)
class PenaltyParams:
    """Penalty decomposition schedule: growing tau, shrinking inner tolerance."""

    tau0: float = 1.0
    tau_growth: float = 1.5
    eps0: float = 1e-2
    eps_shrink: float = 0.9
    xy_tol: float = 1e-3

    def __post_init__(self):
        if self.tau0 <= 0 or self.eps0 <= 0 or self.xy_tol <= 0:
            raise ValueError("tau0, eps0 and xy_tol must be positive")
        if self.tau_growth <= 1:
            raise ValueError("tau_growth must exceed 1")
        if not 0 < self.eps_shrink < 1:
            raise ValueError("eps_shrink must lie in (0, 1)")


@dataclass(frozen=True)
class SolverConfig:
    """Shared solver settings.

    ``L`` is the proximal curvature used by the hard-thresholding steps; it
    should exceed every objective's gradient Lipschitz constant (a margin of
    1.1x is the usual choice, see :func:`default_config`).
    """

    L: float
    eps: float = 1e-7
    max_iter: int = 10_000
    armijo: ArmijoParams = field(default_factory=ArmijoParams)
    penalty: PenaltyParams = field(default_factory=PenaltyParams)

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError("curvature L must be positive")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


def default_config(p: MultiObjectiveProblem, family: str = "quadratic", **overrides) -> SolverConfig:
    """Config with L = 1.1 * max_j L(f_j) and family-specific penalty schedule.

    ``family='quadratic'`` uses tau growth 1.5 with inner tolerance 1e-2;
    ``family='logistic'`` uses 1.3 with 1e-5.
    """
    penalty = {
        "quadratic": PenaltyParams(tau_growth=1.5, eps0=1e-2),
        "logistic": PenaltyParams(tau_growth=1.3, eps0=1e-5),
    }.get(family)
    if penalty is None:
        raise ValueError(f"unknown problem family {family!r}")
    base = SolverConfig(L=1.1 * float(np.max(p.lipschitz)), penalty=penalty)
    return replace(base, **overrides) if overrides else base


@dataclass
class SolverTrace:
    """Recorded iterates: (point, objective vector, theta value) triples."""

    iterates: list
    status: str  # 'converged' | 'budget_exhausted'


def moiht(p: MultiObjectiveProblem, x0: np.ndarray, s: int, cfg: SolverConfig,
          max_supports: int | None = None):
    """Multi-objective iterative hard thresholding.

    Repeats ``x <- x + d`` with ``d`` a global optimum of the proximal
    subproblem (:func:`theta_L`), stopping once ``theta_L(x) > -cfg.eps`` or
    the iteration budget runs out.  Every iterate is feasible, and each step
    decreases every objective by at least
    ``0.5 * ||step||^2 * (L - L(f_j))`` when ``L`` dominates the Lipschitz
    constants.

    Returns ``(point, SolverTrace)``.
    """
    x0 = np.asarray(x0, dtype=float)
    s = check_budget(s, p.n)
    if not is_feasible(x0, s):
        raise ValueError(f"infeasible start: {l0_norm(x0)} nonzeros with s={s}")
    if cfg.L <= float(np.max(p.lipschitz)):
        warnings.warn(
            f"curvature L={cfg.L} does not exceed max Lipschitz constant "
            f"{float(np.max(p.lipschitz))}; convergence guarantees are void",
            stacklevel=2,
        )
    kw = {} if max_supports is None else {"max_supports": max_supports}
    x = x0.copy()
    trace = SolverTrace(iterates=[], status="budget_exhausted")
    fx = np.asarray(p.evaluate(x), dtype=float)
    for k in range(cfg.max_iter + 1):
        sol = theta_L(p, x, s, cfg.L, **kw)
        trace.iterates.append((x.copy(), fx.copy(), sol.theta))
        if sol.theta > -cfg.eps:
            trace.status = "converged"
            break
        if k == cfg.max_iter:
            break
        x = x + sol.d
        fnew = np.asarray(p.evaluate(x), dtype=float)
        if __debug__:
            gap = 0.5 * float(sol.d @ sol.d) * (cfg.L - p.lipschitz)
            assert np.all(fx - fnew >= gap - 1e-9), "descent lemma violated"
        fx = fnew
    return x, trace


def armijo_common(p: MultiObjectiveProblem, x: np.ndarray, d: np.ndarray,
                  theta: float, I: Iterable[int] | None, cfg: SolverConfig,
                  max_halvings: int = 50) -> float:
    """Largest step ``alpha0 * delta^h`` with sufficient decrease on every
    objective in ``I``: ``f_j(x + a d) <= f_j(x) + gamma * a * theta``.

    ``theta`` must be negative (a descent certificate); returns 0.0 if no
    step up to ``h = max_halvings`` qualifies.
    """
    if theta >= 0:
        raise ValueError("armijo_common needs a strictly negative theta")
    idx = list(range(p.m)) if I is None else sorted(set(int(j) for j in I))
    fx = np.asarray(p.evaluate(x), dtype=float)[idx]
    a = cfg.armijo.alpha0
    for _ in range(max_halvings + 1):
        fc = np.asarray(p.evaluate(x + a * d), dtype=float)[idx]
        if np.all(fc <= fx + cfg.armijo.gamma * a * theta):
            return a
        a *= cfg.armijo.delta
    return 0.0


def mosd(p: MultiObjectiveProblem, x0: np.ndarray, J, eps: float,
         cfg: SolverConfig) -> np.ndarray:
    """Steepest common descent restricted to the index set ``J``.

    Iterates Armijo steps along the ``theta_subspace`` direction until the
    subspace measure exceeds ``-eps`` or the budget runs out.  Coordinates
    off ``J`` are never touched, so zeros there stay bit-exact zeros.
    """
    x0 = np.asarray(x0, dtype=float)
    J = J if isinstance(J, SupportSet) else SupportSet.from_iterable(J, p.n)
    if not J.contains_support_of(x0):
        raise ValueError("start point has nonzeros outside the fixed support")
    x = x0.copy()
    for _ in range(cfg.max_iter):
        sol = theta_subspace(p, x, J)
        if sol.theta > -eps:
            break
        alpha = armijo_common(p, x, sol.d, sol.theta, None, cfg)
        if alpha == 0.0:
            break  # line search stalled; cannot certify further progress
        x = x + alpha * sol.d
    return x


def _penalized(p: MultiObjectiveProblem, y: np.ndarray, tau: float) -> MultiObjectiveProblem:
    """Objectives f_j(x) + (tau/2) ||x - y||^2 with matching oracles."""
    y = np.asarray(y, dtype=float)

    def ev(x, _y=y, _tau=tau):
        diff = x - _y
        return np.asarray(p.evaluate(x), dtype=float) + 0.5 * _tau * float(diff @ diff)

    def grad(x, _y=y, _tau=tau):
        return np.asarray(p.gradient(x), dtype=float) + _tau * (x - _y)

    return MultiObjectiveProblem(
        n=p.n, m=p.m, evaluate=ev, gradient=grad, lipschitz=p.lipschitz + tau
    )


_FULL_CACHE: dict = {}


def _full_support(n: int) -> SupportSet:
    if n not in _FULL_CACHE:
        _FULL_CACHE[n] = SupportSet(tuple(range(n)), n)
    return _FULL_CACHE[n]


def mospd(p: MultiObjectiveProblem, x0: np.ndarray, s: int, cfg: SolverConfig,
          full_output: bool = False):
    """Sparse penalty decomposition: alternate penalized descent and projection.

    Outer loop over a growing penalty weight tau; inside, alternate
    (i) an x-step driving x to approximate subspace stationarity for the
    penalized objectives ``f_j(x) + (tau/2)||x - y||^2`` over the full space
    and (ii) the y-step ``y = project_sparse(x, s)``, until x moves less
    than the inner tolerance.  Stops once ``||x - y|| <= xy_tol`` and
    returns ``project_sparse(x, s)`` so the output is always feasible.
    """
    x0 = np.asarray(x0, dtype=float)
    s = check_budget(s, p.n)
    if not is_feasible(x0, s):
        raise ValueError(f"infeasible start: {l0_norm(x0)} nonzeros with s={s}")
    full = _full_support(p.n)
    pen = cfg.penalty
    x = x0.copy()
    y = project_sparse(x, s)
    tau = pen.tau0
    eps_k = pen.eps0
    xy_gap = float(np.linalg.norm(x - y))
    outer = 0
    inner_total = 0
    status = "budget_exhausted"
    # tau guard keeps the penalized Lipschitz constants representable.
    for outer in range(1, min(cfg.max_iter, 1000) + 1):
        for _ in range(100):  # inner alternation cap per tau (warm started)
            inner_total += 1
            x_new = mosd(_penalized(p, y, tau), x, full, eps_k, cfg)
            y = project_sparse(x_new, s)
            moved = float(np.linalg.norm(x_new - x))
            x = x_new
            if moved < eps_k:
                break
        xy_gap = float(np.linalg.norm(x - y))
        if xy_gap <= pen.xy_tol:
            status = "converged"
            break
        tau *= pen.tau_growth
        eps_k *= pen.eps_shrink
        if tau > 1e14:
            break
    out = project_sparse(x, s)
    if full_output:
        info = {
            "status": status,
            "outer_iterations": outer,
            "inner_iterations": inner_total,
            "xy_gap": xy_gap,
            "x_unprojected": x,
            "tau_final": tau,
        }
        return out, info
    return out


def mohyb(p: MultiObjectiveProblem, x0: np.ndarray, s: int, cfg: SolverConfig,
          full_output: bool = False):
    """Penalty decomposition followed by hard-thresholding descent.

    The second stage starts from the first stage's output, so whenever it
    converges the result is L-stationary within ``cfg.eps``.
    """
    if full_output:
        x1, info1 = mospd(p, x0, s, cfg, full_output=True)
        x2, trace = moiht(p, x1, s, cfg)
        info = {
            "mospd": info1,
            "moiht_iterations": len(trace.iterates) - 1,
            "status": trace.status,
        }
        return x2, info
    x1 = mospd(p, x0, s, cfg)
    x2, _ = moiht(p, x1, s, cfg)
    return x2


def default_lambda_grid(n: int) -> np.ndarray:
    """The 2n-point trade-off grid {2^(i + 1/2) : i = -n, ..., n-1}."""
    return 2.0 ** (np.arange(-n, n, dtype=float) + 0.5)


def scalarize(p: MultiObjectiveProblem, lam: float) -> MultiObjectiveProblem:
    """Single-objective problem f_1 + lam * f_2 (requires m = 2)."""
    if p.m != 2:
        raise ValueError("scalarization is defined for biobjective problems")

    def ev(x, _lam=lam):
        f = np.asarray(p.evaluate(x), dtype=float)
        return np.array([f[0] + _lam * f[1]])

    def grad(x, _lam=lam):
        g = np.asarray(p.gradient(x), dtype=float)
        return (g[0] + _lam * g[1])[None, :]

    lip = np.array([float(p.lipschitz[0] + lam * p.lipschitz[1])])
    return MultiObjectiveProblem(n=p.n, m=1, evaluate=ev, gradient=grad, lipschitz=lip)


def scalarized_iht(p: MultiObjectiveProblem, s: int, lambda_grid, x0: np.ndarray,
                   cfg: SolverConfig) -> list:
    """Single-objective hard thresholding on f_1 + lam f_2 for each lam.

    Each run uses curvature 1.1 * (L(f_1) + lam L(f_2)); returns one point
    per grid value, in grid order.  ``cfg.L`` is ignored in favor of the
    per-lambda curvature.
    """
    if p.m != 2:
        raise ValueError("scalarized_iht requires a biobjective problem")
    out = []
    for lam in np.asarray(lambda_grid, dtype=float):
        sp = scalarize(p, float(lam))
        cfg_lam = replace(cfg, L=1.1 * float(sp.lipschitz[0]))
        x, _ = moiht(sp, x0, s, cfg_lam)
        out.append(x)
    return out
