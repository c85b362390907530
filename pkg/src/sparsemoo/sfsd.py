"""Front approximation over per-support archives.

Phase one turns multi-start solver outputs into (point, super support)
pairs; phase two sweeps the archive with common and partial descent steps,
comparing points only within the same support key so each subspace develops
its own mutually nondominated slice of the front.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import (
    MultiObjectiveProblem,
    SupportSet,
    check_budget,
    dominates,
    is_feasible,
    l0_norm,
    project_sparse,
    super_supports,
    support,
)
from .directions import theta_feasible, theta_subspace
from .solvers import (
    SolverConfig,
    armijo_common,
    default_config,
    default_lambda_grid,
    mohyb,
    moiht,
    mosd,
    mospd,
    scalarized_iht,
)

# Steps are only attempted when the descent certificate clears this bar;
# below it a direction is numerically indistinguishable from stationarity.
THETA_TOL = 1e-10
DEDUPE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ArchiveEntry:
    """One archive row: a point, its super support key both stored immutably,
    and the cached objective vector."""

    x: np.ndarray
    J: SupportSet
    fvals: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).copy()
        f = np.asarray(self.fvals, dtype=float).copy()
        x.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "fvals", f)
        assert self.J.contains_support_of(x), "point leaves its support key"


class ParetoArchive:
    """Entries grouped by super support key, mutually nondominated per key."""

    def __init__(self):
        self._groups: dict = {}

    @classmethod
    def from_entries(cls, entries, dedupe_tol: float = DEDUPE_TOL) -> "ParetoArchive":
        """Build an archive, dropping per-key dominated entries and duplicates."""
        archive = cls()
        grouped: dict = {}
        for e in entries:
            grouped.setdefault(e.J, []).append(e)
        for J in sorted(grouped):
            group = grouped[J]
            F = np.array([e.fvals for e in group])
            keep = set(filter_nondominated(F).tolist())
            for i, e in enumerate(group):
                if i in keep:
                    archive.insert(e, skip_if_dominated=True, dedupe_tol=dedupe_tol)
        return archive

    def keys(self):
        return sorted(self._groups)

    def group(self, J: SupportSet) -> list:
        return list(self._groups.get(J, ()))

    def entries(self) -> list:
        out = []
        for J in self.keys():
            out.extend(self._groups[J])
        return out

    def __len__(self) -> int:
        return sum(len(g) for g in self._groups.values())

    def contains(self, entry: ArchiveEntry) -> bool:
        return any(entry is e for e in self._groups.get(entry.J, ()))

    def copy(self) -> "ParetoArchive":
        dup = ParetoArchive()
        dup._groups = {J: list(g) for J, g in self._groups.items()}
        return dup

    def state(self) -> tuple:
        """Exact byte-level snapshot used for no-change detection."""
        return tuple(
            (J.indices, tuple(e.x.tobytes() for e in self._groups[J]))
            for J in self.keys()
        )

    def remove(self, entry: ArchiveEntry):
        group = self._groups.get(entry.J)
        if group is not None:
            self._groups[entry.J] = [e for e in group if e is not entry]
            if not self._groups[entry.J]:
                del self._groups[entry.J]

    def insert(self, entry: ArchiveEntry, skip_if_dominated: bool = False,
               dedupe_tol: float = DEDUPE_TOL) -> ArchiveEntry:
        """Evict key mates strictly dominated by ``entry``, then add it.

        A point coinciding with an existing mate within ``dedupe_tol``
        (infinity norm) is not re-added; the existing entry is returned as
        the canonical one.  With ``skip_if_dominated`` the entry is dropped
        when a mate dominates it (used outside the literal sweep rule).
        """
        group = self._groups.get(entry.J, [])
        if group:
            X = np.array([m.x for m in group])
            dup = np.flatnonzero(np.max(np.abs(X - entry.x), axis=1) <= dedupe_tol)
            if dup.size:
                return group[int(dup[0])]
            F = np.array([m.fvals for m in group])
            if skip_if_dominated and bool(
                np.any(np.all(F <= entry.fvals, axis=1) & np.any(F < entry.fvals, axis=1))
            ):
                return entry
            evicted = np.all(entry.fvals <= F, axis=1) & np.any(entry.fvals < F, axis=1)
            kept = [m for m, gone in zip(group, evicted) if not gone]
        else:
            kept = []
        kept.append(entry)
        self._groups[entry.J] = kept
        assert not any(
            dominates(m.fvals, entry.fvals) for m in kept if m is not entry
        ), "inserted a dominated point"
        return entry

    def check_invariants(self, dedupe_tol: float = DEDUPE_TOL):
        """Audit per-key mutual nondomination and duplicate-freeness."""
        for J, group in self._groups.items():
            for a, b_ in itertools.combinations(group, 2):
                assert not dominates(a.fvals, b_.fvals), f"dominated pair in {J}"
                assert not dominates(b_.fvals, a.fvals), f"dominated pair in {J}"
                assert np.max(np.abs(a.x - b_.x)) > dedupe_tol, f"duplicate in {J}"


def filter_nondominated(points) -> np.ndarray:
    """Indices of objective vectors not dominated by any other vector.

    Exact duplicates are all retained (they do not dominate each other).
    """
    F = np.asarray(points, dtype=float)
    if F.size == 0:
        return np.array([], dtype=int)
    F = np.atleast_2d(F)
    n = F.shape[0]
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        le = np.all(F <= F[i], axis=1)
        lt = np.any(F < F[i], axis=1)
        le[i] = False
        if np.any(le & lt):
            keep[i] = False
    return np.flatnonzero(keep)


def crowding_distance(fvals) -> np.ndarray:
    """Per-point crowding distances of a set of objective vectors.

    For each objective the points are sorted; boundary points get infinity
    and interior points accumulate (next - prev) / (max - min).  Objectives
    with zero range contribute nothing.
    """
    F = np.atleast_2d(np.asarray(fvals, dtype=float))
    if F.shape[0] < 1:
        raise ValueError("need at least one objective vector")
    n, m = F.shape
    dist = np.zeros(n)
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable")
        col = F[order, j]
        span = col[-1] - col[0]
        if n > 2 and span > 0:
            dist[order[1:-1]] += (col[2:] - col[:-2]) / span
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
    return dist


def assign_super_support(p: MultiObjectiveProblem, x: np.ndarray, s: int,
                         eps: float = 1e-7, cfg: SolverConfig | None = None):
    """Attach a super support set to ``x``, descending first if it can move.

    A full-support point has a unique super support.  Otherwise, while the
    feasible-descent measure certifies strict descent, one Armijo step along
    the steepest feasible direction is taken (which may activate new
    coordinates); once stationary with spare room, the support is completed
    with the smallest unused indices.  Returns ``(point, SupportSet)``.
    """
    x = np.asarray(x, dtype=float)
    s = check_budget(s, p.n)
    if not is_feasible(x, s):
        raise ValueError(f"point with {l0_norm(x)} nonzeros is infeasible for s={s}")
    cfg = cfg if cfg is not None else default_config(p)
    for _ in range(1000):
        if l0_norm(x) == s:
            return x, super_supports(x, s)[0]
        sol = theta_feasible(p, x, s)
        if sol.theta > -eps:
            break
        alpha = armijo_common(p, x, sol.d, sol.theta, None, cfg)
        if alpha == 0.0:
            break
        x = x + alpha * sol.d
    taken = set(int(i) for i in support(x))
    fill = [i for i in range(p.n) if i not in taken][: s - len(taken)]
    return x, SupportSet(tuple(sorted(taken.union(fill))), p.n)


def initialize(p: MultiObjectiveProblem, s: int, strategy: str, n_starts: int,
               seed: int, box, cfg: SolverConfig | None = None,
               deadline: float | None = None) -> ParetoArchive:
    """Phase one: multi-start a single-point solver and archive the results.

    ``n_starts`` points are sampled uniformly from ``box`` (a (lo, hi) pair
    or an (n, 2) array of per-coordinate intervals), projected onto the
    sparsity set and handed to the chosen solver.  Each output is assigned
    a super support and per-key dominated entries are filtered out.

    ``strategy='scalarized'`` instead runs the deterministic trade-off grid
    of ``2n`` weights from the zero start; ``n_starts``/``seed``/``box``
    are ignored for it.  Entries with non-finite objective values are
    dropped; the archive may come out empty.

    With ``deadline`` (a ``time.monotonic()`` stamp) no new start is
    processed past the deadline; results are otherwise deterministic.
    """
    import time

    s = check_budget(s, p.n)
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    cfg = cfg if cfg is not None else default_config(p)

    if strategy == "scalarized":
        points = scalarized_iht(p, s, default_lambda_grid(p.n), np.zeros(p.n), cfg)
    elif strategy in ("moiht", "mospd", "mohyb"):
        box_arr = np.asarray(box, dtype=float)
        if box_arr.shape == (2,):
            box_arr = np.tile(box_arr, (p.n, 1))
        if box_arr.shape != (p.n, 2):
            raise ValueError("box must be a (lo, hi) pair or an (n, 2) array")
        rng = np.random.default_rng(seed)
        starts = box_arr[:, 0] + (box_arr[:, 1] - box_arr[:, 0]) * rng.random((n_starts, p.n))
        points = []
        for i in range(n_starts):
            if deadline is not None and time.monotonic() > deadline:
                break
            x0 = project_sparse(starts[i], s)
            if strategy == "moiht":
                x, _ = moiht(p, x0, s, cfg)
            elif strategy == "mospd":
                x = mospd(p, x0, s, cfg)
            else:
                x = mohyb(p, x0, s, cfg)
            points.append(x)
    else:
        raise ValueError(f"unknown initialization strategy {strategy!r}")

    entries = []
    for x in points:
        if not np.all(np.isfinite(x)):
            continue
        fx = np.asarray(p.evaluate(x), dtype=float)
        if not np.all(np.isfinite(fx)):
            continue
        x_assigned, J = assign_super_support(p, x, s, cfg.eps, cfg)
        entries.append(ArchiveEntry(x=x_assigned, J=J, fvals=p.evaluate(x_assigned)))
    return ParetoArchive.from_entries(entries)


def _objective_subsets(m: int):
    """Nonempty proper subsets of {0..m-1}: increasing cardinality, lex order."""
    for size in range(1, m):
        yield from itertools.combinations(range(m), size)


def _explore_allowed(group, entry: ArchiveEntry, mode: str) -> bool:
    if mode == "off":
        return True
    if mode not in ("mean", "quantile"):
        raise ValueError(f"unknown crowding mode {mode!r}")
    F = np.array([e.fvals for e in group])
    dist = crowding_distance(F)
    pos = next(i for i, e in enumerate(group) if e is entry)
    if not np.isfinite(dist[pos]):
        return True  # boundary points always explored
    finite = dist[np.isfinite(dist)]
    if finite.size == 0:
        return True
    # Threshold over the finite distances (the boundary infinities would
    # make any mean infinite).  Points at or below the bar are skipped: on
    # symmetric fronts all interior distances tie, and exploring ties would
    # double the archive every sweep.
    bar = float(np.mean(finite)) if mode == "mean" else float(np.median(finite))
    return dist[pos] > bar + 1e-12


def _exploration_step(p, z_entry: ArchiveEntry, d: np.ndarray, mates,
                      cfg: SolverConfig, spacing: float, max_halvings: int = 50):
    """Largest alpha0*delta^h step beating every key mate on some objective.

    With ``spacing > 0`` a candidate is also rejected when its objective
    vector lands within ``spacing`` of some mate's, measured per objective
    relative to the key's current objective ranges; this saturates the
    otherwise unbounded dyadic fill-in of the front.  Returns
    ``(alpha, point, fvals)`` or ``(0.0, None, None)`` when every candidate
    fails (the step is then skipped entirely).
    """
    mate_F = np.array([m.fvals for m in mates])
    if spacing > 0.0 and mate_F.shape[0] > 1:
        scale = mate_F.max(axis=0) - mate_F.min(axis=0)
        scale[scale <= 0.0] = np.inf  # flat objective: no spacing constraint
    else:
        scale = None
    a = cfg.armijo.alpha0
    for _ in range(max_halvings + 1):
        cand = z_entry.x + a * d
        fc = np.asarray(p.evaluate(cand), dtype=float)
        if np.all(np.any(fc < mate_F, axis=1)):
            if scale is None or not bool(
                np.any(np.all(np.abs(fc - mate_F) / scale <= spacing, axis=1))
            ):
                return a, cand, fc
        a *= cfg.armijo.delta
    return 0.0, None, None


def sfsd_run(p: MultiObjectiveProblem, archive0: ParetoArchive, s: int,
             cfg: SolverConfig, budget: int, crowding: str = "mean",
             final_eps: float = 1e-4, explore_spacing: float = 5e-3,
             deadline: float | None = None) -> ParetoArchive:
    """Phase two: front steepest descent over per-support archives.

    Runs up to ``budget`` sweeps.  Per entry still present in the working
    archive: a common descent step in its subspace (Armijo on the
    ``theta_subspace`` direction when the measure is negative), insertion of
    the new point with eviction of strictly dominated key mates; then, for
    each proper objective subset with a negative partial measure and while
    the point survives, an exploration step accepted when the candidate
    beats every key mate on some objective.  Exploration is skipped for
    points whose crowding distance falls below the key's mean (``crowding``:
    'off' | 'mean' | 'quantile').

    ``explore_spacing`` keeps exploration from tiling the front at ever
    finer resolution: candidates landing within that relative distance of
    an existing mate (per objective, scaled by the key's objective ranges)
    are rejected, so the archive saturates and the no-change detection can
    stop early.  0 restores the literal acceptance rule.

    After the sweeps a refinement pass drives every surviving entry to
    subspace stationarity within ``final_eps`` and re-filters each key, so
    final entries satisfy the subspace optimality test at that tolerance.
    """
    import time

    s = check_budget(s, p.n)
    work = archive0.copy()
    prev = work.state()
    for _ in range(budget):
        if deadline is not None and time.monotonic() > deadline:
            break
        for entry in work.entries():
            if not work.contains(entry):
                continue  # evicted earlier in this sweep
            _process_entry(p, work, entry, cfg, crowding, explore_spacing)
        cur = work.state()
        if cur == prev:
            break
        prev = cur
    _refine_archive(p, work, cfg, final_eps)
    if __debug__:
        work.check_invariants()
        assert all(is_feasible(e.x, s) for e in work.entries())
    return work


def _process_entry(p, work: ParetoArchive, entry: ArchiveEntry, cfg: SolverConfig,
                   crowding: str, explore_spacing: float):
    sol = theta_subspace(p, entry.x, entry.J)
    alpha = 0.0
    if sol.theta < -THETA_TOL:
        alpha = armijo_common(p, entry.x, sol.d, sol.theta, None, cfg)
    if alpha > 0.0:
        z = entry.x + alpha * sol.d
        fz = np.asarray(p.evaluate(z), dtype=float)
        assert np.all(fz <= entry.fvals), "common step increased an objective"
        z_entry = work.insert(ArchiveEntry(x=z, J=entry.J, fvals=fz))
    else:
        z_entry = entry
    if not work.contains(z_entry):
        return
    if not _explore_allowed(work.group(entry.J), z_entry, crowding):
        return
    for I in _objective_subsets(p.m):
        if not work.contains(z_entry):
            break
        solI = theta_subspace(p, z_entry.x, entry.J, I)
        if solI.theta >= -THETA_TOL:
            continue
        alpha_I, cand, fc = _exploration_step(
            p, z_entry, solI.d, work.group(entry.J), cfg, explore_spacing
        )
        if alpha_I == 0.0:
            continue
        work.insert(ArchiveEntry(x=cand, J=entry.J, fvals=fc))


def _refine_archive(p, work: ParetoArchive, cfg: SolverConfig, final_eps: float):
    for entry in work.entries():
        if not work.contains(entry):
            continue
        if theta_subspace(p, entry.x, entry.J).theta > -final_eps:
            continue
        x_new = mosd(p, entry.x, entry.J, final_eps, cfg)
        work.remove(entry)
        work.insert(
            ArchiveEntry(x=x_new, J=entry.J, fvals=p.evaluate(x_new)),
            skip_if_dominated=True,
        )
