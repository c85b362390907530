"""Benchmark problem construction and dataset ingestion.

Random biobjective quadratics with controlled conditioning, a worked 2-D
instance with known geometry, sparse logistic regression over standardized
CSV datasets, and the instance JSON round trip used by the CLI.

Randomness comes exclusively from numpy's PCG64 generator seeded through
``numpy.random.default_rng(seed)`` / ``SeedSequence``, so instances are
reproducible bit for bit for a given (n, kappa, seed) under a fixed numpy
build.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import expit

from .core import MultiObjectiveProblem

_MISSING = {"", "?", "na", "nan"}


class DataError(ValueError):
    """A dataset cell or label failed validation."""


@dataclass(frozen=True)
class QuadraticInstance:
    """Biobjective quadratic ``f_j(x) = 0.5 x^T Q_j x - c_j^T x``.

    Both matrices share the condition number ``kappa`` (eigenvalues
    geometrically spaced on [1, kappa]), so ``L(f_1) = L(f_2) = kappa``.
    """

    Q1: np.ndarray
    Q2: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    kappa: float
    seed: int

    def __post_init__(self):
        for name in ("Q1", "Q2", "c1", "c2"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.c1.size

    def problem(self) -> MultiObjectiveProblem:
        Q1, Q2, c1, c2 = self.Q1, self.Q2, self.c1, self.c2

        def ev(x):
            return np.array([
                0.5 * float(x @ (Q1 @ x)) - float(c1 @ x),
                0.5 * float(x @ (Q2 @ x)) - float(c2 @ x),
            ])

        def grad(x):
            return np.stack([Q1 @ x - c1, Q2 @ x - c2])

        return MultiObjectiveProblem(
            n=self.n, m=2, evaluate=ev, gradient=grad,
            lipschitz=np.array([self.kappa, self.kappa]),
        )


def generate_quadratic(n: int, kappa: float, seed: int) -> QuadraticInstance:
    """Random biobjective quadratic with condition number ``kappa``.

    Each ``Q_j = R D R^T`` with R the orthogonal factor of a seeded Gaussian
    matrix and D geometrically spaced on [1, kappa] (both extremes attained,
    so kappa = 1 yields the exact identity).  Linear terms are uniform on
    [-1, 1) via ``2 u - 1``.  Draw order: Gaussian for Q1, Gaussian for Q2,
    then c1, then c2, from ``default_rng(seed)``.
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    kappa = float(kappa)
    if kappa < 1:
        raise ValueError(f"condition number must be >= 1, got {kappa}")
    rng = np.random.default_rng(seed)
    mats = []
    for _ in range(2):
        A = rng.standard_normal((n, n))
        if kappa == 1.0:
            mats.append(np.eye(n))
            continue
        R, _ = np.linalg.qr(A)
        D = np.geomspace(1.0, kappa, n)
        Q = (R * D) @ R.T
        mats.append(0.5 * (Q + Q.T))  # exact symmetry
    c1 = 2.0 * rng.random(n) - 1.0
    c2 = 2.0 * rng.random(n) - 1.0
    return QuadraticInstance(Q1=mats[0], Q2=mats[1], c1=c1, c2=c2,
                             kappa=kappa, seed=int(seed))


def example_biobjective() -> MultiObjectiveProblem:
    """The worked 2-D instance: squared distances to (3, 2.5) and (1, 0.5).

    Under a cardinality bound of one, its optimal solutions sit on the first
    axis with x1 in [1, 3] (global) and on the second axis with x2 in
    [0.5, 2.5] (local).  Both gradients are 1-Lipschitz.
    """
    a1 = np.array([3.0, 2.5])
    a2 = np.array([1.0, 0.5])

    def ev(x):
        return np.array([
            0.5 * float((x - a1) @ (x - a1)),
            0.5 * float((x - a2) @ (x - a2)),
        ])

    def grad(x):
        return np.stack([x - a1, x - a2])

    return MultiObjectiveProblem(n=2, m=2, evaluate=ev, gradient=grad,
                                 lipschitz=np.array([1.0, 1.0]))


def _power_spectral_norm(R: np.ndarray, rel_tol: float = 1e-8,
                         max_iter: int = 10_000) -> float:
    """Largest eigenvalue of R^T R by power iteration (relative tolerance)."""
    n = R.shape[1]
    v = np.ones(n) / np.sqrt(n)
    lam = 0.0
    for _ in range(max_iter):
        w = R.T @ (R @ v)
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v_new = w / norm
        lam_new = float(v_new @ (R.T @ (R @ v_new)))
        if abs(lam_new - lam) <= rel_tol * max(1.0, abs(lam_new)):
            return lam_new
        lam, v = lam_new, v_new
    return lam


def logistic_problem(R: np.ndarray, t: np.ndarray) -> MultiObjectiveProblem:
    """Biobjective sparse logistic regression: mean logistic loss vs 0.5||w||^2.

    ``R`` holds one sample per row, labels ``t`` are +-1.  The loss gradient
    is ``-(1/N) sum_i t_i sigma(-t_i w^T r_i) r_i``; the cached Lipschitz
    constants are ``(||R^T R||_2 / N, 1)`` with the spectral norm obtained by
    power iteration to relative tolerance 1e-8.
    """
    R = np.asarray(R, dtype=float)
    t = np.asarray(t, dtype=float)
    if R.ndim != 2:
        raise DataError("sample matrix must be 2-D")
    N, n = R.shape
    if t.shape != (N,):
        raise DataError(f"labels must have shape ({N},), got {t.shape}")
    if not np.all(np.abs(t) == 1.0):
        raise DataError("labels must be -1 or +1")
    L1 = _power_spectral_norm(R) / N

    def ev(w):
        margins = t * (R @ w)
        return np.array([
            float(np.mean(np.logaddexp(0.0, -margins))),
            0.5 * float(w @ w),
        ])

    def grad(w):
        margins = t * (R @ w)
        g1 = -(R.T @ (t * expit(-margins))) / N
        return np.stack([g1, w])

    return MultiObjectiveProblem(n=n, m=2, evaluate=ev, gradient=grad,
                                 lipschitz=np.array([L1, 1.0]))


def load_dataset(path, label_column: str):
    """Read a numeric CSV into a standardized sample matrix and +-1 labels.

    Rows with any missing cell ('', '?', 'NA', 'NaN') are dropped and their
    count reported as a warning.  Feature columns are standardized to zero
    mean and unit population standard deviation; a constant column becomes
    all zeros (with a warning).  Labels may be {0, 1} (mapped to {-1, +1})
    or already {-1, +1}.  Any other cell content raises :class:`DataError`
    with its row and column.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, expected a header row") from None
        header = [h.strip() for h in header]
        if label_column not in header:
            raise DataError(f"{path}: no column named {label_column!r} in header")
        label_idx = header.index(label_column)
        rows = []
        dropped = 0
        for lineno, raw in enumerate(reader, start=2):
            if len(raw) != len(header):
                raise DataError(f"{path}:{lineno}: expected {len(header)} cells, got {len(raw)}")
            cells = [c.strip() for c in raw]
            if any(c.lower() in _MISSING for c in cells):
                dropped += 1
                continue
            parsed = []
            for col, cell in zip(header, cells):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise DataError(
                        f"{path}:{lineno}: non-numeric cell {cell!r} in column {col!r}"
                    ) from None
            rows.append(parsed)
    if dropped:
        warnings.warn(f"{path}: dropped {dropped} rows with missing values", stacklevel=2)
    if not rows:
        raise DataError(f"{path}: no usable rows")
    data = np.array(rows, dtype=float)
    labels = data[:, label_idx]
    feats = np.delete(data, label_idx, axis=1)

    values = set(np.unique(labels).tolist())
    if values <= {0.0, 1.0}:
        t = np.where(labels > 0.5, 1.0, -1.0)
    elif values <= {-1.0, 1.0}:
        t = labels.copy()
    else:
        raise DataError(f"{path}: labels must be in {{0,1}} or {{-1,1}}, got {sorted(values)}")

    mean = feats.mean(axis=0)
    sd = feats.std(axis=0)  # population standard deviation
    constant = sd == 0.0
    if np.any(constant):
        names = [h for h, c in zip([h for i, h in enumerate(header) if i != label_idx], constant) if c]
        warnings.warn(f"{path}: constant columns standardized to zero: {names}", stacklevel=2)
    sd_safe = np.where(constant, 1.0, sd)
    standardized = (feats - mean) / sd_safe
    standardized[:, constant] = 0.0
    return standardized, t


def save_instance(path, inst, s: int) -> None:
    """Write a quadratic instance (or the worked example) as JSON.

    Quadratic schema: ``{"type": "quadratic", "n", "kappa", "seed", "s",
    "Q1", "Q2", "c1", "c2"}`` with matrices row-major and full.  The worked
    example serializes as ``{"type": "example4", "s"}``.
    """
    path = Path(path)
    if inst == "example4":
        doc = {"type": "example4", "s": int(s)}
    else:
        doc = {
            "type": "quadratic",
            "n": inst.n,
            "kappa": inst.kappa,
            "seed": inst.seed,
            "s": int(s),
            "Q1": inst.Q1.tolist(),
            "Q2": inst.Q2.tolist(),
            "c1": inst.c1.tolist(),
            "c2": inst.c2.tolist(),
        }
    with path.open("w") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_instance(path):
    """Load an instance JSON; returns ``(problem, info dict)``.

    ``info`` carries at least ``type``, ``n``, ``s`` and ``family``.
    """
    path = Path(path)
    with path.open() as fh:
        doc = json.load(fh)
    kind = doc.get("type")
    if kind == "quadratic":
        inst = QuadraticInstance(
            Q1=np.array(doc["Q1"], dtype=float),
            Q2=np.array(doc["Q2"], dtype=float),
            c1=np.array(doc["c1"], dtype=float),
            c2=np.array(doc["c2"], dtype=float),
            kappa=float(doc["kappa"]),
            seed=int(doc["seed"]),
        )
        if inst.n != int(doc["n"]):
            raise DataError(f"{path}: n={doc['n']} does not match matrix size {inst.n}")
        return inst.problem(), {
            "type": "quadratic", "n": inst.n, "s": int(doc["s"]),
            "kappa": inst.kappa, "seed": inst.seed, "family": "quadratic",
        }
    if kind == "example4":
        p = example_biobjective()
        return p, {"type": "example4", "n": 2, "s": int(doc["s"]), "family": "quadratic"}
    raise DataError(f"{path}: unknown instance type {kind!r}")
