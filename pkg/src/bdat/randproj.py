"""Seeded orthonormal random projection (the cancelable transform).

A key is fully determined by ``(seed, d, k)``: the seed feeds numpy's PCG64
bit generator through ``SeedSequence`` (``numpy.random.default_rng(seed)``),
which draws a ``k x d`` standard-normal matrix; its rows are then
orthonormalized with modified Gram-Schmidt. Projection multiplies by those
rows and rescales by ``sqrt(d / k)`` so that Euclidean distances are kept on
average rather than shrunk by ``sqrt(k / d)``. Only the seed and the two sizes
are ever stored; the matrix is rebuilt on demand and is bit-exact across runs
with the same numpy bit generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ORTHO_TOL = 1e-9
DEGENERATE_NORM = 1e-12


@dataclass(frozen=True)
class ProjectionKey:
    seed: int
    d: int
    k: int
    rows: np.ndarray

    @property
    def scale(self) -> float:
        """Distance-preserving gain applied after the orthonormal rows."""
        return float(np.sqrt(self.d / self.k))

    def project(self, v) -> np.ndarray:
        return project(self, v)


def _orthonormalize(rows: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Modified Gram-Schmidt, in place. Rows that collapse are redrawn from ``rng``."""
    k, d = rows.shape
    for i in range(k):
        while True:
            v = rows[i]
            for j in range(i):
                v -= (rows[j] @ v) * rows[j]
            norm = np.linalg.norm(v)
            if norm >= DEGENERATE_NORM:
                rows[i] = v / norm
                break
            rows[i] = rng.standard_normal(d)
    return rows


def _max_offdiag(rows: np.ndarray) -> float:
    gram = rows @ rows.T
    return float(np.max(np.abs(gram - np.eye(rows.shape[0]))))


def gen_matrix(seed: int, d: int, k: int) -> ProjectionKey:
    """Build the projection key for ``seed`` mapping ``d`` features to ``k``."""
    if d < 1 or k < 1:
        raise ValueError(f"dimensions must be positive, got d={d}, k={k}")
    if k > d:
        raise ValueError(f"cannot orthogonalize k={k} rows in d={d} dimensions")
    rng = np.random.default_rng(seed)
    rows = rng.standard_normal((k, d))
    _orthonormalize(rows, rng)
    if _max_offdiag(rows) > ORTHO_TOL:
        _orthonormalize(rows, rng)
    rows.setflags(write=False)
    return ProjectionKey(seed=int(seed), d=d, k=k, rows=rows)


def project(key: ProjectionKey, v) -> np.ndarray:
    """Cancelable template ``sqrt(d/k) * rows @ v``.

    Accepts a single vector of length ``d`` or a stack of them (``N x d``).
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape[-1] != key.d:
        raise ValueError(f"expected vectors of dimension {key.d}, got {v.shape[-1]}")
    return (v @ key.rows.T) * key.scale
