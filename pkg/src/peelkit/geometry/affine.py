"""Affine hulls and the coordinate maps between hull and ambient space."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL = 1e-9


def as_points(points, dim=None) -> np.ndarray:
    """Coerce ``points`` to a finite ``(n, d)`` float array."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("expected a nonempty list of points")
    if arr.shape[1] < 1:
        raise ValueError("points must have dimension >= 1")
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"inconsistent dimension: expected {dim}, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("points must be finite")
    return arr


def _canonical_signs(basis: np.ndarray) -> np.ndarray:
    # flip each row so its first non-negligible entry is positive
    out = basis.copy()
    for i, row in enumerate(out):
        nz = np.flatnonzero(np.abs(row) > 1e-12)
        if nz.size and row[nz[0]] < 0:
            out[i] = -row
    return out


@dataclass(frozen=True, eq=False)
class AffineHull:
    """Affine subspace ``base + span(basis)`` of R^d.

    ``basis`` has shape ``(k, d)`` with orthonormal rows.  ``base`` is the
    point of the subspace closest to the origin, so scaling the subspace
    about the origin only rescales ``base``.
    """

    base: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        base = np.asarray(self.base, dtype=float).reshape(-1)
        basis = np.asarray(self.basis, dtype=float).reshape(-1, base.size)
        base.setflags(write=False)
        basis.setflags(write=False)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "basis", basis)
        identity = not base.any() and _is_identity(basis)
        object.__setattr__(self, "_identity", identity)

    @property
    def ambient_dim(self) -> int:
        return self.base.size

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    @classmethod
    def full(cls, d: int) -> "AffineHull":
        return cls(np.zeros(d), np.eye(d))

    def project(self, points) -> np.ndarray:
        """Ambient points -> hull coordinates (orthogonal projection)."""
        pts = np.asarray(points, dtype=float)
        if self._identity:
            return pts.copy()
        return (pts - self.base) @ self.basis.T

    def embed(self, coords) -> np.ndarray:
        """Hull coordinates -> ambient points."""
        y = np.asarray(coords, dtype=float)
        if self._identity:
            return y.copy()
        return self.base + y @ self.basis

    def distance(self, points) -> np.ndarray:
        """Euclidean distance of ambient points from the hull."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        back = self.embed(self.project(pts))
        return np.linalg.norm(pts - back, axis=1)

    def contains(self, points, tol: float = TOL) -> np.ndarray:
        return self.distance(points) <= tol

    def scaled(self, lam: float) -> "AffineHull":
        return AffineHull(self.base * lam, self.basis)

    def to_json(self) -> dict:
        return {"base": self.base.tolist(), "basis": self.basis.tolist()}

    @classmethod
    def from_json(cls, data: dict, dim: int) -> "AffineHull":
        basis = np.asarray(data["basis"], dtype=float).reshape(-1, dim)
        return cls(np.asarray(data["base"], dtype=float), basis)


def _is_identity(m: np.ndarray) -> bool:
    return m.shape[0] == m.shape[1] and np.array_equal(m, np.eye(m.shape[0]))


def affine_hull(points, tol: float = TOL) -> AffineHull:
    """Smallest affine subspace containing ``points`` up to ``tol``.

    The rank is the smallest ``k`` for which every point lies within ``tol``
    of the best-fitting ``k``-flat through the centroid.  Full-dimensional
    inputs get the identity chart so hull and ambient coordinates agree.
    """
    pts = as_points(points)
    d = pts.shape[1]
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    scale = max(1.0, float(np.abs(pts).max()))
    if not np.any(np.abs(centered) > 0):
        return AffineHull(centroid, np.zeros((0, d)))
    _, _, vt = np.linalg.svd(centered, full_matrices=True)
    k = d
    for j in range(d + 1):
        resid = centered - (centered @ vt[:j].T) @ vt[:j]
        if np.linalg.norm(resid, axis=1).max() <= tol * scale:
            k = j
            break
    if k == d:
        return AffineHull.full(d)
    basis = _canonical_signs(vt[:k])
    base = centroid - (centroid @ basis.T) @ basis
    return AffineHull(base, basis)
