"""Dual-representation convex polytopes.

A :class:`Polytope` keeps its vertices and a minimal halfspace system in the
coordinates of its own affine hull, so every polytope is full-dimensional in
those coordinates.  Vertex enumeration and cuts share one incremental
double-description step (:func:`_split`).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError, cKDTree

from .affine import TOL, AffineHull, affine_hull, as_points

# above this many halfspaces, bulk enumeration goes through qhull
QHULL_THRESHOLD = 400


class UnboundedError(ValueError):
    """Raised when a halfspace system has a nonzero recession direction."""


class EmptyError(ValueError):
    """Raised when a halfspace system has no solution."""


@dataclass(frozen=True, eq=False)
class Halfspace:
    """The set ``{x : normal . x <= offset}`` with a unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float).reshape(-1)
        norm = np.linalg.norm(n)
        if not np.isfinite(norm) or norm == 0:
            raise ValueError("halfspace normal must be nonzero and finite")
        off = float(self.offset) / norm
        n = n / norm
        n.setflags(write=False)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", off)

    @classmethod
    def exact(cls, normal, offset):
        """Rebuild from an already normalized pair without renormalizing, so
        decoded planes match their encoding bit for bit."""
        obj = object.__new__(cls)
        n = np.array(normal, dtype=float).reshape(-1)
        if abs(np.linalg.norm(n) - 1.0) > 1e-12:
            raise ValueError("normal is not a unit vector")
        n.setflags(write=False)
        object.__setattr__(obj, "normal", n)
        object.__setattr__(obj, "offset", float(offset))
        return obj

    def to_json(self) -> dict:
        return {"normal": self.normal.tolist(), "offset": self.offset}


@dataclass(frozen=True, eq=False)
class Hyperplane(Halfspace):
    """The set ``{x : normal . x = offset}``; its near side is ``<=``."""

    def flipped(self) -> "Hyperplane":
        return Hyperplane(-self.normal, -self.offset)


def _unit_rows(A, b):
    A = np.asarray(A, dtype=float).reshape(len(b), -1)
    b = np.asarray(b, dtype=float).reshape(-1)
    norms = np.linalg.norm(A, axis=1)
    return A / norms[:, None], b / norms


def _dedupe_points(V: np.ndarray, tol: float) -> np.ndarray:
    if len(V) <= 1:
        return V
    if V.shape[1] == 0:
        return V[:1]
    scale = max(1.0, float(np.abs(V).max()))
    pairs = cKDTree(V).query_pairs(r=tol * scale * 10, output_type="ndarray")
    if len(pairs) == 0:
        return V
    keep = np.ones(len(V), dtype=bool)
    for i, j in sorted(map(tuple, pairs)):
        if keep[i] and keep[j]:
            keep[j] = False
    return V[keep]


def _affine_rank(pts: np.ndarray, tol: float) -> int:
    if len(pts) <= 1:
        return 0
    centered = pts[1:] - pts[0]
    s = np.linalg.svd(centered, compute_uv=False)
    scale = max(1.0, float(np.abs(pts).max()))
    return int(np.sum(s > tol * scale))


def _incidence_matrix(V, A, b, tol, chunk=2048):
    """Boolean ``(n_facets, n_vertices)`` matrix of tight pairs."""
    out = np.empty((len(A), len(V)), dtype=bool)
    for start in range(0, len(A), chunk):
        sl = slice(start, start + chunk)
        out[sl] = np.abs(A[sl] @ V.T - b[sl, None]) <= tol
    return out


def _facet_rows(V, A, b, tol):
    """Indices of rows of (A, b) that are facet-defining for conv(V),
    with duplicate halfspaces removed."""
    k = V.shape[1]
    if len(A) == 0:
        return np.zeros(0, dtype=int)
    tight = _incidence_matrix(V, A, b, tol)
    counts = tight.sum(axis=1)
    cand = np.flatnonzero(counts >= k)
    if k > 1 and len(cand):
        ok = np.zeros(len(cand), dtype=bool)
        scale = max(1.0, float(np.abs(V).max()))
        # batch the rank test over facets with equally many tight vertices
        for c in np.unique(counts[cand]):
            group = np.flatnonzero(counts[cand] == c)
            pts = np.stack([V[tight[f]] for f in cand[group]])
            s = np.linalg.svd(pts[:, 1:] - pts[:, :1], compute_uv=False)
            ok[group] = (s > tol * scale).sum(axis=1) >= k - 1
        cand = cand[ok]
    if len(cand) <= 1:
        return cand
    keys = np.column_stack([A[cand], b[cand]])
    pairs = cKDTree(keys).query_pairs(r=1e-7, p=np.inf, output_type="ndarray")
    keep = np.ones(len(cand), dtype=bool)
    for i, j in sorted(map(tuple, pairs)):
        if keep[i] and keep[j]:
            keep[j] = False
    return cand[keep]


def _rows(x, k: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if k == 0:
        # a point: numpy cannot infer the row count of an empty reshape
        return x.reshape(len(x) if x.ndim else 0, 0)
    return x.reshape(-1, k)


class Polytope:
    """Convex polytope in V- and H-representation.

    ``vertices`` (``(n, k)``) and the rows of ``A x <= b`` live in the
    coordinates of ``hull``; use :attr:`ambient_vertices` and
    :meth:`ambient_halfspaces` for the ambient picture.
    """

    def __init__(self, hull: AffineHull, vertices, A, b, tol: float = TOL, incidence=None):
        V = _rows(vertices, hull.dim)
        A = _rows(A, hull.dim)
        b = np.asarray(b, dtype=float).reshape(-1)
        for arr in (V, A, b):
            arr.setflags(write=False)
        self.hull = hull
        self.vertices = V
        self.A = A
        self.b = b
        self.tol = float(tol)
        if incidence is not None:
            self.__dict__["incidence"] = [np.asarray(ix, dtype=int) for ix in incidence]

    def __repr__(self):
        return (f"Polytope(dim={self.dim}, ambient={self.ambient_dim}, "
                f"vertices={len(self.vertices)}, facets={len(self.A)})")

    @property
    def dim(self) -> int:
        return self.hull.dim

    @property
    def ambient_dim(self) -> int:
        return self.hull.ambient_dim

    @property
    def halfspaces(self) -> list:
        return [Halfspace(a, c) for a, c in zip(self.A, self.b)]

    @cached_property
    def ambient_vertices(self) -> np.ndarray:
        return self.hull.embed(self.vertices)

    def ambient_halfspaces(self):
        """``(A, b)`` in ambient coordinates (valid on the affine hull)."""
        A = self.A @ self.hull.basis
        b = self.b + A @ self.hull.base
        return A, b

    @cached_property
    def incidence(self) -> list:
        tight = _incidence_matrix(self.vertices, self.A, self.b, self.tol * 10)
        return [np.flatnonzero(row) for row in tight]

    def residuals(self, coords) -> np.ndarray:
        """``max_i (a_i . y - b_i)`` for hull-coordinate points ``y``."""
        Y = np.atleast_2d(np.asarray(coords, dtype=float))
        if len(self.A) == 0:
            return np.zeros(len(Y))
        return (Y @ self.A.T - self.b).max(axis=1)

    def bounding_box(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def validate(self, tol=None) -> None:
        """Raise ``AssertionError`` if a representation invariant fails."""
        tol = self.tol * 10 if tol is None else tol
        k = self.dim
        assert len(self.vertices) >= 1
        assert np.all(np.isfinite(self.vertices))
        if k == 0:
            return
        assert np.allclose(np.linalg.norm(self.A, axis=1), 1.0, atol=tol)
        assert np.all(self.residuals(self.vertices) <= tol), "vertex violates a halfspace"
        assert _affine_rank(self.vertices, tol) == k, "not full-dimensional in its hull"
        for f, ix in enumerate(self.incidence):
            assert len(ix) >= k, f"facet {f} has too few vertices"
            assert _affine_rank(self.vertices[ix], tol) == k - 1, f"facet {f} is not a facet"
        if k > 1:
            for v in range(len(self.vertices)):
                tight = [f for f, ix in enumerate(self.incidence) if v in ix]
                assert np.linalg.matrix_rank(self.A[tight], tol=1e-9) == k, f"vertex {v} not extreme"


def _build(hull, V, A, b, tol, incidence=None, trusted=False):
    """Assemble a polytope from (possibly redundant) data in hull coords;
    falls back to :func:`from_vertices` when the point set is degenerate."""
    V = _dedupe_points(np.asarray(V, dtype=float).reshape(-1, hull.dim), tol)
    k = hull.dim
    if len(V) == 0:
        return None
    if k == 0:
        return Polytope(hull, V[:1], np.zeros((0, 0)), np.zeros(0), tol)
    if len(V) < k + 1 or _affine_rank(V, tol) < k:
        return from_vertices(hull.embed(V), tol)
    if not trusted:
        rows = _facet_rows(V, A, b, tol * 10)
        A, b = A[rows], b[rows]
    return Polytope(hull, V, A, b, tol, incidence)


def from_vertices(points, tol: float = TOL) -> Polytope:
    """Convex hull of a finite point set, in its own affine hull."""
    pts = as_points(points)
    hull = affine_hull(pts, tol)
    Y = hull.project(pts)
    k = hull.dim
    if k == 0:
        return Polytope(hull, np.zeros((1, 0)), np.zeros((0, 0)), np.zeros(0), tol)
    if k == 1:
        lo, hi = float(Y[:, 0].min()), float(Y[:, 0].max())
        return Polytope(hull, [[lo], [hi]], [[-1.0], [1.0]], [-lo, hi], tol)
    Y = _dedupe_points(Y, tol)
    try:
        ch = ConvexHull(Y)
    except QhullError:
        ch = ConvexHull(Y, qhull_options="QJ")
    A, b = ch.equations[:, :-1], -ch.equations[:, -1]
    A, b = _unit_rows(A, b)
    cand = Y[np.unique(ch.vertices)]
    # drop points that are not extreme (coplanar leftovers)
    rows = _facet_rows(cand, A, b, tol * 10)
    A, b = A[rows], b[rows]
    tight = _incidence_matrix(cand, A, b, tol * 10)
    keep = [i for i in range(len(cand)) if np.linalg.matrix_rank(A[tight[:, i]], tol=1e-9) == k]
    V = cand[keep]
    rows = _facet_rows(V, A, b, tol * 10)
    return Polytope(hull, V, A[rows], b[rows], tol)


def _split(V, A, b, a, c, tol):
    """One double-description step: split conv(V) = {A y <= b} by the plane
    ``a . y = c``.  Returns ``(near_vertices, far_vertices)``; a side that
    is empty is ``None``, and a side touching only a face returns just the
    vertices on the plane."""
    k = V.shape[1]
    s = V @ a - c
    pos = s > tol
    neg = s < -tol
    if not pos.any():
        face = V[~neg]
        return V, (face if len(face) else None)
    if not neg.any():
        face = V[~pos]
        return (face if len(face) else None), V
    M = _incidence_matrix(V, A, b, tol * 10).T  # (n_vertices, n_facets)
    Mi = M.astype(np.int32)
    P_idx = np.flatnonzero(pos)
    N_idx = np.flatnonzero(neg)
    common_counts = Mi[P_idx] @ Mi[N_idx].T
    pi, ni = np.nonzero(common_counts >= k - 1)
    new = []
    if len(pi):
        p = P_idx[pi]
        q = N_idx[ni]
        C = (M[p] & M[q]).astype(np.int32)  # (pairs, facets)
        need = C.sum(axis=1)
        adjacent = np.empty(len(p), dtype=bool)
        step = max(1, 4_000_000 // max(1, len(V) * max(1, M.shape[1])))
        for start in range(0, len(p), step):
            sl = slice(start, start + step)
            contains = (Mi @ C[sl].T) == need[sl]  # (vertices, pairs)
            adjacent[sl] = contains.sum(axis=0) == 2
        p, q = p[adjacent], q[adjacent]
        t = s[p] / (s[p] - s[q])
        new = V[p] + t[:, None] * (V[q] - V[p])
    new = np.asarray(new, dtype=float).reshape(-1, k)
    near = np.vstack([V[~pos], new])
    far = np.vstack([V[~neg], new])
    return near, far


def _bounds_lp(A, b, k, tol):
    """Check boundedness/feasibility of ``A y <= b`` and return a box."""
    if len(A) == 0:
        raise UnboundedError("unbounded: no halfspaces")
    for i in range(k):
        for sgn in (1.0, -1.0):
            cost = np.zeros(k)
            cost[i] = -sgn
            res = linprog(cost, A_ub=A, b_ub=np.zeros(len(A)), bounds=[(-1, 1)] * k,
                          method="highs")
            if res.status == 0 and -res.fun > 1e-9:
                raise UnboundedError(f"unbounded: recession direction along axis {i}")
    lo, hi = np.empty(k), np.empty(k)
    for i in range(k):
        for sgn in (1.0, -1.0):
            cost = np.zeros(k)
            cost[i] = sgn
            res = linprog(cost, A_ub=A, b_ub=b, bounds=[(None, None)] * k, method="highs")
            if res.status == 2:
                raise EmptyError("empty: halfspace system is infeasible")
            if res.status != 0:
                raise UnboundedError(f"unbounded: LP status {res.status}")
            if sgn > 0:
                lo[i] = res.fun
            else:
                hi[i] = -res.fun
    return lo, hi


def _chebyshev(A, b):
    k = A.shape[1]
    cost = np.zeros(k + 1)
    cost[-1] = -1.0
    A_ub = np.hstack([A, np.ones((len(A), 1))])
    res = linprog(cost, A_ub=A_ub, b_ub=b, bounds=[(None, None)] * k + [(0, None)],
                  method="highs")
    if res.status != 0:
        return None, 0.0
    return res.x[:k], float(res.x[-1])


def _enumerate_dd(A, b, lo, hi, tol):
    k = A.shape[1]
    margin = max(1.0, float((hi - lo).max()))
    lo, hi = lo - margin, hi + margin
    V = np.array(list(itertools.product(*zip(lo, hi))), dtype=float)
    cur_A = np.vstack([-np.eye(k), np.eye(k)])
    cur_b = np.concatenate([-lo, hi])
    for a, c in zip(A, b):
        V, _ = _split(V, cur_A, cur_b, a, c, tol)
        if V is None:
            return None
        cur_A = np.vstack([cur_A, a])
        cur_b = np.append(cur_b, c)
        V = _dedupe_points(V, tol)
    return V


def _enumerate_qhull(A, b, interior, tol):
    hs = HalfspaceIntersection(np.hstack([A, -b[:, None]]), interior)
    pts = hs.intersections
    facets = hs.dual_facets
    scale = max(1.0, float(np.abs(pts).max()))
    tree = cKDTree(pts)
    pairs = tree.query_pairs(r=tol * scale * 10, output_type="ndarray")
    rep = np.arange(len(pts))
    for i, j in sorted(map(tuple, pairs)):
        ri, rj = rep[i], rep[j]
        while rep[ri] != ri:
            ri = rep[ri]
        while rep[rj] != rj:
            rj = rep[rj]
        if ri != rj:
            rep[max(ri, rj)] = min(ri, rj)
    for i in range(len(rep)):
        r = i
        while rep[r] != r:
            r = rep[r]
        rep[i] = r
    roots, index = np.unique(rep, return_inverse=True)
    V = pts[roots]
    incidence = [set() for _ in range(len(A))]
    for i, fs in enumerate(facets):
        for f in fs:
            incidence[f].add(int(index[i]))
    return V, [sorted(s) for s in incidence]


def from_halfspaces(halfspaces, hull: AffineHull | None = None, tol: float = TOL) -> Polytope:
    """Vertex enumeration of a bounded halfspace system given in ``hull``
    coordinates (the full ambient space when ``hull`` is None).

    ``halfspaces`` is a sequence of :class:`Halfspace`, ``(normal, offset)``
    pairs or ``{"normal": ..., "offset": ...}`` mappings.
    """
    A, b = _coerce_halfspaces(halfspaces)
    if hull is None:
        if len(A) == 0:
            raise UnboundedError("unbounded: no halfspaces")
        hull = AffineHull.full(A.shape[1])
    k = hull.dim
    if len(A) and A.shape[1] != k:
        raise ValueError(f"halfspace dimension {A.shape[1]} does not match hull dimension {k}")
    lo, hi = _bounds_lp(A, b, k, tol)
    if len(A) > QHULL_THRESHOLD:
        center, radius = _chebyshev(A, b)
        if center is not None and radius > 1e3 * tol:
            V, inc = _enumerate_qhull(A, b, center, tol)
            return _build(hull, V, A, b, tol)
    V = _enumerate_dd(A, b, lo, hi, tol)
    if V is None or len(V) == 0:
        raise EmptyError("empty: halfspace system is infeasible")
    return _build(hull, V, A, b, tol)


def _coerce_halfspaces(halfspaces):
    normals, offsets = [], []
    for h in halfspaces:
        if isinstance(h, Halfspace):
            n, c = h.normal, h.offset
        elif isinstance(h, dict):
            n, c = h["normal"], h["offset"]
        else:
            n, c = h
        n = np.asarray(n, dtype=float).reshape(-1)
        norm = np.linalg.norm(n)
        if norm == 0:
            if float(c) < 0:
                raise EmptyError("empty: constraint 0 <= negative")
            continue
        normals.append(n / norm)
        offsets.append(float(c) / norm)
    if not normals:
        return np.zeros((0, 0)), np.zeros(0)
    return np.vstack(normals), np.asarray(offsets)


def _side(P: Polytope, V, a, c, keep_near: bool):
    if V is None:
        return None
    A = np.vstack([P.A, a if keep_near else -a])
    b = np.append(P.b, c if keep_near else -c)
    return _build(P.hull, V, A, b, P.tol)


def cut(P: Polytope, h: Hyperplane):
    """Split ``P`` by a hyperplane in its hull coordinates.

    Returns ``(near, far)`` with ``near = P ∩ {n.y <= c}`` and
    ``far = P ∩ {n.y >= c}``.  A side is ``None`` when empty and may be a
    lower-dimensional polytope when the plane only touches ``P``.
    """
    a = np.asarray(h.normal, dtype=float)
    if a.size != P.dim:
        raise ValueError(f"hyperplane dimension {a.size} != polytope hull dimension {P.dim}")
    if P.dim == 0:
        s = -h.offset
        near = P if s <= P.tol else None
        far = P if s >= -P.tol else None
        return near, far
    nearV, farV = _split(P.vertices, P.A, P.b, a, h.offset, P.tol)
    near = P if nearV is P.vertices else _side(P, nearV, a, h.offset, True)
    far = P if farV is P.vertices else _side(P, farV, a, h.offset, False)
    return near, far


def clip(P: Polytope, normal, offset):
    """``P ∩ {normal . x <= offset}`` for an ambient halfspace; None if empty."""
    if P is None:
        return None
    a = P.hull.basis @ np.asarray(normal, dtype=float)
    c = float(offset) - float(np.dot(normal, P.hull.base))
    norm = np.linalg.norm(a)
    if norm <= 1e-12:
        return P if c >= -P.tol else None
    near, _ = cut(P, Hyperplane(a / norm, c / norm))
    return near


def intersect(P: Polytope, Q: Polytope):
    """``P ∩ Q`` as a polytope, or None when the intersection is empty."""
    if P.ambient_dim != Q.ambient_dim:
        raise ValueError("polytopes live in different ambient dimensions")
    A, b = Q.ambient_halfspaces()
    rows = [(a, c) for a, c in zip(A, b)]
    # the affine hull of Q as pairs of opposite halfspaces
    complement = _orthogonal_complement(Q.hull.basis, Q.ambient_dim)
    for n in complement:
        e = float(n @ Q.hull.base)
        rows.append((n, e))
        rows.append((-n, -e))
    out = P
    for a, c in rows:
        out = clip(out, a, c)
        if out is None:
            return None
    return out


def _orthogonal_complement(basis, d):
    if basis.shape[0] == d:
        return np.zeros((0, d))
    if basis.shape[0] == 0:
        return np.eye(d)
    _, _, vt = np.linalg.svd(basis, full_matrices=True)
    return vt[basis.shape[0]:]


def scale(P: Polytope, lam: float) -> Polytope:
    """Dilation of ``P`` about the ambient origin by ``lam > 0``."""
    lam = float(lam)
    if not lam > 0:
        raise ValueError("scale factor must be positive")
    inc = P.__dict__.get("incidence")
    return Polytope(P.hull.scaled(lam), P.vertices * lam, P.A, P.b * lam, P.tol, inc)


def support_function(P: Polytope, directions) -> np.ndarray:
    """``h_P(u) = max_{x in P} u . x`` for ambient directions ``u``."""
    U = np.atleast_2d(np.asarray(directions, dtype=float))
    return (U @ P.ambient_vertices.T).max(axis=1)


@dataclass(frozen=True)
class MinkowskiReport:
    ok: bool
    samples: int
    max_violation: float
    vertex_error: float


def minkowski_scaled_sum(P: Polytope, mu: int, lam: int, samples: int = 200, seed: int = 0):
    """``mu P + lam P`` for positive integers, which equals ``(mu + lam) P``.

    Returns ``(polytope, report)``; the report records a sampled check that
    sums of points of ``mu P`` and ``lam P`` land in ``(mu + lam) P`` and
    that each vertex of the result splits as ``mu v + lam v``.
    """
    for name, v in (("mu", mu), ("lambda", lam)):
        if int(v) != v or v <= 0:
            raise ValueError(f"{name} must be a positive integer")
    total = scale(P, mu + lam)
    rng = np.random.default_rng(seed)
    pa = sample_uniform(scale(P, mu), samples, rng)
    pb = sample_uniform(scale(P, lam), samples, rng)
    sums = pa + pb
    viol = float(np.max(total.residuals(total.hull.project(sums)))) if P.dim else 0.0
    viol = max(viol, float(total.hull.distance(sums).max()))
    split = mu * P.ambient_vertices + lam * P.ambient_vertices
    vertex_error = float(np.abs(split - total.ambient_vertices).max())
    tol = P.tol * (mu + lam) * max(1.0, float(np.abs(total.ambient_vertices).max()))
    ok = viol <= tol and vertex_error <= tol
    return total, MinkowskiReport(bool(ok), samples, viol, vertex_error)


def sample_uniform(P: Polytope, n: int, rng) -> np.ndarray:
    """``n`` uniform samples of ``P`` (ambient coordinates), by rejection
    from the bounding box in hull coordinates."""
    if P.dim == 0:
        return np.repeat(P.ambient_vertices[:1], n, axis=0)
    lo, hi = P.bounding_box()
    out = []
    got = 0
    batch = max(64, 2 * n)
    while got < n:
        Y = rng.uniform(lo, hi, size=(batch, P.dim))
        Y = Y[P.residuals(Y) <= 0]
        out.append(Y)
        got += len(Y)
    return P.hull.embed(np.vstack(out)[:n])


def contains_point(P: Polytope, x, tol: float | None = None) -> bool:
    tol = P.tol if tol is None else tol
    x = np.asarray(x, dtype=float).reshape(1, -1)
    if P.hull.distance(x)[0] > tol:
        return False
    return bool(P.residuals(P.hull.project(x))[0] <= tol)


def contains_points(P: Polytope, X, tol: float | None = None) -> np.ndarray:
    tol = P.tol if tol is None else tol
    X = np.atleast_2d(np.asarray(X, dtype=float))
    ok = P.hull.distance(X) <= tol
    return ok & (P.residuals(P.hull.project(X)) <= tol)


def contains_ball(P: Polytope, ball, tol: float | None = None) -> bool:
    """Ball inside ``P`` relative to the hull: every facet clears the center
    by at least the radius."""
    tol = P.tol if tol is None else tol
    if P.hull.distance(ball.center)[0] > tol:
        return False
    y = P.hull.project(ball.center.reshape(1, -1))[0]
    if P.dim == 0:
        return ball.radius <= tol
    return bool(np.all(P.A @ y + ball.radius <= P.b + tol))


def inside_ball(P: Polytope, ball, tol: float | None = None) -> bool:
    tol = P.tol if tol is None else tol
    d = np.linalg.norm(P.ambient_vertices - ball.center, axis=1)
    return bool(np.all(d <= ball.radius + tol))


def same_vertex_set(P: Polytope, Q: Polytope, tol: float = 1e-7) -> bool:
    X, Y = P.ambient_vertices, Q.ambient_vertices
    if len(X) != len(Y):
        return False
    d1, _ = cKDTree(Y).query(X)
    d2, _ = cKDTree(X).query(Y)
    return bool(max(d1.max(), d2.max()) <= tol)
