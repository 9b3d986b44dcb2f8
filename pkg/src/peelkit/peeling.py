"""Peeling a polytope into small pieces whose suffix unions stay convex.

The construction shrinks a family of concentric balls around the center of
the smallest enclosing ball.  Stage ``s`` builds a polytope sandwiched
between radii ``(1 - (s+1)g) R`` and ``(1 - s g) R`` and cuts the running
remainder with each of its facet planes in turn; every far side becomes a
piece.  Pieces are caps of height ``2 g R`` of a ball, which fit in a ball of
radius ``rho / 2`` when ``g = rho^2 / (16 R^2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .geometry import (
    Ball,
    Hyperplane,
    Polytope,
    cut,
    min_enclosing_ball,
    sample_uniform,
    scale,
    tangent_hyperplanes,
)
from .geometry.nets import _tangent_polytope, cube_grid_directions, grid_range, sphere_net


class PeelError(RuntimeError):
    pass


@dataclass(frozen=True)
class PeelParams:
    rho: float = 1.0
    tol: float = 1e-9
    max_stages: int = 1_000_000
    seed: int = 0
    samples: int = 10_000
    suffix_samples: int = 1_000

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_stages < 1:
            raise ValueError("max_stages must be >= 1")
        if self.samples < 0 or self.suffix_samples < 0:
            raise ValueError("sample counts must be nonnegative")

    def to_json(self) -> dict:
        return {"rho": self.rho, "tol": self.tol, "max_stages": self.max_stages,
                "seed": self.seed, "samples": self.samples,
                "suffix_samples": self.suffix_samples}

    @classmethod
    def from_json(cls, data: dict) -> "PeelParams":
        return cls(**{k: data[k] for k in cls.__dataclass_fields__ if k in data})


@dataclass(frozen=True, eq=False)
class PeelPiece:
    body: Polytope
    stage: int
    cut_plane: Hyperplane | None
    order_index: int


@dataclass(frozen=True)
class StageRecord:
    stage: int
    r_bound: float      # ball about the center holding the remainder on entry
    r_inner: float
    r_outer: float
    planes: int         # facets of the sandwich polytope
    cuts: int           # nonempty pieces emitted
    remainder_radius: float

    @property
    def cap_height(self) -> float:
        return self.r_bound - self.r_inner


@dataclass(frozen=True, eq=False)
class PeelDecomposition:
    source: Polytope
    params: PeelParams
    center: np.ndarray      # hull coordinates of the enclosing-ball center
    radius: float
    gamma: float
    pieces: tuple
    remainders: tuple
    stages: tuple = field(default=())
    net_level: int = 0

    @property
    def stage_radii(self) -> list:
        return [(1 - s * self.gamma) * self.radius for s in range(1, len(self.stages) + 1)]

    def __len__(self):
        return len(self.pieces)

    def suffix(self, nu: int) -> Polytope:
        """Recorded polytope equal to the union of pieces ``nu, nu+1, ...``."""
        return self.source if nu == 0 else self.remainders[nu - 1]


def cap_gamma(R: float, rho: float) -> float:
    """Shrink rate ``g`` for which the plane through the intersection of the
    bounding sphere (radius ``R``) with a sphere of radius ``rho / 2`` about a
    boundary point lies at distance ``(1 - 2g) R`` from the center."""
    if not (R > 0 and rho > 0):
        raise ValueError("R and rho must be positive")
    if rho > R:
        raise ValueError("rho must not exceed R")
    return rho * rho / (16.0 * R * R)


def stage_bound(R: float, rho: float, gamma: float) -> int:
    """Upper bound on the number of stages, ``ceil((1 - rho/R)/g) + 1``."""
    return math.ceil((1 - rho / R) / gamma) + 1


@lru_cache(maxsize=32)
def _unit_expansion(dim: int, level: int) -> float:
    # max vertex norm of the polytope tangent to the unit ball at the net
    net = cube_grid_directions(dim, level)
    D = _tangent_polytope(np.zeros(dim), 1.0, 2.0, net, 1e-12)
    return float(np.linalg.norm(D.vertices, axis=1).max())


def _certified_net(dim: int, ratio: float, tol: float):
    """Direction net whose tangent polytope about a ball of radius r stays in
    the ball of radius ``ratio * r`` (checked on the polytope's vertices)."""
    if dim == 1:
        return np.array([[1.0], [-1.0]]), 1
    theta = math.acos(1.0 / ratio)
    lo, hi = grid_range(dim, theta)
    level = lo
    while _unit_expansion(dim, level) > ratio * (1 + tol) and level < hi:
        level += 1
    return cube_grid_directions(dim, level), level


def _piece_radius(P: Polytope) -> float:
    return min_enclosing_ball(P.vertices).radius


def peel(P: Polytope, params: PeelParams | None = None) -> PeelDecomposition:
    """Decompose ``P`` into pieces ``K_1, ..., K_mu`` with each piece inside a
    ball of radius ``rho`` and every suffix union a convex polytope."""
    params = params or PeelParams()
    rho, tol = params.rho, params.tol
    ball = min_enclosing_ball(P.vertices)
    R, O = ball.radius, ball.center
    if R <= rho:
        piece = PeelPiece(P, 1, None, 0)
        return PeelDecomposition(P, params, O, R, 0.0, (piece,), (P,))
    gamma = cap_gamma(R, rho)
    expected = math.floor((1 - rho / R) / gamma) + 1
    if expected > params.max_stages:
        raise PeelError(f"stage count {expected} exceeds max_stages={params.max_stages} "
                        f"(gamma={gamma!r}, R={R!r})")
    k = P.dim
    # stage 1 has the tightest radius ratio, so its net serves every stage
    net, level = _certified_net(k, (1 - gamma) / (1 - 2 * gamma), tol)
    pieces, remainders, stages = [], [], []
    rem = P
    s = 0
    while True:
        s += 1
        r_bound = (1 - (s - 1) * gamma) * R
        r_outer = (1 - s * gamma) * R
        r_inner = (1 - (s + 1) * gamma) * R
        cuts = 0
        if np.linalg.norm(rem.vertices - O, axis=1).max() > r_inner + tol:
            planes = tangent_hyperplanes(O, r_inner, net)
            normals = np.vstack([h.normal for h in planes])
            offsets = np.array([h.offset for h in planes])
            active = np.flatnonzero((rem.vertices @ normals.T - offsets).max(axis=0) > tol)
            for idx in active:
                plane = planes[idx]
                near, far = cut(rem, plane)
                if near is rem or far is None or far.dim < k:
                    continue
                radius = _piece_radius(far)
                if radius > rho * (1 + tol):
                    raise PeelError(f"piece radius {radius!r} exceeds rho={rho!r} at stage {s}")
                pieces.append(PeelPiece(far, s, plane, len(pieces)))
                remainders.append(near)
                rem = near
                cuts += 1
        rem_radius = float(np.linalg.norm(rem.vertices - O, axis=1).max())
        stages.append(StageRecord(s, r_bound, r_inner, r_outer, len(net), cuts, rem_radius))
        if r_outer < rho:
            break
        if s >= params.max_stages:
            raise PeelError(f"stage count exceeds max_stages={params.max_stages} "
                            f"(gamma={gamma!r}, R={R!r})")
    pieces.append(PeelPiece(rem, s + 1, None, len(pieces)))
    remainders.append(rem)
    return PeelDecomposition(P, params, O, R, gamma, tuple(pieces), tuple(remainders),
                             tuple(stages), level)


# -- certification -----------------------------------------------------------


class _PieceIndex:
    """Padded ambient H-representations of a list of pieces, for batched
    membership queries.

    A query point is first routed to a candidate piece using the recorded cut
    planes (the first plane it lies beyond); membership is then decided by the
    candidate's own halfspaces.  Points the routing gets wrong fall back to a
    scan over every piece whose enclosing ball holds them.
    """

    def __init__(self, pieces, tol):
        self.tol = tol
        bodies = [pc.body for pc in pieces]
        d = bodies[0].ambient_dim
        fmax = max(1, max(len(B.A) for B in bodies))
        self.A = np.zeros((len(bodies), fmax, d))
        self.b = np.ones((len(bodies), fmax))
        self.centers = np.empty((len(bodies), d))
        self.radii = np.empty(len(bodies))
        self.cut_n = np.zeros((len(bodies), d))
        self.cut_c = np.full(len(bodies), np.inf)
        for j, B in enumerate(bodies):
            A, b = B.ambient_halfspaces()
            self.A[j, : len(A)] = A
            self.b[j, : len(b)] = b
            ball = min_enclosing_ball(B.ambient_vertices)
            self.centers[j] = ball.center
            self.radii[j] = ball.radius
            h = pieces[j].cut_plane
            if h is not None:
                hull = pieces[j].body.hull
                self.cut_n[j] = h.normal @ hull.basis
                self.cut_c[j] = h.offset + self.cut_n[j] @ hull.base
        self.groups = self._plane_groups()

    def _plane_groups(self):
        # planes sharing a normal with offsets falling as the index grows let
        # the first plane a point lies beyond be found by binary search
        cut = np.flatnonzero(np.isfinite(self.cut_c))
        if len(cut) == 0:
            return []
        normals, inv = np.unique(self.cut_n[cut], axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        groups = []
        for g, u in enumerate(normals):
            js = cut[inv == g]
            cs = self.cut_c[js]
            if np.any(np.diff(cs) > 0):
                return None
            groups.append((u, js, -cs))
        return groups

    def _route(self, X, lo, slack):
        """Index of the first piece ``j >= lo`` whose cut plane ``X`` lies
        beyond, or the last piece.  ``lo`` is per row."""
        mu = len(self.radii)
        first = np.full(len(X), mu - 1)
        if self.groups is None:
            for j in range(int(lo.min()), mu - 1):
                todo = (first == mu - 1) & (lo <= j)
                first[todo & (X @ self.cut_n[j] - self.cut_c[j] > -slack)] = j
            return first
        for u, js, negc in self.groups:
            start = np.searchsorted(js, lo)
            pos = np.maximum(np.searchsorted(negc, -(X @ u + slack), side="right"), start)
            ok = pos < len(js)
            first[ok] = np.minimum(first[ok], js[pos[ok]])
        return first

    def _member(self, X, J, slack):
        viol = np.einsum("pfd,pd->pf", self.A[J], X) - self.b[J]
        return viol.max(axis=1) <= slack

    def covered(self, X, lo=0, chunk=1 << 16):
        """Boolean mask: which rows of ``X`` lie in some piece ``j >= lo``
        (``lo`` is a scalar or one entry per row)."""
        out = np.zeros(len(X), dtype=bool)
        if len(X) == 0:
            return out
        lo = np.broadcast_to(np.asarray(lo, dtype=np.int64), (len(X),))
        slack = self.tol * max(1.0, float(np.abs(X).max()))
        for start in range(0, len(X), chunk):
            Xc, Lc = X[start:start + chunk], lo[start:start + chunk]
            hit = self._member(Xc, self._route(Xc, Lc, slack), slack)
            for i in np.flatnonzero(~hit):
                dist = np.linalg.norm(self.centers - Xc[i], axis=1)
                J = np.flatnonzero(dist <= self.radii + slack)
                J = J[J >= Lc[i]]
                if len(J):
                    hit[i] = bool(self._member(np.repeat(Xc[i:i + 1], len(J), 0), J, slack).any())
            out[start:start + chunk] = hit
        return out


@dataclass
class PeelCertificate:
    covers: bool
    coverage_samples: int
    coverage_hits: int
    piece_radii_ok: bool
    max_radius: float
    suffix_convex_ok: bool
    per_piece_reports: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.covers and self.piece_radii_ok and self.suffix_convex_ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "covers": self.covers,
            "coverage_samples": self.coverage_samples,
            "coverage_hits": self.coverage_hits,
            "piece_radii_ok": self.piece_radii_ok,
            "max_radius": self.max_radius,
            "suffix_convex_ok": self.suffix_convex_ok,
            "per_piece_reports": self.per_piece_reports,
            "witnesses": self.witnesses,
        }

    @classmethod
    def from_json(cls, data) -> "PeelCertificate":
        return cls(bool(data["covers"]), int(data["coverage_samples"]), int(data["coverage_hits"]),
                   bool(data["piece_radii_ok"]), float(data["max_radius"]),
                   bool(data["suffix_convex_ok"]), list(data.get("per_piece_reports", [])),
                   dict(data.get("witnesses", {})))


def _vertices_inside(S: Polytope, X, tol) -> np.ndarray:
    A, b = S.ambient_halfspaces()
    scale_ = max(1.0, float(np.abs(X).max()))
    ok = S.hull.distance(X) <= tol * scale_
    if len(A):
        ok &= (X @ A.T - b).max(axis=1) <= tol * scale_
    return ok


def certify_peel(P: Polytope, dec: PeelDecomposition, params: PeelParams | None = None) -> PeelCertificate:
    """Check the three decomposition properties by sampling and direct
    evaluation, independently of how ``dec`` was produced.

    Suffix convexity uses the recorded polytopes ``S_nu``: each piece lies in
    its ``S_nu``, each ``S_{nu+1}`` lies in ``S_nu`` (so all later pieces do
    too), and samples of ``S_nu`` fall in some piece ``j >= nu``.
    """
    params = params or dec.params
    tol = params.tol
    if P.ambient_dim != dec.source.ambient_dim or P.dim != dec.source.dim:
        raise ValueError("decomposition does not belong to this polytope")
    if len(P.vertices) != len(dec.source.vertices) or not np.allclose(
            np.sort(P.ambient_vertices, axis=0), np.sort(dec.source.ambient_vertices, axis=0),
            atol=1e-7):
        raise ValueError("decomposition does not belong to this polytope")
    if len(dec.pieces) == 0 or len(dec.remainders) != len(dec.pieces):
        raise ValueError("malformed decomposition")
    rng = np.random.default_rng(params.seed)
    bodies = [pc.body for pc in dec.pieces]
    index = _PieceIndex(dec.pieces, tol)
    witnesses = {}

    X = sample_uniform(P, params.samples, rng) if params.samples else np.zeros((0, P.ambient_dim))
    hit = index.covered(X)
    covers = bool(hit.all())
    if not covers:
        witnesses["uncovered_point"] = X[np.flatnonzero(~hit)[0]].tolist()

    radii = [float(r) for r in index.radii]
    bound = params.rho * (1 + tol)
    radii_ok = all(r <= bound for r in radii)
    if not radii_ok:
        j = int(np.argmax(radii))
        witnesses["oversized_piece"] = {"index": j, "radius": radii[j]}

    mu = len(bodies)
    M = params.suffix_samples
    # sample every suffix first so one batched query routes them all
    Y = np.vstack([sample_uniform(dec.suffix(nu), M, rng) for nu in range(mu)]) if M \
        else np.zeros((0, P.ambient_dim))
    got = index.covered(Y, lo=np.repeat(np.arange(mu), M)).reshape(mu, M) if M \
        else np.ones((mu, 0), dtype=bool)

    reports = []
    suffix_ok = True
    for nu in range(mu):
        S = dec.suffix(nu)
        rep = {"index": nu, "radius": radii[nu], "radius_ok": radii[nu] <= bound}
        inside = _vertices_inside(S, bodies[nu].ambient_vertices, tol)
        nested = True
        if nu + 1 < mu:
            nested = bool(_vertices_inside(S, dec.suffix(nu + 1).ambient_vertices, tol).all())
        sampled = bool(got[nu].all())
        if not sampled:
            rep["witness"] = Y[nu * M + int(np.flatnonzero(~got[nu])[0])].tolist()
        if not inside.all():
            rep["witness"] = bodies[nu].ambient_vertices[np.flatnonzero(~inside)[0]].tolist()
        rep["suffix_ok"] = bool(inside.all() and nested and sampled)
        if not rep["suffix_ok"]:
            suffix_ok = False
            witnesses.setdefault("suffix_failure", {"index": nu, "witness": rep.get("witness")})
        reports.append(rep)

    return PeelCertificate(covers, len(X), int(hit.sum()), radii_ok, float(max(radii)),
                           suffix_ok, reports, witnesses)


@dataclass(frozen=True)
class DiameterReport:
    max_l2: float
    max_l1: float
    bound_l2: float
    bound_l1: float

    @property
    def ok(self) -> bool:
        return self.max_l2 <= self.bound_l2 and self.max_l1 <= self.bound_l1


def distance_diameter_check(piece: PeelPiece, ell: int, n: int, rho: float = 1.0,
                            tol: float = 1e-9) -> DiameterReport:
    """Largest Euclidean and l1 vertex distances of ``ell`` times a piece,
    against the bounds ``2 ell rho`` and ``2 n ell rho``."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    V = scale(piece.body, ell).ambient_vertices
    diff = V[:, None, :] - V[None, :, :]
    l2 = float(np.linalg.norm(diff, axis=2).max())
    l1 = float(np.abs(diff).sum(axis=2).max())
    slack = 1 + tol
    return DiameterReport(l2, l1, 2 * ell * rho * slack, 2 * n * ell * rho * slack)
