"""Balls and the smallest enclosing ball (move-to-front Welzl recursion)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .affine import TOL, as_points


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float
    # indices into the point set the ball was fitted to, if any
    support: tuple = field(default=())

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).reshape(-1)
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius < 0:
            raise ValueError("ball radius must be >= 0")

    @property
    def dim(self) -> int:
        return self.center.size

    def contains(self, points, tol: float = TOL) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.linalg.norm(pts - self.center, axis=1) <= self.radius + tol

    def to_json(self) -> dict:
        return {"center": self.center.tolist(), "radius": self.radius}


def _circumball(pts: np.ndarray):
    """Smallest ball having every row of ``pts`` on its boundary."""
    if len(pts) == 1:
        return pts[0].copy(), 0.0
    s0 = pts[0]
    q = (pts[1:] - s0).T
    gram = q.T @ q
    rhs = 0.5 * np.diag(gram)
    lam, *_ = np.linalg.lstsq(gram, rhs, rcond=None)
    center = s0 + q @ lam
    r2 = float(np.max(np.sum((pts - center) ** 2, axis=1)))
    return center, r2


def _mtf(pts, order, end, support, max_support):
    if support:
        center, r2 = _circumball(pts[support])
    else:
        center, r2 = None, -1.0
    best_support = list(support)
    if len(support) == max_support:
        return center, r2, best_support
    i = 0
    while i < end:
        if center is not None:
            # jump to the next point outside the current ball
            d2 = np.sum((pts[order[i:end]] - center) ** 2, axis=1)
            out = np.flatnonzero(d2 > r2 + 1e-13 * max(1.0, r2))
            if out.size == 0:
                break
            i += int(out[0])
        idx = order[i]
        center, r2, best_support = _mtf(pts, order, i, support + [idx], max_support)
        order.insert(0, order.pop(i))
        i += 1
    return center, r2, best_support


def min_enclosing_ball(points, tol: float = TOL) -> Ball:
    """Smallest ball containing ``points``.

    The radius returned is the largest distance from the computed center, so
    every input point is enclosed exactly in floating point; ``support`` lists
    the points that pin the ball (at most ``d + 1``).
    """
    raw = np.asarray(points, dtype=float)
    if raw.ndim == 2 and raw.shape[1] == 0 and len(raw):
        # hull coordinates of a single point
        return Ball(np.zeros(0), 0.0, (0,))
    pts = as_points(points)
    n, d = pts.shape
    rng = np.random.default_rng(0)
    order = [int(i) for i in rng.permutation(n)]
    center, _, support = _mtf(pts, order, n, [], d + 1)
    dist = np.linalg.norm(pts - center, axis=1)
    radius = float(dist.max())
    support = tuple(sorted(i for i in support if dist[i] >= radius - max(tol, 1e-12 * radius)))
    return Ball(center, radius, support)


def ball_is_minimal(points, ball: Ball, tol: float = TOL) -> bool:
    """Check the optimality certificate: the center lies in the convex hull of
    the support points, all of which sit on the sphere within ``tol``."""
    pts = as_points(points)
    if not ball.support:
        return ball.radius <= tol
    sup = pts[list(ball.support)]
    dist = np.linalg.norm(sup - ball.center, axis=1)
    if np.any(np.abs(dist - ball.radius) > tol):
        return False
    if len(sup) == 1:
        return ball.radius <= tol
    # barycentric weights w >= 0, sum w = 1, sup^T w = center
    lhs = np.vstack([sup.T, np.ones(len(sup))])
    rhs = np.append(ball.center, 1.0)
    w, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    if np.linalg.norm(lhs @ w - rhs) > max(tol, 1e-9) * max(1.0, ball.radius):
        return False
    return bool(np.all(w >= -1e-7))
