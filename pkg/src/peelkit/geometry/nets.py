"""Direction nets on the unit sphere and polytopes sandwiched between balls."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree

from .affine import TOL, AffineHull
from .balls import Ball
from .polytope import Hyperplane, Polytope, _build, _enumerate_dd, _enumerate_qhull, QHULL_THRESHOLD, contains_ball, inside_ball


class NetError(RuntimeError):
    pass


def cube_grid_directions(dim: int, per_edge: int) -> np.ndarray:
    """Unit vectors through the cell centers of a ``per_edge``-grid on every
    face of the cube ``[-1, 1]^dim``."""
    centers = -1.0 + (2.0 * np.arange(per_edge) + 1.0) / per_edge
    face = np.array(np.meshgrid(*([centers] * (dim - 1)), indexing="ij")).reshape(dim - 1, -1).T
    out = []
    for axis in range(dim):
        for sign in (1.0, -1.0):
            pts = np.insert(face, axis, sign, axis=1)
            out.append(pts)
    dirs = np.vstack(out)
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def covering_angle(net: np.ndarray, samples: int = 100_000, seed: int = 0) -> float:
    """Largest angle from a random unit direction to its nearest net
    direction, over ``samples`` seeded draws."""
    dim = net.shape[1]
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((samples, dim))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    chord, _ = cKDTree(net).query(X)
    return float(2.0 * np.arcsin(np.clip(chord.max() / 2.0, 0.0, 1.0)))


def grid_range(dim: int, theta: float):
    """``(lo, hi)`` grid resolutions worth trying for covering angle theta;
    ``hi`` provably covers."""
    root = math.sqrt(dim - 1)
    # atan(root / N) <= theta is needed at face centers; root / N <= sin(theta)
    # is sufficient everywhere
    lo = max(1, math.ceil(root / math.tan(theta) - 1e-12) - 1)
    hi = max(lo, math.ceil(root / math.sin(theta) - 1e-12))
    return lo, hi


@lru_cache(maxsize=64)
def _net_level(dim: int, theta: float, samples: int, seed: int) -> int:
    lo, hi = grid_range(dim, theta)
    for per_edge in range(lo, hi):
        if covering_angle(cube_grid_directions(dim, per_edge), samples, seed) <= theta:
            return per_edge
    return hi


def sphere_net(dim: int, theta: float, samples: int = 100_000, seed: int = 0) -> np.ndarray:
    """Unit directions in R^dim such that every unit vector is within angle
    ``theta`` of one of them.

    The cube-face grid is refined until a seeded sampling check passes; the
    finest grid tried satisfies the covering bound outright.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if not 0 < theta < math.pi / 2:
        raise ValueError("theta must lie in (0, pi/2)")
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    return cube_grid_directions(dim, _net_level(int(dim), float(theta), int(samples), int(seed)))


def tangent_hyperplanes(center, r_inner: float, net: np.ndarray) -> list:
    """Tangent planes to the ball ``B(center, r_inner)`` at the net
    directions, sorted lexicographically by normal."""
    center = np.asarray(center, dtype=float)
    order = np.lexsort(net.T[::-1])
    net = net[order]
    offsets = net @ center + r_inner
    return [Hyperplane(u, c) for u, c in zip(net, offsets)]


def sandwich_polytope(center, r_inner: float, r_outer: float, dim: int,
                      tol: float = TOL, samples: int = 100_000, seed: int = 0) -> Polytope:
    """Polytope D with ``B(center, r_inner) ⊆ D ⊆ B(center, r_outer)``.

    D is cut out by the tangent planes of the inner ball at a direction net
    with covering angle ``arccos(r_inner / r_outer)``.
    """
    center = np.asarray(center, dtype=float).reshape(-1)
    if center.size != dim:
        raise ValueError("center dimension does not match dim")
    if not 0 < r_inner < r_outer:
        raise ValueError("need 0 < r_inner < r_outer")
    theta = math.acos(r_inner / r_outer)
    if dim == 1:
        levels = [None]
    else:
        start = _net_level(dim, theta, samples, seed)
        levels = range(start, max(start, grid_range(dim, theta)[1]) + 1)
    # sampling can miss the worst direction; refine until the vertices certify
    for level in levels:
        net = sphere_net(1, theta) if level is None else cube_grid_directions(dim, level)
        D = _tangent_polytope(center, r_inner, r_outer, net, tol)
        if inside_ball(D, Ball(center, r_outer), tol):
            break
    else:
        raise NetError("net construction failure: polytope leaves the outer ball")
    if not contains_ball(D, Ball(center, r_inner), tol):
        raise NetError("net construction failure: inner ball not contained")
    return D


def _tangent_polytope(center, r_inner, r_outer, net, tol):
    planes = tangent_hyperplanes(center, r_inner, net)
    A = np.vstack([h.normal for h in planes])
    b = np.array([h.offset for h in planes])
    hull = AffineHull.full(len(center))
    if len(A) > QHULL_THRESHOLD:
        V, inc = _enumerate_qhull(A, b, center, tol)
        # every tangent plane touches the inner ball, so all rows are facets
        return _build(hull, V, A, b, tol, incidence=inc, trusted=True)
    span = r_outer * 2
    V = _enumerate_dd(A, b, center - span, center + span, tol)
    return _build(hull, V, A, b, tol)
