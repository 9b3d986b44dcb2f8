import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from peelkit.geometry import contains_points, from_vertices, min_enclosing_ball, sample_uniform
from peelkit.geometry.polytope import _chebyshev
from peelkit.peeling import (
    PeelError,
    PeelParams,
    cap_gamma,
    certify_peel,
    distance_diameter_check,
    peel,
    stage_bound,
)


def sphere_cap_plane(R, r):
    """Distance from the center to the plane through the intersection of
    |x| = R with the sphere of radius r about the boundary point (R, 0, 0),
    found by solving the two sphere equations numerically."""
    p = np.array([R, 0.0, 0.0])
    # |x|^2 = R^2 and |x - p|^2 = r^2 subtract to a linear equation in x
    a = -2 * p
    rhs = r * r - R * R - p @ p
    x1 = rhs / a[0]
    y = math.sqrt(R * R - x1 * x1)
    point = np.array([x1, y, 0.0])
    assert abs(np.linalg.norm(point) - R) < 1e-12
    assert abs(np.linalg.norm(point - p) - r) < 1e-12
    return x1


@pytest.mark.parametrize("R,rho", [(1.0, 1.0), (3.0, 1.0), (8.0, 1.0), (2.5, 0.3)])
def test_cap_gamma_matches_sphere_intersection(R, rho):
    g = cap_gamma(R, rho)
    # the ball of radius rho/2 about a boundary point reaches depth 2 g R
    depth = R - sphere_cap_plane(R, rho / 2)
    assert 2 * g * R == pytest.approx(depth, rel=1e-12)


def test_cap_gamma_rejects():
    with pytest.raises(ValueError):
        cap_gamma(1.0, 2.0)
    with pytest.raises(ValueError):
        cap_gamma(0.0, 1.0)


def test_small_polytope_is_one_piece():
    P = from_vertices([[0, 0], [1, 0], [0, 1]])
    dec = peel(P)
    assert len(dec) == 1
    assert dec.pieces[0].body is P
    assert certify_peel(P, dec).ok


def test_square_peel_structure(square3, square3_dec):
    dec = square3_dec
    R = min_enclosing_ball(square3.vertices).radius
    assert dec.radius == pytest.approx(R, rel=1e-12)
    assert dec.gamma == pytest.approx(1 / (16 * R * R), rel=1e-12)
    assert len(dec.stages) <= stage_bound(R, 1.0, dec.gamma)
    for s in dec.stages:
        assert s.cap_height == pytest.approx(2 * dec.gamma * R, rel=1e-9)
        assert s.r_outer - s.r_inner == pytest.approx(dec.gamma * R, rel=1e-9)
    stages = [pc.stage for pc in dec.pieces]
    assert stages == sorted(stages)
    assert [pc.order_index for pc in dec.pieces] == list(range(len(dec)))
    assert dec.suffix(0) is square3
    assert dec.pieces[-1].cut_plane is None


def test_square_peel_certifies(square3, square3_dec):
    cert = certify_peel(square3, square3_dec)
    assert cert.ok, cert.witnesses
    assert cert.coverage_hits == cert.coverage_samples == 10_000
    assert cert.max_radius <= 1.0


def test_pieces_are_disjoint_in_interior(square3_dec):
    # interior points of a piece lie in no other piece
    rng = np.random.default_rng(3)
    bodies = [pc.body for pc in square3_dec.pieces]
    for j in rng.choice(len(bodies), 15, replace=False):
        B = bodies[j]
        y, r = _chebyshev(B.A, B.b)
        c = B.hull.embed(y[None])
        hits = [i for i, Q in enumerate(bodies)
                if Q.residuals(Q.hull.project(c))[0] <= -r / 2]
        assert hits == [j]


def test_dropped_piece_is_caught(square3, square3_dec):
    dec = square3_dec
    k = len(dec) // 2
    bad = dataclasses.replace(dec, pieces=dec.pieces[:k] + dec.pieces[k + 1:],
                              remainders=dec.remainders[:k] + dec.remainders[k + 1:])
    cert = certify_peel(square3, bad, PeelParams(samples=20_000))
    assert not cert.ok
    assert "suffix_failure" in cert.witnesses or "uncovered_point" in cert.witnesses


def test_radius_breach_is_caught(square3, square3_dec):
    cert = certify_peel(square3, square3_dec, PeelParams(rho=0.5))
    assert not cert.piece_radii_ok
    assert cert.witnesses["oversized_piece"]["radius"] > 0.5


def test_certify_rejects_foreign_polytope(square3_dec):
    with pytest.raises(ValueError):
        certify_peel(from_vertices([[0, 0], [2, 0], [0, 2]]), square3_dec)


def test_max_stages_guard(square3):
    with pytest.raises(PeelError, match="max_stages"):
        peel(square3, PeelParams(max_stages=3))


@pytest.mark.parametrize("ell", [1, 2, 5])
def test_diameter_chain(square3_dec, ell):
    for pc in square3_dec.pieces:
        rep = distance_diameter_check(pc, ell, 2)
        assert rep.ok
        assert rep.max_l1 <= math.sqrt(2) * rep.max_l2 + 1e-9


def test_lower_dimensional_input():
    # a square sitting in a plane of R^3
    P = from_vertices([[0, 0, 1], [2, 0, 1], [2, 2, 1], [0, 2, 1]])
    dec = peel(P)
    assert all(pc.body.dim == 2 for pc in dec.pieces)
    assert certify_peel(P, dec).ok


@settings(max_examples=8)
@given(st.integers(0, 10_000), st.integers(2, 3))
def test_random_polytopes_certify(seed, dim):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((8, dim))
    R0 = min_enclosing_ball(X).radius
    P = from_vertices(X * (1.3 if dim == 2 else 1.1) / R0)
    dec = peel(P, PeelParams(samples=2000, suffix_samples=200))
    cert = certify_peel(P, dec)
    assert cert.ok, cert.witnesses


def test_remainders_split_into_piece_and_next(square3_dec):
    rng = np.random.default_rng(7)
    dec = square3_dec
    for nu in range(1, len(dec)):
        prev, piece, nxt = dec.suffix(nu - 1), dec.pieces[nu - 1].body, dec.suffix(nu)
        X = sample_uniform(prev, 300, rng)
        assert (contains_points(piece, X, 1e-9) | contains_points(nxt, X, 1e-9)).all()
        for body in (piece, nxt):
            assert contains_points(prev, body.ambient_vertices, 1e-9).all()


def test_stage_radii_follow_schedule(square3_dec):
    dec = square3_dec
    g, R = dec.gamma, dec.radius
    for st_ in dec.stages:
        s = st_.stage
        assert math.isclose(st_.r_outer, (1 - s * g) * R)
        assert math.isclose(st_.r_inner, (1 - (s + 1) * g) * R)
        assert math.isclose(st_.r_outer - st_.r_inner, g * R)
    assert dec.stages[-1].r_outer < dec.params.rho <= dec.stages[-2].r_outer
