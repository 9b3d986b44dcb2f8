"""Acceptance criteria 1 to 8.

Each test appends a one-line verdict to ``VERDICTS``; conftest prints them
at the end of the run.  Run alone with ``pytest tests/test_acceptance.py``
or ``python3 tests/test_acceptance.py``.
"""
import itertools
import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from peelkit.geometry import (
    from_vertices,
    min_enclosing_ball,
    minkowski_scaled_sum,
    sandwich_polytope,
    scale,
    support_function,
)
from peelkit.lattice import (
    GradedSupport,
    NilOracle,
    brute_force_expand,
    cross_check,
    lemma1_steps,
    run_main_proof,
    simplex_polytope,
)
from peelkit.peeling import PeelParams, certify_peel, peel

VERDICTS = {}

RHO = 1.0
# (dimension, count, circumradius range); see the decisions ledger for why
# the radii stop well short of 8
CORPUS_PLAN = [(2, 20, (1.2, 2.4)), (3, 18, (1.1, 1.5)), (4, 12, (1.05, 1.2))]
TIME_BUDGET_1 = 120.0
TIME_BUDGET_7 = 60.0


def verdict(n, ok, detail):
    VERDICTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok


def make_corpus(seed=2024):
    rng = np.random.default_rng(seed)
    out = []
    for dim, count, (lo, hi) in CORPUS_PLAN:
        for _ in range(count):
            k = int(rng.integers(dim + 1, 13))
            X = rng.standard_normal((k, dim))
            ball = min_enclosing_ball(X)
            R = float(rng.uniform(lo, hi))
            out.append(from_vertices((X - ball.center) * (R / ball.radius)))
    return out


@pytest.fixture(scope="module")
def corpus():
    polys = make_corpus()
    params = PeelParams(rho=RHO, samples=10_000)
    t0 = time.perf_counter()
    decs = [peel(P, params) for P in polys]
    certs = [certify_peel(P, d, params) for P, d in zip(polys, decs)]
    return polys, decs, certs, time.perf_counter() - t0


# -- 1 --------------------------------------------------------------------------


def test_criterion_1_decomposition_conditions(corpus):
    polys, decs, certs, elapsed = corpus
    assert len(polys) >= 50
    assert all(2 <= P.dim <= 4 and len(P.vertices) <= 12 for P in polys)
    radii = [min_enclosing_ball(P.vertices).radius for P in polys]
    cover = all(c.coverage_hits == c.coverage_samples == 10_000 for c in certs)
    # piece radii recomputed here, independent of the certificate
    worst = max(min_enclosing_ball(pc.body.ambient_vertices).radius
                for d in decs for pc in d.pieces)
    small = worst <= RHO + 1e-6
    convex = all(c.suffix_convex_ok for c in certs)
    fast = elapsed < TIME_BUDGET_1
    ok = cover and small and convex and fast and max(radii) <= 8
    detail = (f"{len(polys)} polytopes, R in [{min(radii):.2f}, {max(radii):.2f}], "
              f"{sum(len(d) for d in decs)} pieces; coverage 10^4/10^4 {cover}; "
              f"max piece radius {worst:.6f}; suffixes convex {convex}; {elapsed:.1f}s")
    assert verdict(1, ok, detail), detail


# -- 2 --------------------------------------------------------------------------


def cap_depth_oracle(R, r):
    """Depth below the bounding sphere of the plane through its intersection
    with a sphere of radius r about a boundary point."""
    p = np.array([R, 0.0])
    x1 = (R * R + p @ p - r * r) / (2 * p[0])
    y = math.sqrt(R * R - x1 * x1)
    assert abs(math.hypot(x1 - R, y) - r) < 1e-12 * max(1.0, R)
    return R - x1


def test_criterion_2_cap_constant(corpus):
    _, decs, _, _ = corpus
    worst, over = 0.0, []
    for d in decs:
        if d.gamma == 0.0:
            continue
        R = d.radius
        want = cap_depth_oracle(R, RHO / 2)
        gamma = want / (2 * R)
        for s in d.stages:
            worst = max(worst, abs(s.cap_height - want) / want)
        bound = math.ceil((1 - RHO / R) / gamma) + 1
        if len(d.stages) > bound:
            over.append((len(d.stages), bound))
    ok = worst <= 1e-9 and not over
    detail = f"max relative cap-height error {worst:.2e}; stage-count bound breaches {len(over)}"
    assert verdict(2, ok, detail), detail


# -- 3 --------------------------------------------------------------------------


def test_criterion_3_support_functions_add():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(20):
        dim = int(rng.integers(2, 5))
        P = from_vertices(rng.standard_normal((int(rng.integers(dim + 1, 11)), dim)))
        U = rng.standard_normal((100, dim))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        for mu, lam in [(1, 1), (2, 3), (5, 7)]:
            total, report = minkowski_scaled_sum(P, mu, lam)
            assert report.ok
            # mu P + lam P built literally from pairwise vertex sums
            V = P.ambient_vertices
            literal = from_vertices((mu * V[:, None, :] + lam * V[None, :, :]).reshape(-1, dim))
            h_sum = support_function(scale(P, mu), U) + support_function(scale(P, lam), U)
            err = max(np.abs(h_sum - support_function(total, U)).max(),
                      np.abs(support_function(literal, U) - support_function(total, U)).max())
            worst = max(worst, err / (mu + lam))
    ok = worst <= 1e-8
    detail = f"20 polytopes x 100 directions x 3 pairs; max error/(mu+lam) {worst:.2e}"
    assert verdict(3, ok, detail), detail


# -- 4 --------------------------------------------------------------------------


def test_criterion_4_sandwich():
    rng = np.random.default_rng(4)
    rows = []
    for dim in (2, 3, 4):
        for ratio in (1.01, 1.1, math.sqrt(2), 2.0):
            c = rng.uniform(-3, 3, dim)
            D = sandwich_polytope(c, 1.0, ratio, dim)
            A, b = D.ambient_halfspaces()
            # tangency: every facet plane sits at distance exactly 1 from c
            dist = b - A @ c
            tangent = np.abs(dist - 1.0).max()
            outer = np.linalg.norm(D.ambient_vertices - c, axis=1).max() - ratio
            rows.append((dim, ratio, len(A), tangent, outer))
    ok = all(t <= 1e-12 and o <= 1e-9 for *_, t, o in rows)
    detail = (f"{len(rows)} cases; max tangency error {max(r[3] for r in rows):.1e}; "
              f"max outer excess {max(r[4] for r in rows):.1e}")
    assert verdict(4, ok, detail), detail


# -- 5 --------------------------------------------------------------------------


def lattice_points(K):
    """Integer points of K (ambient coordinates), by box enumeration."""
    V = K.ambient_vertices
    lo, hi = np.ceil(V.min(axis=0) - 1e-9).astype(int), np.floor(V.max(axis=0) + 1e-9).astype(int)
    axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
    if any(len(a) == 0 for a in axes):
        return np.zeros((0, len(lo)), dtype=np.int64)
    G = np.array(np.meshgrid(*axes, indexing="ij")).reshape(len(lo), -1).T
    tol = 1e-9 * max(1.0, float(np.abs(V).max()))
    A, b = K.ambient_halfspaces()
    keep = K.hull.distance(G.astype(float)) <= tol
    if len(A):
        keep &= (G @ A.T - b).max(axis=1) <= tol
    return G[keep].astype(np.int64)


def test_criterion_5_inequality_chain(corpus):
    _, decs, certs, _ = corpus
    decs = [d for d, c in zip(decs, certs) if c.ok]
    decs += [peel(simplex_polytope(2, 6)), peel(simplex_polytope(3, 4))]
    pairs = 0
    bad = []
    for d in decs:
        n = d.source.ambient_dim
        for pc in d.pieces:
            for ell in (1, 2, 5):
                Z = lattice_points(scale(pc.body, ell))
                if len(Z) < 2:
                    continue
                l1 = np.abs(Z[:, None, :] - Z[None, :, :]).sum(axis=2)
                pairs += len(Z) * (len(Z) - 1) // 2
                if int(l1.max()) > 2 * n * ell:
                    bad.append((n, ell, int(l1.max())))
    ok = not bad and pairs > 0
    detail = f"{len(decs)} peels, {pairs} lattice-point pairs checked; violations {len(bad)}"
    assert verdict(5, ok, detail), detail


# -- 6 --------------------------------------------------------------------------


def test_criterion_6_lemma1():
    rng = np.random.default_rng(6)
    failures = 0
    for _ in range(1000):
        dw = int(rng.integers(1, 10))
        w = GradedSupport({dw, *rng.integers(1, dw + 1, size=int(rng.integers(0, 4))).tolist()})
        lo = dw + int(rng.integers(0, 20))
        span = int(rng.integers(0, 60))
        s = GradedSupport({lo, lo + span, *rng.integers(lo, lo + span + 1, size=6).tolist()})
        seq = lemma1_steps(s, w)
        t = seq[-1]
        if not (t.min >= w.deg and t.length <= w.deg and len(seq) - 1 <= s.length):
            failures += 1
    ok = failures == 0
    detail = f"1000 random supports; failures {failures}"
    assert verdict(6, ok, detail), detail


# -- 7 --------------------------------------------------------------------------


def test_criterion_7_main_proof_trace():
    t0 = time.perf_counter()
    traces = {nm: run_main_proof(*nm, NilOracle(2)) for nm in [(2, 6), (3, 4)]}
    traces_ok = all(t.contradiction and not t.failed_claims() for t in traces.values())
    agree = []
    for m in range(1, 7):
        dec = peel(simplex_polytope(2, m))
        brute = brute_force_expand(2, m, 2, 1, dec=dec)
        tr = traces[(2, 6)] if m == 6 else run_main_proof(2, m, NilOracle(2), dec=dec)
        agree.append(brute.ok and cross_check(tr, brute, dec).ok)
    elapsed = time.perf_counter() - t0
    ok = traces_ok and all(agree) and elapsed < TIME_BUDGET_7
    detail = (f"(2,6) stages {len(traces[(2, 6)].stages)}, (3,4) stages {len(traces[(3, 4)].stages)}, "
              f"contradiction and zero failed claims {traces_ok}; brute agreement m=1..6 "
              f"{agree}; {elapsed:.1f}s")
    assert verdict(7, ok, detail), detail


# -- 8 --------------------------------------------------------------------------


def run_cli(args, cwd, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    env.pop("PEELKIT_SEED", None)
    res = subprocess.run([sys.executable, "-m", "peelkit.cli", *args], cwd=cwd, env=env,
                         capture_output=True)
    return res.returncode, res.stdout


def test_criterion_8_cli_determinism(tmp_path):
    (tmp_path / "square.json").write_text('{"vertices": [[0,0],[3,0],[3,3],[0,3]]}')
    rc, dec = run_cli(["peel", "--input", "square.json", "--seed", "5"], tmp_path, 0)
    assert rc == 0
    (tmp_path / "dec.json").write_bytes(dec)
    runs = {
        "peel": ["peel", "--input", "square.json", "--seed", "5"],
        "certify": ["certify", "--input", "dec.json", "--seed", "5"],
        "simulate": ["simulate", "--n", "2", "--m", "4", "--nil-random", "3", "--seed", "5"],
        "expand": ["expand", "--n", "2", "--m", "3", "--seed", "5"],
        "render-svg": ["render", "--input", "dec.json"],
        "render-json": ["render", "--input", "dec.json", "--format", "json"],
    }
    same = {}
    for name, args in runs.items():
        a = run_cli(args, tmp_path, 1)
        b = run_cli(args, tmp_path, 2)
        same[name] = a[0] == b[0] == 0 and a[1] == b[1] and len(a[1]) > 0
    same["peel"] = same["peel"] and run_cli(runs["peel"], tmp_path, 3)[1] == dec
    ok = all(same.values())
    detail = ", ".join(f"{k} {'identical' if v else 'DIFFERS'}" for k, v in same.items())
    assert verdict(8, ok, detail), detail


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
