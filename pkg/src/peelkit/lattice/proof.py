"""Stage-by-stage replay of the contradiction argument on exponent lattices.

Start from a homogeneous degree-``m`` representation ``p`` of 1 whose
coefficients lie in ``L_0 = I^(2n+1)``, and peel the simplex of its
exponents.  Stage ``i`` splits the current representation ``p_(i-1)`` into
``w``, the terms over the scaled piece ``K_i``, and the rest ``q``.  ``w``
collapses onto one monomial, so it is nilpotent of some index ``k_i``; then
``p_i = (q + w)^(l_i)`` drops every term with ``w^(k_i)`` and its exponents
fit in the scaled suffix polytope.  The last piece collapses to a single
nilpotent monomial equal to 1.

Nothing is expanded.  Scales are exact power products and supports are
tracked through the recorded polytopes, so every stage claim is an integer
identity or a polytope check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import LinearConstraint, milp

from ..geometry import same_vertex_set, scale, support_function
from ..geometry.polytope import _chebyshev, _orthogonal_complement
from ..peeling import PeelDecomposition, PeelParams, distance_diameter_check, peel
from .monomials import (
    CoeffTag,
    DepthError,
    MonomialRep,
    NilOracle,
    assign_pieces,
    collapse_piece,
    initial_tag,
    simplex_lattice,
    simplex_polytope,
)
from .powers import PowerProduct


@dataclass
class Claim:
    text: str
    ok: bool
    witness: object = None

    def to_json(self) -> dict:
        return {"text": self.text, "pass": bool(self.ok), "witness": self.witness}

    @classmethod
    def from_json(cls, data) -> "Claim":
        return cls(data["text"], bool(data["pass"]), data.get("witness"))


def _pp(x):
    return None if x is None else x.to_json()


def _unpp(x):
    return None if x is None else PowerProduct.from_json(x)


@dataclass
class TraceStage:
    """Stage ``i`` collapses the terms of ``p_(i-1)`` over ``scale_prev * K_i``.

    ``region_degree`` is the degree of those monomials; ``scale``,
    ``lam``, ``J_exp`` and ``L_exp`` describe ``p_i`` after powering by
    ``l_i``.
    """

    i: int
    piece: int
    skipped: bool
    scale_prev: PowerProduct
    region_degree: PowerProduct
    region_size: int | None
    nil_index: int | None
    l_i: PowerProduct
    scale: PowerProduct
    lam: PowerProduct
    J_exp: PowerProduct
    L_exp: PowerProduct
    tag: CoeffTag | None
    claims: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.claims)

    def to_json(self) -> dict:
        return {
            "i": self.i, "piece": self.piece, "skipped": self.skipped,
            "scale_prev": _pp(self.scale_prev), "region_degree": _pp(self.region_degree),
            "region_size": self.region_size, "nil_index": self.nil_index, "l_i": _pp(self.l_i),
            "scale": _pp(self.scale), "lambda": _pp(self.lam), "J_exp": _pp(self.J_exp),
            "L_exp": _pp(self.L_exp), "tag": None if self.tag is None else self.tag.to_json(),
            "claims": [c.to_json() for c in self.claims],
        }

    @classmethod
    def from_json(cls, d) -> "TraceStage":
        return cls(d["i"], d["piece"], d["skipped"], _unpp(d["scale_prev"]), _unpp(d["region_degree"]),
                   d["region_size"], d["nil_index"], _unpp(d["l_i"]), _unpp(d["scale"]),
                   _unpp(d["lambda"]), _unpp(d["J_exp"]), _unpp(d["L_exp"]),
                   None if d["tag"] is None else CoeffTag.from_json(d["tag"]),
                   [Claim.from_json(c) for c in d["claims"]])


@dataclass
class TraceFinal:
    piece: int
    scale: PowerProduct
    region_degree: PowerProduct
    region_size: int | None
    nil_index: int | None
    tag: CoeffTag | None
    claims: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.claims)

    def to_json(self) -> dict:
        return {"piece": self.piece, "scale": _pp(self.scale), "region_degree": _pp(self.region_degree),
                "region_size": self.region_size, "nil_index": self.nil_index,
                "tag": None if self.tag is None else self.tag.to_json(),
                "claims": [c.to_json() for c in self.claims]}

    @classmethod
    def from_json(cls, d) -> "TraceFinal":
        return cls(d["piece"], _unpp(d["scale"]), _unpp(d["region_degree"]), d["region_size"],
                   d["nil_index"], None if d["tag"] is None else CoeffTag.from_json(d["tag"]),
                   [Claim.from_json(c) for c in d["claims"]])


@dataclass
class ProofTrace:
    n: int
    m: int
    oracle: NilOracle
    peel_ref: str
    initial_depth: int
    pieces: int
    stages: list
    final: TraceFinal | None
    contradiction: bool

    def failed_claims(self) -> list:
        out = [(s.i, c) for s in self.stages for c in s.claims if not c.ok]
        if self.final is not None:
            out += [("final", c) for c in self.final.claims if not c.ok]
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "oracle": self.oracle.to_json(), "peel_ref": self.peel_ref,
                "initial_depth": self.initial_depth, "pieces": self.pieces,
                "stages": [s.to_json() for s in self.stages],
                "final": None if self.final is None else self.final.to_json(),
                "contradiction": self.contradiction}

    @classmethod
    def from_json(cls, d) -> "ProofTrace":
        return cls(d["n"], d["m"], NilOracle.from_json(d["oracle"]), d["peel_ref"], d["initial_depth"],
                   d["pieces"], [TraceStage.from_json(s) for s in d["stages"]],
                   None if d["final"] is None else TraceFinal.from_json(d["final"]),
                   bool(d["contradiction"]))


# -- lattice points of scaled pieces ---------------------------------------------


def region_has_lattice_point(body, ell: PowerProduct, n: int, m: int, tol: float = 1e-9):
    """Whether ``ell * body`` holds a point of ``{x in Z^n_{>=0} : sum x = m ell}``.

    Returns ``(answer, how)``; ``answer`` is None when undecided.  A ball of
    radius ``sqrt(n)`` inside the scaled piece always holds such a point
    (round each coordinate, then fix the sum), otherwise small scales are
    settled by an integer program.
    """
    if body.dim == 0:
        r = 0.0
    else:
        _, r = _chebyshev(body.A, body.b)
    need = math.sqrt(n)
    if r > 0 and math.log2(need / r) < ell.bit_length():
        return True, "inradius"
    if not ell.is_small(60):
        return None, "undecided"
    lam = int(ell)
    S = scale(body, lam)
    A, b = S.ambient_halfspaces()
    C = _orthogonal_complement(S.hull.basis, S.ambient_dim)
    e = C @ S.hull.base
    slack = tol * 10 * max(1.0, float(lam * m))
    cons = [LinearConstraint(np.ones((1, n)), m * lam, m * lam)]
    if len(A):
        cons.append(LinearConstraint(A, -np.inf, b + slack))
    if len(C):
        cons.append(LinearConstraint(C, e - slack, e + slack))
    res = milp(np.zeros(n), constraints=cons, integrality=np.ones(n),
               bounds=(0, m * lam))
    if res.status == 0:
        return True, "integer program"
    if res.status == 2:
        return False, "integer program"
    return None, "undecided"


# -- the stages ----------------------------------------------------------------------


def _diameter_claim(piece, n, rho, tol):
    rep = distance_diameter_check(piece, 1, n, rho, tol)
    ok = rep.max_l1 <= math.sqrt(n) * rep.max_l2 * (1 + tol) + tol and rep.ok
    return Claim("l1 distances in ell*K are at most sqrt(n)*2*ell <= 2*n*ell", bool(ok),
                 {"l1": rep.max_l1, "l2": rep.max_l2, "bound_l1_per_ell": rep.bound_l1})


def _explicit_collapse(rep, region, oracle, n, ell_int, prefix):
    """Collapse the listed lattice points; returns (tag, k, claims)."""
    claims = []
    need = 2 * n * ell_int + 1
    low = [a for a in region if rep.terms[a].depth < need]
    claims.append(Claim(f"region coefficients lie in I^(2n*ell+1) = I^{need}", not low,
                        None if not low else {"alpha": list(low[0]),
                                              "depth": rep.terms[low[0]].depth}))
    anchor = region[0]
    try:
        (_, tag), k = collapse_piece(rep, region, anchor, oracle, prefix)
        steps = max(sum(abs(x - y) for x, y in zip(a, anchor)) // 2 for a in region)
        claims.append(Claim("every region term rewrites onto the anchor monomial", True,
                            {"anchor": list(anchor), "max_steps": steps}))
    except DepthError as exc:
        claims.append(Claim("every region term rewrites onto the anchor monomial", False,
                            {"depth shortfall at": list(exc.alpha), "message": str(exc)}))
        return None, None, claims
    return tag, k, claims


def _suffix_claim(dec, i):
    """``cut(S_(i-1), H_i)`` recomputed equals the recorded ``(S_i, K_i)``."""
    from ..geometry import cut

    prev = dec.suffix(i - 1)
    piece = dec.pieces[i - 1]
    near, far = cut(prev, piece.cut_plane)
    ok = (near is not None and far is not None and same_vertex_set(near, dec.suffix(i))
          and same_vertex_set(far, piece.body))
    return Claim("S_(i-1) splits into K_i and the convex suffix S_i", bool(ok),
                 None if ok else {"piece": i - 1})


def _minkowski_claim(S, t, s, seed):
    """Support functions of ``t S + s S`` and ``(t + s) S`` agree."""
    rng = np.random.default_rng(seed)
    U = rng.standard_normal((64, S.ambient_dim))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    lhs = support_function(scale(S, t), U) + support_function(scale(S, s), U)
    rhs = support_function(scale(S, t + s), U)
    err = float(np.abs(lhs - rhs).max())
    ok = err <= 1e-8 * (t + s) * max(1.0, float(np.abs(S.ambient_vertices).max()))
    return Claim("exponents t*gamma + beta of (q+w)^l lie in l*S_i (support functions add)",
                 bool(ok), {"t": t, "s": s, "max_error": err})


def run_main_proof(n: int, m: int, oracle: NilOracle | None = None,
                   params: PeelParams | None = None, initial_depth: int | None = None,
                   dec: PeelDecomposition | None = None) -> ProofTrace:
    """Replay the staged argument for a degree-``m`` representation in ``n``
    variables and verify each stage's claims."""
    from ..io import decomposition_digest

    if n < 2:
        raise ValueError("need n >= 2: for n = 1 the exponent simplex is a point")
    if m < 1:
        raise ValueError("need m >= 1")
    oracle = oracle or NilOracle()
    params = params or PeelParams()
    tol = params.tol
    P = simplex_polytope(n, m, tol)
    dec = dec or peel(P, params)
    depth0 = 2 * n + 1 if initial_depth is None else int(initial_depth)
    lattice = simplex_lattice(n, m)
    owner = assign_pieces(lattice, dec)
    rep = MonomialRep(n, {a: initial_tag(a, depth0) for a in lattice})
    mu = len(dec.pieces)

    two_n = PowerProduct.of(2 * n)
    ell = PowerProduct.of(1)
    lam = PowerProduct.of(m)
    J = two_n
    L = J + 1
    stages = []
    failed = False
    for i in range(1, mu):
        piece = dec.pieces[i - 1]
        claims = [_suffix_claim(dec, i)]
        explicit = ell == 1
        tag = k = None
        region_size = None
        if explicit:
            region = [a for a in lattice if owner[a] == i - 1]
            region_size = len(region)
            empty = not region
            if not empty:
                tag, k, more = _explicit_collapse(rep, region, oracle, n, 1, f"w{i}.")
                claims += more
        else:
            found, how = region_has_lattice_point(piece.body, ell, n, m, tol)
            empty = found is False
            if not empty:
                claims.append(_diameter_claim(piece, n, params.rho, tol))
                try:
                    eps = L - two_n * ell
                except ArithmeticError:
                    eps = None
                claims.append(Claim("coefficients carry I^(2n*ell+eps) with eps >= 1",
                                    eps is not None and eps >= 1, {"eps": eps, "region": how}))
                tag = CoeffTag(f"w{i}", 0, (f"p{i - 1}",))
                k = oracle(tag)
        if empty:
            stages.append(TraceStage(i, i - 1, True, ell, lam, region_size, None, PowerProduct.of(1),
                                     ell, lam, J, L, None, claims))
            if not all(c.ok for c in claims):
                failed = True
                break
            continue
        if k is None:
            stages.append(TraceStage(i, i - 1, False, ell, lam, region_size, None, PowerProduct.of(1),
                                     ell, lam, J, L, None, claims))
            failed = True
            break
        l_i = lam * k
        new_ell, new_lam, new_J = ell * l_i, lam * l_i, J * l_i
        new_L = new_J + 1
        claims.append(Claim("l_i = deg(p_(i-1)) * k_i and deg(p_i) = m * l_1...l_i",
                            l_i // lam == k and new_lam == PowerProduct.of(m) * new_ell,
                            {"k_i": k}))
        claims.append(Claim("J_i = J_(i-1)^(l_i) = I^(2n*l_1...l_i) and L_i = J_i*I",
                            new_J == two_n * new_ell and (new_L - new_J) >= 1,
                            {"eps": new_L - new_J}))
        # a w^t q^s term rewrites c^alpha (degree t*deg) into c^(t*gamma) using
        # the I^(l_i) half of its coefficient; t < k_i leaves deg(p_(i-1)) >= 1
        claims.append(Claim("powering leaves l_i - (k_i - 1)*deg(p_(i-1)) >= 1 factors of I",
                            k >= 1 and l_i // lam == k,
                            {"slack_is_deg_p": True}))
        claims.append(_minkowski_claim(dec.suffix(i), max(1, k - 1), 1, params.seed + i))
        stages.append(TraceStage(i, i - 1, False, ell, lam, region_size, k, l_i, new_ell, new_lam,
                                 new_J, new_L, tag, claims))
        ell, lam, J, L = new_ell, new_lam, new_J, new_L
        if not all(c.ok for c in claims):
            failed = True
            break

    final = None
    contradiction = False
    if not failed:
        last = dec.pieces[mu - 1]
        claims = []
        region_size = None
        if ell == 1:
            region = [a for a in lattice if owner[a] == mu - 1]
            region_size = len(region)
            if region:
                tag, k, claims = _explicit_collapse(rep, region, oracle, n, 1, "z.")
            else:
                tag, k = None, None
                claims.append(Claim("final region holds the remaining terms", False, None))
        else:
            claims.append(_diameter_claim(last, n, params.rho, tol))
            try:
                eps = L - two_n * ell
            except ArithmeticError:
                eps = None
            claims.append(Claim("coefficients carry I^(2n*ell+eps) with eps >= 1",
                                eps is not None and eps >= 1, {"eps": eps}))
            tag = CoeffTag("z", 0, (f"p{mu - 1}",))
            k = oracle(tag)
        if k is not None:
            claims.append(Claim("1 = p_(mu-1) is a single monomial with nilpotent coefficient",
                                k >= 1, {"nil_index": k}))
        final = TraceFinal(mu - 1, ell, lam, region_size, k, tag, claims)
        contradiction = final.ok and k is not None
    return ProofTrace(n, m, oracle, decomposition_digest(dec), depth0, mu, stages, final,
                      contradiction)
