"""Literal expansion of ``(q + w)^l`` for tiny parameters.

This is the independent check on :func:`run_main_proof`: every product of
``l`` terms is formed explicitly (as a multiset of factors, since the
coefficients commute with the monomials), the ``w`` part is rewritten
onto ``t * gamma`` and the resulting exponent and depth are checked one
term at a time.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ..geometry import contains_points, scale
from ..peeling import PeelDecomposition, PeelParams, peel
from .monomials import CoeffTag, MonomialRep, initial_tag, simplex_lattice, simplex_polytope

TERM_CAP = 1_000_000


@dataclass
class BruteStage:
    i: int
    skipped: bool
    l: int = 1
    k: int | None = None
    gamma: tuple | None = None
    products: int = 0          # products of l terms formed
    kept: int = 0              # those with fewer than k factors from w
    max_steps: int = 0
    steps_ok: bool = True      # steps <= t * deg(p_(i-1)) for every product
    min_depth: int | None = None
    depth_bound: int | None = None   # 2n * scale + 1 after the stage
    depth_ok: bool = True
    support: list = field(default_factory=list)
    support_ok: bool = True
    witness: object = None

    def to_json(self) -> dict:
        return {"i": self.i, "skipped": self.skipped, "l": self.l, "k": self.k,
                "gamma": None if self.gamma is None else list(self.gamma),
                "products": self.products, "kept": self.kept, "max_steps": self.max_steps,
                "steps_ok": self.steps_ok, "min_depth": self.min_depth,
                "depth_bound": self.depth_bound, "depth_ok": self.depth_ok,
                "support_size": len(self.support), "support_ok": self.support_ok,
                "witness": self.witness}


@dataclass
class BruteResult:
    n: int
    m: int
    k: int
    reps: list
    stages: list

    @property
    def ok(self) -> bool:
        return all(s.steps_ok and s.depth_ok and s.support_ok for s in self.stages)

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "k": self.k, "ok": self.ok,
                "stages": [s.to_json() for s in self.stages],
                "final_terms": len(self.reps[-1])}


def brute_force_expand(n: int, m: int, k: int = 2, stage_limit: int = 1,
                       params: PeelParams | None = None, term_cap: int = TERM_CAP,
                       dec: PeelDecomposition | None = None) -> BruteResult:
    """Expand the first ``stage_limit`` powering stages term by term.

    Returns the representations ``p_0, p_1, ...`` and a per-stage report.
    Raises ``OverflowError`` before forming more than ``term_cap`` products.
    """
    if n < 1 or m < 1 or k < 1 or stage_limit < 0:
        raise ValueError("need n, m, k >= 1 and stage_limit >= 0")
    params = params or PeelParams()
    tol = params.tol
    P = simplex_polytope(n, m, tol)
    dec = dec or peel(P, params)
    rep = MonomialRep(n, {a: initial_tag(a, 2 * n + 1) for a in simplex_lattice(n, m)})
    reps = [rep]
    stages = []
    ell = 1
    for i in range(1, min(stage_limit, len(dec.pieces) - 1) + 1):
        deg = m * ell
        exps = np.array(list(rep.terms), dtype=np.int64)
        depths = np.array([t.depth for t in rep.terms.values()], dtype=np.int64)
        K = scale(dec.pieces[i - 1].body, ell)
        in_w = contains_points(K, exps.astype(float), tol * 10 * max(1.0, deg))
        if not in_w.any():
            stages.append(BruteStage(i, True))
            reps.append(rep)
            continue
        if in_w.all():
            raise ValueError("p is a single collapsible piece; nothing to expand")
        l = deg * k
        M = len(exps)
        count = math.comb(l + M - 1, M - 1)
        if count > term_cap:
            raise OverflowError(f"{count} products exceed the term cap {term_cap}")
        q_exps = exps[~in_w]
        gamma = tuple(int(x) for x in min(map(tuple, q_exps)))
        idx = np.fromiter(itertools.chain.from_iterable(
            itertools.combinations_with_replacement(range(M), l)), dtype=np.int64,
            count=count * l).reshape(count, l)
        t = in_w[idx].sum(axis=1)
        keep = t < k
        idx, t = idx[keep], t[keep]
        w_part = (exps[idx] * in_w[idx][..., None]).sum(axis=1)
        beta = exps[idx].sum(axis=1) - w_part
        target = t[:, None] * np.asarray(gamma) + beta
        steps = np.abs(w_part - t[:, None] * np.asarray(gamma)).sum(axis=1) // 2
        total = depths[idx].sum(axis=1)
        # 2n*ell*l of each coefficient is the J part; the I^l part pays the rewrite
        j_part = 2 * n * ell * l
        after = total - steps
        new_ell = ell * l
        bound = 2 * n * new_ell + 1
        st = BruteStage(i, False, l, k, gamma, count, int(len(idx)))
        st.max_steps = int(steps.max()) if len(steps) else 0
        st.steps_ok = bool(np.all(steps <= t * deg) and np.all(total - j_part >= l))
        st.min_depth = int(after.min())
        st.depth_bound = bound
        st.depth_ok = st.min_depth >= bound
        support = sorted(set(map(tuple, target.tolist())), reverse=True)
        st.support = support
        S = scale(dec.suffix(i), new_ell)
        inside = contains_points(S, np.asarray(support, dtype=float),
                                 tol * 10 * max(1.0, float(m * new_ell)))
        st.support_ok = bool(inside.all())
        if not st.support_ok:
            st.witness = list(support[int(np.flatnonzero(~inside)[0])])
        stages.append(st)
        merged = {}
        for e, d in zip(map(tuple, target.tolist()), after.tolist()):
            if e not in merged or d < merged[e]:
                merged[e] = d
        rep = MonomialRep(n, {e: CoeffTag(f"b{i}:" + ",".join(map(str, e)), d)
                              for e, d in merged.items()})
        reps.append(rep)
        ell = new_ell
    return BruteResult(n, m, k, reps, stages)


@dataclass
class CrossCheck:
    ok: bool
    rows: list

    def to_json(self) -> dict:
        return {"ok": self.ok, "rows": self.rows}


def cross_check(trace, brute: BruteResult, dec: PeelDecomposition) -> CrossCheck:
    """Compare the expansion with the trace's symbolic stage claims."""
    rows = []
    for st in brute.stages:
        rec = trace.stages[st.i - 1] if st.i - 1 < len(trace.stages) else None
        row = {"i": st.i, "trace_present": rec is not None}
        if rec is None:
            row["ok"] = False
            rows.append(row)
            continue
        row["skipped_agree"] = rec.skipped == st.skipped
        if st.skipped:
            row["ok"] = row["skipped_agree"]
            rows.append(row)
            continue
        row["l_agree"] = int(rec.l_i) == st.l
        row["k_agree"] = rec.nil_index == st.k
        row["depth_bound_agree"] = int(rec.L_exp) == st.depth_bound
        row["depth_ok"] = st.min_depth >= int(rec.L_exp)
        S = scale(dec.suffix(st.i), int(rec.scale))
        inside = contains_points(S, np.asarray(st.support, dtype=float),
                                 dec.params.tol * 10 * max(1.0, float(int(rec.lam))))
        row["support_in_claimed_polytope"] = bool(inside.all())
        row["trace_claims_pass"] = rec.ok
        row["ok"] = all(v for key, v in row.items() if key not in ("i",))
        rows.append(row)
    return CrossCheck(all(r["ok"] for r in rows), rows)
