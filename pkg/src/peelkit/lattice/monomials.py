"""Exponent vectors, coefficient tags and the rewriting calculus.

A representation of 1 is a map from exponent vectors to coefficient tags.
A tag is an opaque ring element known only through its *depth*: the
largest ``d`` for which it is known to lie in ``I^d``.  Moving one unit of
exponent from coordinate ``i`` to coordinate ``j`` spends one factor of
``I``, so it lowers the depth by one and keeps the degree.
"""
from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ..geometry import Polytope, contains_points, from_vertices


class DepthError(ValueError):
    """A rewrite needs more factors of the ideal than the tag carries."""

    def __init__(self, message, alpha=None):
        super().__init__(message)
        self.alpha = alpha


class CoverageError(ValueError):
    """A lattice point lies in no piece of the decomposition."""


def expvec(alpha) -> tuple:
    """Validate and normalize an exponent vector to a tuple of ints."""
    out = tuple(int(a) for a in alpha)
    if not out:
        raise ValueError("exponent vectors need n >= 1 entries")
    if any(a < 0 for a in out) or any(a != b for a, b in zip(out, alpha)):
        raise ValueError(f"exponent vector {alpha!r} must hold nonnegative integers")
    return out


def degree(alpha) -> int:
    return sum(alpha)


def l1_distance(alpha, beta) -> int:
    return sum(abs(a - b) for a, b in zip(alpha, beta))


def simplex_lattice(n: int, m: int) -> list:
    """All exponent vectors in ``n`` variables of degree exactly ``m``, in
    lexicographically decreasing order."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    out = []
    # stars and bars: choose n-1 bar positions among m+n-1 slots
    for bars in itertools.combinations(range(m + n - 1), n - 1):
        prev = -1
        alpha = []
        for b in bars:
            alpha.append(b - prev - 1)
            prev = b
        alpha.append(m + n - 2 - prev)
        out.append(tuple(alpha))
    out.sort(reverse=True)
    return out


def simplex_polytope(n: int, m: int, tol: float = 1e-9) -> Polytope:
    """``conv(m e_1, ..., m e_n)``, carried in its hull ``{sum x = m}``."""
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    return from_vertices(m * np.eye(n), tol)


def assign_pieces(points, dec, tol: float | None = None) -> dict:
    """Map each lattice point to the first piece of ``dec`` containing it."""
    pts = [expvec(p) for p in points]
    if not pts:
        return {}
    X = np.asarray(pts, dtype=float)
    out = {}
    todo = np.ones(len(pts), dtype=bool)
    for j, piece in enumerate(dec.pieces):
        t = piece.body.tol * 10 if tol is None else tol
        hit = todo & contains_points(piece.body, X, t * max(1.0, float(np.abs(X).max())))
        for i in np.flatnonzero(hit):
            out[pts[i]] = j
        todo &= ~hit
        if not todo.any():
            break
    if todo.any():
        miss = pts[int(np.flatnonzero(todo)[0])]
        raise CoverageError(f"lattice point {miss} lies in no piece")
    return out


@dataclass(frozen=True)
class CoeffTag:
    id: str
    depth: int
    lineage: tuple = field(default=())

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("tag depth must be >= 0")
        object.__setattr__(self, "lineage", tuple(self.lineage))

    def to_json(self) -> dict:
        return {"id": self.id, "depth": self.depth, "lineage": list(self.lineage)}

    @classmethod
    def from_json(cls, data) -> "CoeffTag":
        return cls(data["id"], int(data["depth"]), tuple(data.get("lineage", ())))


def initial_tag(alpha, depth: int) -> CoeffTag:
    return CoeffTag("a" + ",".join(map(str, alpha)), depth)


def _merged_id(prefix: str, parents) -> str:
    digest = hashlib.sha256("|".join(parents).encode()).hexdigest()[:12]
    return f"{prefix}{digest}"


def merge_tags(tags, prefix: str = "s") -> CoeffTag:
    """Tag of a sum: lies in the smallest of the ideal powers involved."""
    tags = list(tags)
    if len(tags) == 1:
        return tags[0]
    parents = sorted(t.id for t in tags)
    return CoeffTag(_merged_id(prefix, parents), min(t.depth for t in tags), tuple(parents))


class MonomialRep:
    """A formal polynomial ``sum_alpha a_alpha c^alpha`` standing for 1."""

    def __init__(self, n: int, terms: dict):
        if n < 1:
            raise ValueError("need n >= 1")
        self.n = int(n)
        clean = {}
        for alpha, tag in terms.items():
            alpha = expvec(alpha)
            if len(alpha) != self.n:
                raise ValueError(f"exponent vector {alpha} does not have {self.n} entries")
            clean[alpha] = tag
        if not clean:
            raise ValueError("a representation of 1 has at least one term")
        self.terms = dict(sorted(clean.items(), reverse=True))

    def __len__(self):
        return len(self.terms)

    @property
    def deg(self) -> int:
        return max(map(degree, self.terms))

    @property
    def min(self) -> int:
        return min(map(degree, self.terms))

    @property
    def length(self) -> int:
        return self.deg - self.min + 1

    def min_depth(self) -> int:
        return min(t.depth for t in self.terms.values())

    def restrict(self, points) -> "MonomialRep":
        keep = {a: self.terms[a] for a in points if a in self.terms}
        return MonomialRep(self.n, keep)

    def to_json(self) -> dict:
        return {"n": self.n,
                "terms": [{"alpha": list(a), "tag": t.to_json()} for a, t in self.terms.items()]}

    @classmethod
    def from_json(cls, data) -> "MonomialRep":
        return cls(data["n"], {tuple(t["alpha"]): CoeffTag.from_json(t["tag"]) for t in data["terms"]})

    @classmethod
    def uniform(cls, n: int, m: int, depth: int) -> "MonomialRep":
        """Homogeneous degree-``m`` representation with every tag at ``depth``."""
        return cls(n, {a: initial_tag(a, depth) for a in simplex_lattice(n, m)})


def rewrite_step(term, i: int, j: int):
    """Move one unit of exponent from coordinate ``i`` to ``j`` (0-based),
    spending one factor of the ideal."""
    alpha, tag = term
    alpha = expvec(alpha)
    if not (0 <= i < len(alpha) and 0 <= j < len(alpha)) or i == j:
        raise ValueError(f"need distinct coordinates in range, got {i}, {j}")
    if tag.depth < 1:
        raise DepthError("depth 0: no factor of the ideal left to spend", alpha)
    if alpha[i] < 1:
        raise ValueError(f"exponent {i} of {alpha} is zero")
    beta = list(alpha)
    beta[i] -= 1
    beta[j] += 1
    new = CoeffTag(f"{tag.id}:{i}>{j}", tag.depth - 1, (tag.id,))
    return tuple(beta), new


@dataclass(frozen=True)
class RewriteReport:
    steps: int
    depth_before: int
    depth_after: int
    coarse_bound: int | None      # 2 n ell, when ell was supplied
    coarse_sufficient: bool | None


def rewrite_to(term, target, ell: int | None = None):
    """Rewrite ``a c^alpha`` as ``b c^beta`` for ``|alpha| = |beta|``.

    Costs ``|alpha - beta|_1 / 2`` depth.  With ``ell`` given, the report
    also says whether the coarser sufficient condition ``depth >= 2 n ell``
    held.
    """
    alpha, tag = term
    alpha, beta = expvec(alpha), expvec(target)
    if len(alpha) != len(beta):
        raise ValueError("exponent vectors of different lengths")
    if degree(alpha) != degree(beta):
        raise ValueError(f"degree mismatch: |{alpha}| != |{beta}|")
    steps = l1_distance(alpha, beta) // 2
    if tag.depth < steps:
        raise DepthError(f"depth {tag.depth} < {steps} steps from {alpha} to {beta}", alpha)
    bound = None if ell is None else 2 * len(alpha) * int(ell)
    report = RewriteReport(steps, tag.depth, tag.depth - steps, bound,
                           None if bound is None else tag.depth >= bound)
    if steps == 0:
        return (alpha, tag), report
    new = CoeffTag(f"{tag.id}~{','.join(map(str, beta))}", tag.depth - steps, (tag.id,))
    return (beta, new), report


class NilOracle:
    """Nilpotency index of an opaque tag: a constant, or a seeded hash of
    the tag id into ``1..K``."""

    def __init__(self, k: int = 2, random_max: int | None = None, seed: int = 0):
        if random_max is None and k < 1:
            raise ValueError("nilpotency index must be >= 1")
        if random_max is not None and random_max < 1:
            raise ValueError("random range must be >= 1")
        self.k = int(k)
        self.random_max = None if random_max is None else int(random_max)
        self.seed = int(seed)

    def __call__(self, tag: CoeffTag) -> int:
        if self.random_max is None:
            return self.k
        h = hashlib.sha256(f"{self.seed}:{tag.id}".encode()).digest()
        return 1 + int.from_bytes(h[:8], "big") % self.random_max

    def to_json(self) -> dict:
        if self.random_max is None:
            return {"kind": "const", "k": self.k}
        return {"kind": "random", "max": self.random_max, "seed": self.seed}

    @classmethod
    def from_json(cls, data) -> "NilOracle":
        if data["kind"] == "const":
            return cls(k=data["k"])
        return cls(random_max=data["max"], seed=data.get("seed", 0))


def collapse_piece(rep: MonomialRep, region, anchor, oracle: NilOracle, prefix: str = "w"):
    """Rewrite every term of ``rep`` inside ``region`` onto ``anchor`` and
    sum the results into one term.

    Returns ``((anchor, tag), k)`` where ``k`` is the oracle's nilpotency
    index for the summed tag.
    """
    anchor = expvec(anchor)
    region = [expvec(a) for a in region]
    if anchor not in region:
        raise ValueError(f"anchor {anchor} is not in the region")
    moved = []
    for alpha in region:
        if alpha not in rep.terms:
            continue
        (beta, tag), _ = rewrite_to((alpha, rep.terms[alpha]), anchor)
        moved.append(tag)
    if not moved:
        raise ValueError("region holds no term of the representation")
    if len(moved) == 1:
        tag = moved[0]
    else:
        parents = sorted(t.id for t in moved)
        tag = CoeffTag(_merged_id(prefix, parents), min(t.depth for t in moved), tuple(parents))
    return (anchor, tag), oracle(tag)


def homogenize(rep: MonomialRep, d: int | None = None) -> MonomialRep:
    """Lift every term to the top degree ``D`` by raising its first
    exponent by ``D - |alpha|``, spending that much depth."""
    D = rep.deg
    out = {}
    for alpha, tag in rep.terms.items():
        j = D - degree(alpha)
        if d is not None and j > d:
            raise ValueError(f"degree gap {j} at {alpha} exceeds d={d}")
        if tag.depth < j:
            raise DepthError(f"depth {tag.depth} < degree gap {j} at {alpha}", alpha)
        beta = (alpha[0] + j,) + alpha[1:]
        new = tag if j == 0 else CoeffTag(f"{tag.id}^{j}", tag.depth - j, (tag.id,))
        out.setdefault(beta, []).append(new)
    return MonomialRep(rep.n, {b: merge_tags(ts, "h") for b, ts in out.items()})


def lattice_count(n: int, m: int) -> int:
    return math.comb(m + n - 1, n - 1)
