"""Degrees-only view of representations of 1 and the reduction that trades
the lowest homogeneous part for ``w`` times it."""
from __future__ import annotations


class GradedSupport:
    """Nonempty set of degrees, each with the exponent of the ideal power
    its coefficients are known to lie in."""

    __slots__ = ("grades",)

    def __init__(self, grades):
        if not isinstance(grades, dict):
            grades = {int(g): 0 for g in grades}
        if not grades:
            raise ValueError("graded support must be nonempty")
        if any(int(g) < 0 for g in grades):
            raise ValueError("degrees must be >= 0")
        self.grades = {int(g): int(c) for g, c in sorted(grades.items())}

    @classmethod
    def interval(cls, lo: int, hi: int, marker: int = 0) -> "GradedSupport":
        return cls({g: marker for g in range(lo, hi + 1)})

    @property
    def degrees(self) -> list:
        return list(self.grades)

    @property
    def deg(self) -> int:
        return max(self.grades)

    @property
    def min(self) -> int:
        return min(self.grades)

    @property
    def length(self) -> int:
        return self.deg - self.min + 1

    def __eq__(self, other):
        return isinstance(other, GradedSupport) and self.grades == other.grades

    def __repr__(self):
        return f"GradedSupport({self.grades})"

    def to_json(self) -> dict:
        return {str(g): c for g, c in self.grades.items()}


def star_op(s: GradedSupport, w: GradedSupport) -> GradedSupport:
    """``s* = w s_min + (s minus its lowest part)``.

    Product grades add degrees and ideal exponents; where two parts land
    on one degree the sum only keeps the smaller exponent.
    """
    if w.min < 1:
        raise ValueError("star operation needs min(w) >= 1")
    low = s.min
    out = {g: c for g, c in s.grades.items() if g != low}
    for g, c in w.grades.items():
        deg = low + g
        cls = s.grades[low] + c
        out[deg] = min(out[deg], cls) if deg in out else cls
    return GradedSupport(out)


def lemma1_steps(s: GradedSupport, w: GradedSupport) -> list:
    """Supports visited while reducing ``s`` against ``w``, ending at one
    with length at most ``deg(w)``."""
    if w.min < 1:
        raise ValueError("reduction needs min(w) >= 1")
    if s.min < w.deg:
        raise ValueError(f"precondition min(s) >= deg(w) fails: {s.min} < {w.deg}")
    seq = [s]
    guard = s.length + 1
    while w.deg + s.min <= s.deg:
        s = star_op(s, w)
        seq.append(s)
        if len(seq) > guard:
            raise RuntimeError("reduction did not terminate within l(s) steps")
    return seq


def lemma1_reduce(s: GradedSupport, w: GradedSupport) -> GradedSupport:
    """Representation ``t`` with ``min(t) >= deg(w)`` and ``l(t) <= deg(w)``."""
    return lemma1_steps(s, w)[-1]
