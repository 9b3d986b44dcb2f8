"""Exact arithmetic on products of small primes.

The proof trace multiplies its scales together stage after stage, so the
numbers grow doubly exponentially.  They are only ever multiplied, divided
exactly, compared for equality or shifted by a small constant, which a
prime-exponent table handles at any size.
"""
from __future__ import annotations

import re
from collections import Counter
from math import inf, log2

# values below this are written to JSON as plain integers
INT_LIMIT = 10 ** 15


def _factor(n: int) -> Counter:
    if n < 1:
        raise ValueError("only positive integers factor into primes")
    out = Counter()
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] += 1
            n //= p
        p += 1
    if n > 1:
        out[n] += 1
    return out


class PowerProduct:
    """The number ``prod p^e + offset`` with exact prime exponents."""

    __slots__ = ("factors", "offset")

    def __init__(self, factors=None, offset: int = 0):
        self.factors = {int(p): int(e) for p, e in sorted((factors or {}).items()) if e}
        if any(e < 0 for e in self.factors.values()):
            raise ValueError("negative prime exponent")
        self.offset = int(offset)

    @classmethod
    def of(cls, n) -> "PowerProduct":
        if isinstance(n, PowerProduct):
            return n
        n = int(n)
        return cls(_factor(n))

    @property
    def product(self) -> "PowerProduct":
        return PowerProduct(self.factors)

    def bit_length(self) -> float:
        """Approximate log2 of the product part."""
        if any(e.bit_length() > 1000 for e in self.factors.values()):
            return inf
        return sum(e * log2(p) for p, e in self.factors.items())

    def _pure(self, op):
        if self.offset:
            raise ArithmeticError(f"{op} needs a pure product, got {self}")

    def __mul__(self, other):
        other = PowerProduct.of(other)
        self._pure("multiplication")
        other._pure("multiplication")
        f = Counter(self.factors)
        f.update(other.factors)
        return PowerProduct(f)

    __rmul__ = __mul__

    def divides(self, other) -> bool:
        other = PowerProduct.of(other)
        return all(other.factors.get(p, 0) >= e for p, e in self.factors.items())

    def __floordiv__(self, other):
        """Exact division; raises if ``other`` does not divide ``self``."""
        other = PowerProduct.of(other)
        self._pure("division")
        other._pure("division")
        if not other.divides(self):
            raise ArithmeticError(f"{other} does not divide {self}")
        f = Counter(self.factors)
        f.subtract(other.factors)
        return PowerProduct(f)

    def __add__(self, k: int):
        return PowerProduct(self.factors, self.offset + int(k))

    def __sub__(self, other):
        """Difference of two numbers sharing a product part, as an int."""
        if isinstance(other, int):
            return PowerProduct(self.factors, self.offset - other)
        if self.factors != other.factors:
            raise ArithmeticError("difference of unrelated power products")
        return self.offset - other.offset

    def __eq__(self, other):
        if isinstance(other, int):
            other = PowerProduct.of(other) if other >= 1 else None
            if other is None:
                return False
        if not isinstance(other, PowerProduct):
            return NotImplemented
        if self.factors == other.factors and self.offset == other.offset:
            return True
        # factorizations are unique, so pure products differ here
        if (self.offset or other.offset) and self.is_small() and other.is_small():
            return int(self) == int(other)
        return False

    def __hash__(self):
        return hash((tuple(self.factors.items()), self.offset))

    def is_small(self, limit_bits: int = 4096) -> bool:
        return self.bit_length() < limit_bits

    def __int__(self):
        if not self.is_small():
            raise OverflowError("power product too large for an int")
        v = 1
        for p, e in self.factors.items():
            v *= p ** e
        return v + self.offset

    def __repr__(self):
        return f"PowerProduct({self})"

    def __str__(self):
        parts = [str(p) if e == 1 else f"{p}^{e}" for p, e in self.factors.items()]
        s = "*".join(parts) or "1"
        if self.offset > 0:
            s += f"+{self.offset}"
        elif self.offset < 0:
            s += f"-{-self.offset}"
        return s

    def to_json(self):
        if not self.offset and self.bit_length() < 50:
            v = int(self)
            if 0 <= v < INT_LIMIT:
                return v
        return str(self)

    _TERM = re.compile(r"^(\d+)(?:\^(\d+))?$")

    @classmethod
    def from_json(cls, data) -> "PowerProduct":
        if isinstance(data, int):
            if data < 1:
                raise ValueError("power products are positive")
            return cls.of(data)
        m = re.fullmatch(r"([0-9^*]+?)(?:([+-])(\d+))?", str(data))
        if not m:
            raise ValueError(f"malformed power product {data!r}")
        f = Counter()
        for term in m.group(1).split("*"):
            t = cls._TERM.match(term)
            if not t:
                raise ValueError(f"malformed power product {data!r}")
            base = int(t.group(1))
            if base > 1:
                for p, e in _factor(base).items():
                    f[p] += e * int(t.group(2) or 1)
        off = int(m.group(3) or 0) * (-1 if m.group(2) == "-" else 1)
        return cls(f, off)
