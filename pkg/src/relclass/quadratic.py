"""Exact arithmetic in Q(sqrt(q)).

Values are pairs ``u + v*sqrt(q)`` with rational ``u``, ``v``.  Comparisons
never touch floating point: the sign of ``u + v*sqrt(q)`` is decided from the
signs of ``u`` and ``v`` and, when they disagree, from ``u**2 - q*v**2``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from numbers import Rational


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to an exact rational")


@total_ordering
class QuadraticValue:
    """An element ``u + v*sqrt(q)`` of Q(sqrt(q)), q a positive integer."""

    __slots__ = ("u", "v", "q")

    def __init__(self, u=0, v=0, q: int = 2):
        if q <= 0:
            raise ValueError("q must be positive")
        u, v = _frac(u), _frac(v)
        r = math.isqrt(q)
        if r * r == q:
            # q square: fold the radical into the rational part
            u, v = u + v * r, Fraction(0)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticValue is immutable")

    @classmethod
    def sqrt(cls, q: int) -> "QuadraticValue":
        return cls(0, 1, q)

    def _coerce(self, other) -> "QuadraticValue":
        if isinstance(other, QuadraticValue):
            if other.q != self.q and other.v != 0 and self.v != 0:
                raise ValueError(f"mixing Q(sqrt({self.q})) and Q(sqrt({other.q}))")
            if other.q != self.q:
                if other.v == 0:
                    return QuadraticValue(other.u, 0, self.q)
                return other
            return other
        return QuadraticValue(_frac(other), 0, self.q)

    def _pick_q(self, other: "QuadraticValue") -> int:
        return self.q if self.v != 0 or other.v == 0 else other.q

    def __add__(self, other):
        o = self._coerce(other)
        return QuadraticValue(self.u + o.u, self.v + o.v, self._pick_q(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticValue(-self.u, -self.v, self.q)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        q = self._pick_q(o)
        return QuadraticValue(self.u * o.u + q * self.v * o.v, self.u * o.v + self.v * o.u, q)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticValue":
        return QuadraticValue(self.u, -self.v, self.q)

    def norm(self) -> Fraction:
        return self.u * self.u - self.q * self.v * self.v

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(q))")
        num = self * o.conjugate()
        return QuadraticValue(num.u / n, num.v / n, self._pick_q(o))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return QuadraticValue(1, 0, self.q) / (self ** (-n))
        result = QuadraticValue(1, 0, self.q)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sign(self) -> int:
        su = (self.u > 0) - (self.u < 0)
        sv = (self.v > 0) - (self.v < 0)
        if sv == 0:
            return su
        if su == 0 or su == sv:
            return sv
        # opposite signs: compare magnitudes via the norm
        n = self.norm()
        if n == 0:
            return 0
        return su if n > 0 else sv

    def __eq__(self, other):
        try:
            return (self - other).sign() == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.u, self.v, self.q))

    def __float__(self):
        return float(self.u) + float(self.v) * math.sqrt(self.q)

    def __bool__(self):
        return self.sign() != 0

    def __repr__(self):
        if self.v == 0:
            return f"QuadraticValue({self.u})"
        return f"QuadraticValue({self.u} + {self.v}*sqrt({self.q}))"

    def __str__(self):
        if self.v == 0:
            return str(self.u)
        return f"{self.u} + {self.v}*sqrt({self.q})"
