"""Linear-programming (Oesterle style) upper bounds on point counts.

A weight vector x = (x_1, ..., x_k) of nonnegative rationals defines

    f(theta) = (1/c) (1 + 2 sum_j x_j cos(j theta))^2 = 1 + 2 sum_n c_n cos(n theta)

with c = 1 + 2 sum x_j^2.  With psi(t) = sum_n c_n t^n, a genus-g curve satisfies

    #C(F_q) <= g / psi(q^-1/2) + 1 + psi(q^1/2) / psi(q^-1/2)

and the refined form weights the degree-d place count a_d by
d psi_d(q^-1/2) / psi(q^-1/2), with psi_d(t) = sum_n c_{dn} t^{dn}.
Everything is evaluated in Q(sqrt q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Tuple

from .quadratic import QuadraticValue


class DegenerateWeights(ValueError):
    pass


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        # decimals typed on the command line: use the shortest repr, not the binary value
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class DoublyPositive:
    x: Tuple[Fraction, ...]

    def __init__(self, x: Sequence = ()):
        xs = tuple(_as_fraction(v) for v in x)
        if any(v < 0 for v in xs):
            raise ValueError("weights must be nonnegative")
        object.__setattr__(self, "x", xs)

    @classmethod
    def parse(cls, s: str) -> "DoublyPositive":
        s = s.strip()
        return cls(tuple(Fraction(v) for v in s.split(",")) if s else ())

    @cached_property
    def normalizer(self) -> Fraction:
        return 1 + 2 * sum(v * v for v in self.x)

    @cached_property
    def coeffs(self) -> Tuple[Fraction, ...]:
        """(c_1, ..., c_{2k})."""
        return fourier_coeffs(self.x)[1]

    def c(self, n: int) -> Fraction:
        return self.coeffs[n - 1] if 1 <= n <= len(self.coeffs) else Fraction(0)

    def f(self, theta: float) -> float:
        import math
        s = 1 + 2 * sum(float(v) * math.cos((j + 1) * theta) for j, v in enumerate(self.x))
        return s * s / float(self.normalizer)


def fourier_coeffs(x: Sequence) -> tuple:
    """Return (c, (c_1..c_{2k})) for the weight vector x (x_0 = 1 implicit).

    Expands (sum_{j=-k}^{k} x_|j| e^{ij theta})^2; the coefficient of
    e^{in theta} is sum_{a+b=n} x_|a| x_|b|, and f's cos(n theta) coefficient
    is twice that over c.
    """
    xs = [Fraction(1)] + [_as_fraction(v) for v in x]
    k = len(xs) - 1
    c = 1 + 2 * sum(v * v for v in xs[1:])
    out = []
    for n in range(1, 2 * k + 1):
        s = Fraction(0)
        for a in range(-k, k + 1):
            b = n - a
            if -k <= b <= k:
                s += xs[abs(a)] * xs[abs(b)]
        out.append(s / c)
    return c, tuple(out)


def _tpow(q: int, sign: int, n: int) -> QuadraticValue:
    """(q^{sign/2})^n exactly."""
    if n % 2 == 0:
        v = Fraction(q) ** (sign * n // 2)
        return QuadraticValue(v, 0, q)
    # q^{n/2} = q^{(n-1)/2} sqrt(q); q^{-n/2} = q^{-(n+1)/2} sqrt(q)
    if sign > 0:
        return QuadraticValue(0, Fraction(q) ** ((n - 1) // 2), q)
    return QuadraticValue(0, Fraction(q) ** (-(n + 1) // 2), q)


def psi_eval(dp: DoublyPositive, t) -> QuadraticValue | Fraction:
    """psi(t) for t rational or in Q(sqrt q)."""
    acc = 0
    for n, cn in enumerate(dp.coeffs, start=1):
        if cn:
            acc = acc + cn * t ** n
    return acc


def psi_d_eval(dp: DoublyPositive, d: int, t):
    acc = 0
    for n, cn in enumerate(dp.coeffs, start=1):
        if cn and n % d == 0:
            acc = acc + cn * t ** n
    return acc


def psi_at_root(dp: DoublyPositive, q: int, sign: int, d: int = 1) -> QuadraticValue:
    """psi_d(q^{sign/2}) computed term by term in Q(sqrt q)."""
    acc = QuadraticValue(0, 0, q)
    for n, cn in enumerate(dp.coeffs, start=1):
        if cn and n % d == 0:
            acc = acc + cn * _tpow(q, sign, n)
    return acc


@dataclass(frozen=True)
class LinearBound:
    """#C(F_q) <= slope * g + intercept, plus optional weights on a_d."""

    q: int
    slope: QuadraticValue
    intercept: QuadraticValue
    weights: Tuple[QuadraticValue, ...] = ()

    def rhs(self, g: int) -> QuadraticValue:
        return self.slope * g + self.intercept

    def admits(self, g: int, N1: int) -> bool:
        return QuadraticValue(N1, 0, self.q) <= self.rhs(g)

    def admits_places(self, g: int, places: Sequence) -> bool:
        """sum_d w_d a_d <= rhs(g), over the places supplied (d <= len(weights))."""
        lhs = QuadraticValue(0, 0, self.q)
        for w, a in zip(self.weights, places):
            lhs = lhs + w * Fraction(a)
        return lhs <= self.rhs(g)


def oesterle_bound(q: int, dp: DoublyPositive) -> LinearBound:
    lo = psi_at_root(dp, q, -1)
    if lo.sign() <= 0:
        raise DegenerateWeights("psi(q^-1/2) must be positive")
    hi = psi_at_root(dp, q, +1)
    return LinearBound(q, 1 / lo, 1 + hi / lo)


def refined_weights(q: int, dp: DoublyPositive, dmax: int) -> LinearBound:
    if dmax < 1:
        raise ValueError("dmax must be >= 1")
    base = oesterle_bound(q, dp)
    lo = psi_at_root(dp, q, -1)
    ws = tuple(d * psi_at_root(dp, q, -1, d) / lo for d in range(1, dmax + 1))
    return LinearBound(q, base.slope, base.intercept, ws)


# ---------------------------------------------------------------- constants

FIRST_WEIGHTS = (Fraction(1), Fraction(7, 10), Fraction(1, 5))
REFINED_WEIGHTS = (Fraction(1), Fraction(17, 20), Fraction(1, 4))

# published decimal constants, read as exact rationals
PUBLISHED_FIRST = {
    2: (Fraction("0.6272"), Fraction("9.562")),
    3: (Fraction("1.153"), Fraction("11.67")),
    4: (Fraction("1.435"), Fraction("21.75")),
}
PUBLISHED_REFINED = {
    "weights": (Fraction(1), 2 * Fraction("0.3366"), 3 * Fraction("0.1382"), 4 * Fraction("0.0537")),
    "slope": Fraction("0.8042"),
    "intercept": Fraction("5.619"),
}


def first_bound(q: int, g: int) -> Fraction:
    """The published linear bound on #C(F_q) for q in {2, 3, 4}."""
    s, c = PUBLISHED_FIRST[q]
    return s * g + c


def refined_lhs(places: Sequence) -> Fraction:
    w = PUBLISHED_REFINED["weights"]
    return sum((wi * Fraction(a) for wi, a in zip(w, places)), Fraction(0))


def refined_rhs(g: int) -> Fraction:
    return PUBLISHED_REFINED["slope"] * g + PUBLISHED_REFINED["intercept"]


# ------------------------------------------------------------ static table

# max #C(F_q) for genus 1..10
_STATIC = {
    2: (5, 6, 7, 8, 9, 10, 10, 11, 12, 13),
    4: (9, 10, 14, 15, 17, 20, 21, 23, 26, 27),
    16: (25, 33, 38, 45, 53, 65, 69, 75, 81, 86),
    3: (7, 8, 10, 12, 13, 14, 16, 18, 19, 21),
    9: (16, 20, 28, 30, 35, 38, 43, 46, 50, 54),
}
# the third binary row is printed with the label 2^3 but its entries are
# F_16 data (genus 1 gives 16 + 1 + 8 = 25); accept both keys
_ALIASES = {8: 16}


def static_bound(q: int, g: int) -> int:
    key = _ALIASES.get(q, q)
    if key not in _STATIC or not 1 <= g <= 10:
        raise KeyError(f"no tabulated bound for (q, g) = ({q}, {g})")
    return _STATIC[key][g - 1]


def has_static_bound(q: int, g: int) -> bool:
    key = _ALIASES.get(q, q)
    return key in _STATIC and 1 <= g <= 10


def point_bound(q: int, g: int, field_power: int = 1):
    """Best available bound on #C(F_{q^field_power}) for genus g (exact)."""
    Q = q ** field_power
    if g == 0:
        return Q + 1
    if has_static_bound(Q, g):
        return static_bound(Q, g)
    if Q in PUBLISHED_FIRST:
        return first_bound(Q, g)
    # Weil-Serre style fallback (sqrt bound): Q + 1 + g * floor(2 sqrt Q)
    import math
    return Q + 1 + g * math.isqrt(4 * Q)
