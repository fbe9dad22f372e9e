"""Simple abelian varieties of order one over F_2 (and the trivial q = 3, 4 case).

Over F_2 every root alpha of such a Weil polynomial satisfies

    alpha^2 + (eta - 1) alpha - 2 eta = 0

for a root of unity eta of some order n.  Eliminating eta gives the integer
polynomial R_n(x) = Res_y(Phi_n(y), x^2 + (y - 1) x - 2 y) of degree 2 phi(n),
which is irreducible except for n = 7, 30 (two factors) and the degenerate
n = 1 (R_1 = x^2 - 2, whose square is the Weil polynomial).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import List

import numpy as np

from . import poly as P
from .weil import (
    TraceSeq,
    WeilError,
    WeilPoly,
    euler_phi,
    is_weil,
    label_encode,
    mobius,
    order,
    p_rank,
    traces,
)

SPLIT_ORDERS = (7, 30)

# excess coefficients, exact
EXCESS_COEFFS = (Fraction("1.3366"), Fraction("0.3366"), Fraction("0.1137"), Fraction("0.0537"))
EXCESS_PER_DIM = Fraction("1.5612")


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple:
    """Ascending coefficients of Phi_n."""
    # x^n - 1 = prod_{d | n} Phi_d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = P.exact_div(num, list(cyclotomic(d)))
    return tuple(num)


def cyclotomic_trace(n: int, i: int) -> int:
    """Tr_{Q(eta)/Q}(eta^i) for eta of order n."""
    m = n // math.gcd(n, i)
    return mobius(m) * euler_phi(n) // euler_phi(m)


@lru_cache(maxsize=None)
def eta_resultant(n: int) -> tuple:
    """R_n(x) as an ascending integer tuple, via the Sylvester matrix over Z[x]."""
    phi = list(cyclotomic(n))
    # x^2 + (y - 1) x - 2y  =  (x^2 - x) + y (x - 2), as a polynomial in y
    lin = [[0, -1, 1], [-2, 1]]
    res = P.resultant_over_zx([[c] for c in phi], lin)
    if res and res[-1] < 0:
        res = P.neg(res)
    return tuple(res)


def _split_by_roots(R: list, k: int) -> list:
    """Split R into two integer factors of degree k using conjugate-pair grouping."""
    roots = P.numeric_roots(R)
    upper = sorted([r for r in roots if r.imag > 0], key=lambda z: (round(z.real, 9), z.imag))
    if 2 * len(upper) != len(R) - 1:
        raise WeilError("unexpected real roots while splitting")
    half = k // 2
    for combo in itertools.combinations(range(len(upper)), half):
        zs = []
        for i in combo:
            zs += [upper[i], upper[i].conjugate()]
        approx = np.real(np.poly(zs))[::-1]
        cand = [int(round(c)) for c in approx]
        other = P.exact_div(R, cand)
        if other is not None and len(other) == k + 1:
            return sorted([cand, other], key=lambda f: label_encode(WeilPoly.from_ascending(2, f)).__str__())
    raise WeilError("no integer splitting found")


@lru_cache(maxsize=None)
def _eta_to_weil_cached(n: int) -> tuple:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        # R_1 = x^2 - 2 has real roots; the simple class is its square
        return (WeilPoly.from_ascending(2, P.power([-2, 0, 1], 2)),)
    R = list(eta_resultant(n))
    if n in SPLIT_ORDERS:
        phi = euler_phi(n)
        return tuple(WeilPoly.from_ascending(2, f) for f in _split_by_roots(R, phi))
    return (WeilPoly.from_ascending(2, R),)


def eta_to_weil(n: int) -> List[WeilPoly]:
    return list(_eta_to_weil_cached(n))


def dimension_of(n: int) -> int:
    if n == 1:
        return 2
    if n in SPLIT_ORDERS:
        return euler_phi(n) // 2
    return euler_phi(n)


def order_one_traces(n: int, m: int = 4) -> TraceSeq:
    """T_{A,2}, T_{A,4}, ... for the class attached to eta of order n.

    Closed forms for the first four traces when n is not 1, 2, 7, 30; all other
    entries (and those n) come from Newton identities on the polynomial(s).
    For n = 7, 30 the traces of the product R_n (both classes together) are
    returned.
    """
    if n in (1, 2) + SPLIT_ORDERS:
        polys = eta_to_weil(n)
        vals = [0] * m
        for p in polys:
            vals = [a + b for a, b in zip(vals, traces(p, m).values)]
        return TraceSeq(2, tuple(vals))
    phi = euler_phi(n)
    t = [cyclotomic_trace(n, i) for i in range(1, 5)]
    closed = [
        phi - t[0],
        phi + 2 * t[0] + t[1],
        phi + 3 * t[0] - 3 * t[1] - t[2],
        phi + 4 * t[0] - 2 * t[1] + 4 * t[2] + t[3],
    ]
    if m <= 4:
        return TraceSeq(2, tuple(closed[:m]))
    tail = traces(eta_to_weil(n)[0], m).values[4:]
    return TraceSeq(2, tuple(closed) + tuple(tail))


def excess(t, g: int) -> Fraction:
    v = list(t.values if isinstance(t, TraceSeq) else t)
    if len(v) < 4:
        raise ValueError("excess needs four traces")
    c1, c2, c3, c4 = EXCESS_COEFFS
    return c1 * v[0] + c2 * v[1] + c3 * (v[2] - v[0]) + c4 * (v[3] - v[1]) - EXCESS_PER_DIM * g


def render4(x: Fraction) -> str:
    """Four-decimal rendering of an exact rational."""
    d = Decimal(x.numerator) / Decimal(x.denominator)
    return str(d.quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN))


@dataclass(frozen=True)
class OrderOneVariety:
    n: int
    g: int
    index: int = 0  # which factor, for n = 7, 30
    _weil: WeilPoly | None = field(default=None, compare=False, repr=False)

    @cached_property
    def weil(self) -> WeilPoly:
        if self._weil is not None:
            return self._weil
        return eta_to_weil(self.n)[self.index]

    @cached_property
    def label(self) -> str:
        return str(label_encode(self.weil))

    def traces(self, m: int = 4) -> TraceSeq:
        if self.n in (1, 2) + SPLIT_ORDERS or self._weil is not None:
            return traces(self.weil, m)
        return order_one_traces(self.n, m)

    @cached_property
    def excess(self) -> Fraction:
        return excess(self.traces(4), self.g)

    def check(self) -> bool:
        """Order one, Weil, and the p-rank rule."""
        w = self.weil
        two_power = self.n & (self.n - 1) == 0
        return order(w) == 1 and is_weil(w) and ((p_rank(w) == 0) == two_power)


def orders_up_to_dim(max_dim: int) -> list:
    """All n whose class(es) have dimension <= max_dim."""
    out = []
    # phi(n) >= sqrt(n/2), so n <= 2 * (2 max_dim)^2 covers the split orders too
    for n in range(1, 8 * max_dim * max_dim + 3):
        if dimension_of(n) <= max_dim:
            out.append(n)
    return out


def enumerate_order_one(max_dim: int, q: int = 2, sort: bool = True) -> list:
    """Catalog of simple order-1 classes of dimension <= max_dim.

    For q = 3, 4 the answer is the single elliptic curve T^2 - qT + q.
    Sorting by label forces every Weil polynomial to be built; pass
    ``sort=False`` for a cheap (dimension, n) ordering.
    """
    if max_dim < 1:
        raise ValueError("max_dim must be >= 1")
    if q in (3, 4):
        return [OrderOneVariety(0, 1, 0, WeilPoly(q, 1, (1, -q, q)))]
    if q != 2:
        return []
    cat = []
    for n in orders_up_to_dim(max_dim):
        g = dimension_of(n)
        count = 2 if n in SPLIT_ORDERS else 1
        for i in range(count):
            cat.append(OrderOneVariety(n, g, i))
    if sort:
        cat.sort(key=lambda v: (v.g, v.label))
    else:
        cat.sort(key=lambda v: (v.g, v.n, v.index))
    return cat


def check_t2_plus_t4(v) -> bool:
    if isinstance(v, OrderOneVariety):
        t, g = v.traces(2), v.g
    else:
        t, g = v
    s = t[0] + t[1]
    return s > 2 if g >= 4 else s >= 2


def catalog_rows(cat) -> list:
    rows = []
    for v in cat:
        t = v.traces(4)
        rows.append({
            "label": v.label,
            "n": v.n,
            "dimension": v.g,
            "T2": t[0], "T4": t[1], "T8": t[2], "T16": t[3],
            "T2+T4": t[0] + t[1],
            "excess": str(v.excess),
            "excess_4dp": render4(v.excess),
        })
    return rows


# ------------------------------------------------ enumeration for any q

def _unit_constraints(q: int):
    """Prefix tests for prod (q + 1 - x_i) = 1 over the real roots x_i of h.

    With y_i = q + 1 - x_i in [a, b] = [(sqrt q - 1)^2, (sqrt q + 1)^2] we
    need sum log y_i = 0.  On [a, b]

        phi(y) = L(y) - (y - a)(y - b) / (2 b^2) <= log y <= (y - 1) - (y - 1)^2 / (2 b^2) = psi(y)

    with L the chord of log through a and b (log - phi is concave and
    vanishes at a, b; psi - log is convex with a double zero at 1).  So
    sum phi(y_i) <= 0 <= sum psi(y_i), and both sums only need the first
    two power sums of the x_i, i.e. T_1 and T_2.
    """
    from .enumeration import Constraint

    r = math.sqrt(q)
    a, b = (r - 1) ** 2, (r + 1) ** 2
    la = math.log(a) if a > 0 else -math.inf
    m = (math.log(b) - la) / (b - a)
    tol = 1e-9

    def sums(p):
        g = p.g
        Sy = g * (q + 1) - p.traces[0]
        Sy2 = None
        if len(p.traces) >= 2:
            Sy2 = g * (q + 1) ** 2 - 2 * (q + 1) * p.traces[0] + p.traces[1] + 2 * q * p.g
        return g, Sy, Sy2

    def lower(p):
        g, Sy, Sy2 = sums(p)
        if Sy2 is None or g == 1:
            return g * la + m * (Sy - g * a) <= tol
        return g * la + m * (Sy - g * a) - (Sy2 - (a + b) * Sy + g * a * b) / (2 * b * b) <= tol

    def upper(p):
        g, Sy, Sy2 = sums(p)
        if Sy2 is None or g == 1:
            return Sy - g >= -tol
        return (Sy - g) - (Sy2 - 2 * Sy + g) / (2 * b * b) >= -tol

    def leaf(p):
        h = [1] + list(p.b)  # descending
        return P.evaluate(list(reversed(h)), q + 1) == 1

    return [Constraint("unit-lower", lower), Constraint("unit-upper", upper),
            Constraint("order-one", leaf, leaf_only=True)]


def order_one_by_enumeration(q: int, max_dim: int) -> List[WeilPoly]:
    """Every Weil polynomial P with P(1) = 1 and dimension <= max_dim (not only simple ones).

    Exhaustive over real Weil polynomials, pruned by :func:`_unit_constraints`.
    """
    from .enumeration import ConstraintSet, enumerate_real_weil
    from .weil import real_to_weil

    out = []
    for g in range(1, max_dim + 1):
        for h in enumerate_real_weil(q, g, ConstraintSet(_unit_constraints(q))):
            W = real_to_weil(h)
            if order(W) == 1:
                out.append(W)
    return out
