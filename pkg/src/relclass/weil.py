"""Weil polynomials, their real counterparts, traces and point counts.

Conventions
-----------
``WeilPoly.coeffs`` is (a_0, a_1, ..., a_{2g}) for
P(T) = a_0 T^{2g} + a_1 T^{2g-1} + ... + a_{2g}, with a_0 = 1 and
a_{2g-i} = q^{g-i} a_i.  ``RealWeilPoly.coeffs`` is (b_0, ..., b_g) for
h(x) = x^g + b_1 x^{g-1} + ... + b_g, so that P(T) = T^g h(T + q/T).
Both are "descending"; every helper in :mod:`relclass.poly` works on
ascending lists, hence the ``ascending`` properties.

Trace sequences are indexed from 1: ``traces[0]`` is T_{q}, ``traces[1]`` is
T_{q^2} and so on.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Tuple

from . import poly as P
from .quadratic import QuadraticValue


class WeilError(ValueError):
    pass


# ---------------------------------------------------------- small number theory

def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius needs n >= 1")
    res, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    if m > 1:
        res = -res
    return res


def euler_phi(n: int) -> int:
    res, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            res -= res // p
        p += 1
    if m > 1:
        res -= res // m
    return res


def divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


def prime_of(q: int) -> int:
    """The characteristic p of F_q."""
    for p in range(2, q + 1):
        if q % p == 0:
            m = q
            while m % p == 0:
                m //= p
            if m != 1:
                raise WeilError(f"{q} is not a prime power")
            return p
    raise WeilError(f"{q} is not a prime power")


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


# ------------------------------------------------------------------ Newton

def newton_power_sums(a: Sequence[int], m: int) -> list:
    """Power sums p_1..p_m of the roots of x^n + a_1 x^{n-1} + ... + a_n.

    ``a`` is (a_1, ..., a_n); missing coefficients are zero.
    """
    n = len(a)
    p: list = []
    for k in range(1, m + 1):
        s = 0
        for i in range(1, min(k - 1, n) + 1):
            s -= a[i - 1] * p[k - i - 1]
        if k <= n:
            s -= k * a[k - 1]
        p.append(s)
    return p


def newton_coeffs(p: Sequence[int], n: int) -> list:
    """Inverse of :func:`newton_power_sums`: (a_1..a_n) from p_1..p_n.

    Raises :class:`WeilError` if a coefficient fails to be integral.
    """
    if len(p) < n:
        raise WeilError(f"need {n} power sums, got {len(p)}")
    a: list = []
    for k in range(1, n + 1):
        s = Fraction(p[k - 1])
        for i in range(1, k):
            s += a[i - 1] * p[k - i - 1]
        val = -s / k
        if val.denominator != 1:
            raise WeilError(f"malformed trace sequence: coefficient a_{k} = {val} is not integral")
        a.append(int(val))
    return a


# ------------------------------------------------------------------ types

@dataclass(frozen=True)
class TraceSeq:
    q: int
    values: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def at(self, k: int) -> int:
        """T_{q^k} (1-indexed)."""
        return self.values[k - 1]

    def __add__(self, other: "TraceSeq") -> "TraceSeq":
        if other.q != self.q:
            raise WeilError("trace sequences over different fields")
        m = min(len(self), len(other))
        return TraceSeq(self.q, tuple(a + b for a, b in zip(self.values[:m], other.values[:m])))

    def __sub__(self, other: "TraceSeq") -> "TraceSeq":
        m = min(len(self), len(other))
        return TraceSeq(self.q, tuple(a - b for a, b in zip(self.values[:m], other.values[:m])))


@dataclass(frozen=True)
class PointCounts:
    q: int
    values: Tuple[int, ...]
    places: Tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not self.places:
            object.__setattr__(self, "places", tuple(places_from_counts(vals)))

    def N(self, i: int) -> int:
        return self.values[i - 1]


@dataclass(frozen=True)
class IsogenyLabel:
    g: int
    q: int
    coeff_codes: Tuple[str, ...]

    def __str__(self):
        codes = "_".join(self.coeff_codes) if self.coeff_codes else ""
        return f"{self.g}.{self.q}.{codes}"


@dataclass(frozen=True)
class WeilPoly:
    q: int
    g: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) != 2 * self.g + 1:
            raise WeilError(f"expected {2 * self.g + 1} coefficients, got {len(c)}")
        if c[0] != 1:
            raise WeilError("Weil polynomial must be monic")

    @classmethod
    def from_ascending(cls, q: int, asc: Sequence[int]) -> "WeilPoly":
        asc = P.trim(asc)
        deg = len(asc) - 1
        if deg % 2:
            raise WeilError("odd degree")
        return cls(q, deg // 2, tuple(reversed(asc)))

    @classmethod
    def from_first_half(cls, q: int, a: Sequence[int]) -> "WeilPoly":
        """Build from (a_1, ..., a_g) via the functional equation."""
        g = len(a)
        full = [1] + list(a)
        for i in range(g - 1, -1, -1):
            full.append(q ** (g - i) * full[i])
        return cls(q, g, tuple(full))

    @property
    def ascending(self) -> list:
        return list(reversed(self.coeffs))

    def satisfies_functional_equation(self) -> bool:
        g, q, a = self.g, self.q, self.coeffs
        return all(a[2 * g - i] == q ** (g - i) * a[i] for i in range(g + 1))

    def __call__(self, x):
        return P.evaluate(self.ascending, x)

    def __mul__(self, other: "WeilPoly") -> "WeilPoly":
        if other.q != self.q:
            raise WeilError("product over different fields")
        return WeilPoly.from_ascending(self.q, P.mul(self.ascending, other.ascending))

    @property
    def label(self) -> str:
        return str(label_encode(self))

    def __str__(self):
        return P.to_str(self.ascending, "T")


@dataclass(frozen=True)
class RealWeilPoly:
    q: int
    g: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) != self.g + 1 or c[0] != 1:
            raise WeilError("real Weil polynomial must be monic of degree g")

    @classmethod
    def from_ascending(cls, q: int, asc: Sequence[int]) -> "RealWeilPoly":
        asc = P.trim(asc)
        return cls(q, len(asc) - 1, tuple(reversed(asc)))

    @property
    def ascending(self) -> list:
        return list(reversed(self.coeffs))

    def __mul__(self, other: "RealWeilPoly") -> "RealWeilPoly":
        return RealWeilPoly.from_ascending(self.q, P.mul(self.ascending, other.ascending))

    def __str__(self):
        return P.to_str(self.ascending, "x")


# ------------------------------------------------------------ conversions

def coeffs_to_power_sums(p, m: int) -> TraceSeq:
    """Root power sums p_1..p_m of a WeilPoly or RealWeilPoly."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return TraceSeq(p.q, tuple(newton_power_sums(p.coeffs[1:], m)))


def power_sums_to_coeffs(t, g: int, q: int) -> WeilPoly:
    vals = list(t.values if isinstance(t, TraceSeq) else t)
    if g == 0:
        return WeilPoly(q, 0, (1,))
    a = newton_coeffs(vals, g)
    return WeilPoly.from_first_half(q, a)


def real_to_weil(h: RealWeilPoly) -> WeilPoly:
    """P(T) = T^g h(T + q/T) = sum_k b_{g-k} T^{g-k} (T^2 + q)^k."""
    q, g = h.q, h.g
    hasc = h.ascending
    out: list = []
    base = [q, 0, 1]
    for k, c in enumerate(hasc):
        if c:
            out = P.add(out, P.scale(P.shift_mul(P.power(base, k), g - k), c))
    return WeilPoly.from_ascending(q, out)


def weil_to_real(p: WeilPoly) -> RealWeilPoly:
    if not p.satisfies_functional_equation():
        raise WeilError("not a Weil-symmetric polynomial")
    q, g = p.q, p.g
    rem = p.ascending
    hasc = [0] * (g + 1)
    base = [q, 0, 1]
    # peel off the top: the x^k term of h contributes T^{g+k} as leading term
    for k in range(g, -1, -1):
        c = rem[g + k] if g + k < len(rem) else 0
        hasc[k] = c
        if c:
            rem = P.sub(rem, P.scale(P.shift_mul(P.power(base, k), g - k), c))
    if P.trim(rem):
        raise WeilError("not a Weil-symmetric polynomial")
    return RealWeilPoly.from_ascending(q, hasc)


def dickson_table(q: int, m: int) -> list:
    """Rows k=1..m of (coef_j) with T_k = sum_j coef_j * s_{k-2j}, s_0 = g.

    Coefficient of s_{k-2j} is (k/(k-j)) C(k-j, j) (-q)^j.
    """
    rows = []
    for k in range(1, m + 1):
        row = []
        for j in range(k // 2 + 1):
            c = Fraction(k, k - j) * math.comb(k - j, j) * (-q) ** j
            row.append(int(c))
        rows.append(row)
    return rows


def real_traces(h: RealWeilPoly, m: int) -> TraceSeq:
    """Frobenius traces T_{q^k} computed directly from h (no passage through P)."""
    s = newton_power_sums(h.coeffs[1:], m)
    out = []
    for k, row in enumerate(dickson_table(h.q, m), start=1):
        t = 0
        for j, c in enumerate(row):
            idx = k - 2 * j
            t += c * (h.g if idx == 0 else s[idx - 1])
        out.append(t)
    return TraceSeq(h.q, tuple(out))


def traces(p: WeilPoly, m: int) -> TraceSeq:
    return coeffs_to_power_sums(p, m)


# --------------------------------------------------------------- validity

def real_roots_in_interval(hasc: Sequence[int], q: int) -> bool:
    """All roots of h real and inside [-2 sqrt q, 2 sqrt q], decided exactly.

    The integer Sturm chain of h ends in gcd(h, h'), so it also gives the
    number of distinct roots; when neither endpoint is a root, the sign
    variations count distinct roots strictly inside the interval.
    """
    h = P.trim(hasc)
    if len(h) <= 1:
        return True
    seq = P.sturm_sequence_int(h)
    distinct = (len(h) - 1) - (len(seq[-1]) - 1)
    r = math.isqrt(q)
    if r * r == q:
        lo, hi = -2 * r, 2 * r
        slo = [P._int_sign_eval(f, lo) for f in seq]
        shi = [P._int_sign_eval(f, hi) for f in seq]
    else:
        slo = [P.sign_at_sqrt(f, -2, q) for f in seq]
        shi = [P.sign_at_sqrt(f, 2, q) for f in seq]
    if slo[0] == 0 or shi[0] == 0:
        return real_roots_in_interval_slow(h, q)
    return P._variations_signs(slo) - P._variations_signs(shi) == distinct


def real_roots_in_interval_slow(hasc: Sequence[int], q: int) -> bool:
    """Reference version working in Q(sqrt q) with rational Sturm chains."""
    h = P.trim(hasc)
    if len(h) <= 1:
        return True
    s = P.squarefree_part(h)
    n = len(s) - 1
    if is_square(q):
        r = 2 * math.isqrt(q)
        lo, hi = -r, r
    else:
        lo = QuadraticValue(0, -2, q)
        hi = QuadraticValue(0, 2, q)
    cnt = P.count_roots(s, lo, hi)
    if P.evaluate(s, lo) == 0:
        cnt += 1
    return cnt == n


def is_weil(p: WeilPoly) -> bool:
    if not p.satisfies_functional_equation():
        return False
    if p.g == 0:
        return True
    return real_roots_in_interval(weil_to_real(p).ascending, p.q)


def is_real_weil(h: RealWeilPoly) -> bool:
    return real_roots_in_interval(h.ascending, h.q)


# ------------------------------------------------------------ point counts

def places_from_counts(N: Sequence[int]) -> list:
    out = []
    for d in range(1, len(N) + 1):
        s = sum(mobius(d // e) * N[e - 1] for e in divisors(d))
        out.append(Fraction(s, d))
    return out


def counts_from_traces(t: TraceSeq) -> PointCounts:
    q = t.q
    return PointCounts(q, tuple(q ** i + 1 - v for i, v in enumerate(t.values, start=1)))


def point_counts(p: WeilPoly, m: int) -> PointCounts:
    if p.g == 0:
        return PointCounts(p.q, tuple(p.q ** i + 1 for i in range(1, m + 1)))
    return counts_from_traces(traces(p, m))


def positivity_ok(pc) -> bool:
    """Nonnegativity of all N_i and all place counts a_d."""
    vals = pc.values if isinstance(pc, PointCounts) else tuple(pc)
    if any(v < 0 for v in vals):
        return False
    places = pc.places if isinstance(pc, PointCounts) else places_from_counts(vals)
    return all(a >= 0 for a in places)


def p_rank(p: WeilPoly) -> int:
    """Number of p-adic unit roots: the largest i <= g with p not dividing a_i."""
    pr = prime_of(p.q)
    r = 0
    for i in range(p.g + 1):
        if p.coeffs[i] % pr != 0:
            r = i
    return r


def twist(t: TraceSeq) -> TraceSeq:
    return TraceSeq(t.q, tuple((-1) ** i * v for i, v in enumerate(t.values, start=1)))


def order(p: WeilPoly) -> int:
    return sum(p.coeffs)


def constant_relative_poly(p: WeilPoly, d: int) -> WeilPoly:
    """prod_{i=1}^{d-1} P(zeta_d^i T), via power sums.

    The power sums of the roots of P(zeta^i T) are zeta^{-ik} T_k; summing
    over i = 1..d-1 multiplies T_k by d [d | k] - 1.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    n = 2 * p.g * (d - 1)
    if n == 0:
        return WeilPoly(p.q, 0, (1,))
    t = traces(p, n).values
    s = [v * (d - 1 if k % d == 0 else -1) for k, v in enumerate(t, start=1)]
    a = newton_coeffs(s, n)
    return WeilPoly(p.q, n // 2, tuple([1] + a))


# ------------------------------------------------------------------ labels

_LETTERS = "abcdefghijklmnopqrstuvwxyz"
_LABEL_RE = re.compile(r"^(\d+)\.(\d+)\.([a-z_]*)$")


def encode_int(n: int) -> str:
    if n < 0:
        return "a" + encode_int(-n)
    if n == 0:
        return "a"
    out = ""
    while n:
        n, r = divmod(n, 26)
        out = _LETTERS[r] + out
    return out


def decode_int(code: str) -> int:
    if not code or any(c not in _LETTERS for c in code):
        raise WeilError(f"bad coefficient code {code!r}")
    if code == "a":
        return 0
    if code[0] == "a":
        rest = code[1:]
        if rest[0] == "a":
            raise WeilError(f"bad coefficient code {code!r}")
        return -decode_int(rest)
    v = 0
    for c in code:
        v = 26 * v + _LETTERS.index(c)
    return v


def label_encode(p: WeilPoly) -> IsogenyLabel:
    return IsogenyLabel(p.g, p.q, tuple(encode_int(a) for a in p.coeffs[1 : p.g + 1]))


def parse_label(s: str) -> tuple:
    m = _LABEL_RE.match(s.strip())
    if not m:
        raise WeilError(f"malformed label {s!r}")
    g, q, body = int(m.group(1)), int(m.group(2)), m.group(3)
    codes = body.split("_") if body else []
    if len(codes) != g:
        raise WeilError(f"label {s!r}: expected {g} coefficient codes")
    return g, q, [decode_int(c) for c in codes]


def label_decode(s: str, q: int | None = None) -> WeilPoly:
    g, lq, a = parse_label(s)
    if q is not None and q != lq:
        raise WeilError(f"label {s!r} is over F_{lq}, not F_{q}")
    return WeilPoly.from_first_half(lq, a)


def real_from_label(s: str) -> RealWeilPoly:
    return weil_to_real(label_decode(s))


def real_label(h: RealWeilPoly) -> str:
    return label_encode(real_to_weil(h)).__str__()
