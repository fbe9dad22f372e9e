"""Dense univariate polynomial helpers on ascending coefficient lists.

A polynomial is a list ``[c0, c1, ..., cn]`` meaning ``c0 + c1 x + ... + cn x^n``.
Coefficients are Python ints or Fractions; nothing here uses floating point
except :func:`numeric_roots`, which is only used to *propose* candidates that
are then checked exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Sequence

import numpy as np

from .quadratic import QuadraticValue

Poly = List


def trim(p: Sequence) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    return len(trim(p)) - 1


def add(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def neg(a: Sequence) -> list:
    return [-c for c in a]


def sub(a: Sequence, b: Sequence) -> list:
    return add(a, neg(b))


def scale(a: Sequence, s) -> list:
    return trim([c * s for c in a])


def mul(a: Sequence, b: Sequence) -> list:
    a, b = trim(a), trim(b)
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def power(a: Sequence, n: int) -> list:
    out = [1]
    base = trim(a)
    while n:
        if n & 1:
            out = mul(out, base)
        base = mul(base, base)
        n >>= 1
    return out


def product(polys: Iterable[Sequence]) -> list:
    out = [1]
    for p in polys:
        out = mul(out, p)
    return out


def shift_mul(a: Sequence, k: int) -> list:
    """Multiply by x^k."""
    return trim([0] * k + list(a)) if a else []


def evaluate(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Sequence) -> list:
    return trim([i * c for i, c in enumerate(p)][1:])


def compose_linear(p: Sequence, a, b) -> list:
    """p(a*x + b)."""
    out: list = []
    lin = [b, a]
    for c in reversed(p):
        out = add(mul(out, lin), [c])
    return out


def divmod_poly(a: Sequence, b: Sequence):
    """Quotient and remainder over the rationals (Fractions)."""
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in a]
    lead = Fraction(b[-1])
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], trim(r)
    q = [Fraction(0)] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] / lead
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                r[k + j] -= c * bj
    return trim(q), trim(r[:db])


def exact_div(a: Sequence, b: Sequence) -> list | None:
    """Return a/b as an integer polynomial, or None if b does not divide a in Z[x]."""
    q, r = divmod_poly(a, b)
    if r:
        return None
    if any(c.denominator != 1 for c in q):
        return None
    return [int(c) for c in q]


def monic(p: Sequence) -> list:
    p = trim(p)
    lead = Fraction(p[-1])
    return [Fraction(c) / lead for c in p]


def content(p: Sequence) -> int:
    g = 0
    for c in p:
        g = math.gcd(g, int(c))
    return g


def primitive(p: Sequence) -> list:
    """Clear denominators and content; leading coefficient made positive."""
    p = trim(p)
    if not p:
        return []
    den = 1
    for c in p:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in p]
    g = content(ints)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def gcd(a: Sequence, b: Sequence) -> list:
    """Monic gcd over Q, returned as a primitive integer polynomial."""
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, primitive(r) if r else []
    return primitive(a) if a else []


def squarefree_part(p: Sequence) -> list:
    p = trim(p)
    if len(p) <= 2:
        return primitive(p)
    g = gcd(p, derivative(p))
    if len(g) <= 1:
        return primitive(p)
    q, r = divmod_poly(p, g)
    assert not r
    return primitive(q)


# ---------------------------------------------------------------- Sturm

def _pos_primitive(p: Sequence) -> list:
    # like primitive() but never changes the sign
    pr = primitive(p)
    if pr and (pr[-1] > 0) != (trim(p)[-1] > 0):
        pr = [-c for c in pr]
    return pr


def sturm_sequence(p: Sequence) -> list:
    p = _pos_primitive(p)
    seq = [p]
    d = derivative(p)
    if not d:
        return seq
    seq.append(_pos_primitive(d))
    while True:
        _, r = divmod_poly(seq[-2], seq[-1])
        if not r:
            break
        # keep sign of -r while clearing denominators
        seq.append(_pos_primitive([-c for c in r]))
    return seq


def _sign(x) -> int:
    if isinstance(x, QuadraticValue):
        return x.sign()
    return (x > 0) - (x < 0)


def _variations(seq, x) -> int:
    signs = [s for s in (_sign(evaluate(p, x)) for p in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Sequence, lo, hi) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi].

    ``lo`` and ``hi`` may be ints, Fractions or QuadraticValues.
    """
    # squarefree first: a repeated root at an endpoint would zero the whole chain
    seq = sturm_sequence(squarefree_part(p))
    return _variations(seq, lo) - _variations(seq, hi)


# ------------------------------------------------------------ resultants

def sylvester_matrix(a: Sequence, b: Sequence) -> list:
    a, b = trim(a), trim(b)
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    ad, bd = list(reversed(a)), list(reversed(b))
    for i in range(n):
        rows.append([0] * i + ad + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + bd + [0] * (size - n - 1 - i))
    return rows


def bareiss_det(mat) -> int:
    """Fraction-free determinant of an integer matrix."""
    m = [list(r) for r in mat]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def resultant(a: Sequence, b: Sequence) -> int:
    a, b = trim(a), trim(b)
    if len(a) <= 1 and len(b) <= 1:
        return 1
    return bareiss_det(sylvester_matrix(a, b))


def bareiss_det_poly(mat) -> list:
    """Fraction-free determinant of a matrix with entries in Z[x]."""
    m = [[trim(e) for e in r] for r in mat]
    n = len(m)
    if n == 0:
        return [1]
    sign = 1
    prev: list = [1]
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return []
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = sub(mul(m[i][j], m[k][k]), mul(m[i][k], m[k][j]))
                q = exact_div(num, prev) if num else []
                assert q is not None, "Bareiss step not exact"
                m[i][j] = q
        prev = m[k][k]
    return scale(m[n - 1][n - 1], sign)


def resultant_over_zx(a_rows: Sequence[Sequence], b_rows: Sequence[Sequence]) -> list:
    """Res_y(a, b) where a, b are polynomials in y with coefficients in Z[x].

    Inputs are ascending in y; each coefficient is an ascending list in x.
    """
    a = [trim(c) for c in a_rows]
    b = [trim(c) for c in b_rows]
    while a and not a[-1]:
        a.pop()
    while b and not b[-1]:
        b.pop()
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    ad, bd = list(reversed(a)), list(reversed(b))
    for i in range(n):
        rows.append([[]] * i + ad + [[]] * (size - m - 1 - i))
    for i in range(m):
        rows.append([[]] * i + bd + [[]] * (size - n - 1 - i))
    return bareiss_det_poly(rows)


def hermite_normal_form(rows: list) -> list:
    """Row-style upper triangular HNF of an integer matrix (rows are lattice generators)."""
    a = [list(r) for r in rows]
    if not a:
        return a
    ncols = len(a[0])
    out = []
    r = 0
    for c in range(ncols):
        # gather rows r.. with nonzero entry in column c and reduce by Euclid
        piv = None
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[i0] = a[i0], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    f = a[i][c] // a[r][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                piv = r
                break
        if piv is None:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            f = a[i][c] // a[r][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    out = [row for row in a[:r]]
    return out


def reduced_resultant(h1: Sequence, h2: Sequence) -> int:
    """Positive generator of (h1 Z[x] + h2 Z[x]) ∩ Z.

    Returns 0 when h1 and h2 share a factor over Q.  ``h1`` must be monic
    (as real Weil polynomials are).
    """
    h1, h2 = trim(h1), trim(h2)
    if h1[-1] != 1:
        if h2 and h2[-1] == 1:
            h1, h2 = h2, h1
        else:
            raise ValueError("reduced_resultant needs a monic argument")
    n = len(h1) - 1
    if n == 0:
        return 1
    if len(gcd(h1, h2)) > 1:
        return 0
    # Z[x]/(h1) is free with basis 1..x^{n-1}; the ideal image of h2 is
    # spanned by x^i h2 mod h1 for i < n.  Order coordinates from x^{n-1}
    # down to 1 so the last HNF pivot sits on the constant coordinate.
    rows = []
    cur = [int(c) for c in h2]
    for _ in range(n):
        _, r = divmod_poly(cur, h1)
        r = [int(c) for c in r] + [0] * (n - len(r))
        rows.append(list(reversed(r[:n])))
        cur = shift_mul(cur, 1)
    hnf = hermite_normal_form(rows)
    if len(hnf) < n:
        return 0
    return abs(hnf[n - 1][n - 1])


# ------------------------------------------------------------- numerics

def numeric_roots(p: Sequence) -> np.ndarray:
    p = trim(p)
    if len(p) <= 1:
        return np.array([], dtype=complex)
    return np.roots([float(c) for c in reversed(p)])


def to_str(p: Sequence, var: str = "x") -> str:
    p = trim(p)
    if not p:
        return "0"
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        mag = abs(c)
        sgn = "-" if c < 0 else "+"
        if i == 0:
            body = str(mag)
        else:
            mon = var if i == 1 else f"{var}^{i}"
            body = mon if mag == 1 else f"{mag}*{mon}"
        terms.append((sgn, body))
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sgn, body in terms[1:]:
        s += f" {sgn} {body}"
    return s


# --------------------------------------------------- integer-only fast path

def _int_prem_pos(a: list, b: list) -> list:
    """|lc(b)|^k * a mod b in Z[x] (positive multiplier, so signs are kept)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    alb = abs(lb)
    while len(r) - 1 >= db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        # r <- |lb| r - sign(lb) c x^shift b
        r = [alb * x for x in r]
        f = c if lb > 0 else -c
        for j, bj in enumerate(b):
            r[shift + j] -= f * bj
        while r and r[-1] == 0:
            r.pop()
    return r


def _int_pos_primitive(p: list) -> list:
    g = 0
    for c in p:
        g = math.gcd(g, c)
        if g == 1:
            return p
    return [c // g for c in p] if g > 1 else p


def sturm_sequence_int(p: Sequence[int]) -> list:
    p = _int_pos_primitive(trim([int(c) for c in p]))
    seq = [p]
    d = derivative(p)
    if not d:
        return seq
    seq.append(_int_pos_primitive(d))
    while True:
        r = _int_prem_pos(seq[-2], seq[-1])
        if not r:
            break
        seq.append(_int_pos_primitive([-c for c in r]))
    return seq


def sign_at_sqrt(p: Sequence[int], c: int, q: int) -> int:
    """Sign of p(c * sqrt(q)) for integer p, c, q (q not necessarily squarefree)."""
    U = V = 0
    cq = 1  # c^i q^{floor(i/2)}
    for i, a in enumerate(p):
        if i:
            cq *= c
            if i % 2 == 0:
                cq *= q
        if i % 2 == 0:
            U += a * cq
        else:
            V += a * cq
    su = (U > 0) - (U < 0)
    sv = (V > 0) - (V < 0)
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv
    n = U * U - V * V * q
    if n == 0:
        return 0
    return su if n > 0 else sv


def _int_sign_eval(p, x) -> int:
    v = 0
    for c in reversed(p):
        v = v * x + c
    return (v > 0) - (v < 0)


def _variations_signs(signs) -> int:
    prev = 0
    n = 0
    for s in signs:
        if s:
            if prev and s != prev:
                n += 1
            prev = s
    return n


def count_roots_symmetric(p: Sequence[int], c: int, q: int) -> int:
    """Distinct real roots of integer p in the closed interval [-c sqrt q, c sqrt q]."""
    seq = sturm_sequence_int(p)
    r = math.isqrt(q)
    if r * r == q:
        lo, hi = -c * r, c * r
        vlo = _variations_signs([_int_sign_eval(s, lo) for s in seq])
        vhi = _variations_signs([_int_sign_eval(s, hi) for s in seq])
        at_lo = _int_sign_eval(seq[0], lo) == 0
    else:
        vlo = _variations_signs([sign_at_sqrt(s, -c, q) for s in seq])
        vhi = _variations_signs([sign_at_sqrt(s, c, q) for s in seq])
        at_lo = sign_at_sqrt(seq[0], -c, q) == 0
    return vlo - vhi + (1 if at_lo else 0)


# ------------------------------------------- resultant in Z[F, V]

def _special_factors(q: int) -> list:
    """Real factors x - (pi + q/pi) with pi real, and the extra relation on F.

    Each entry is (s, rel): s a factor of a real Weil polynomial in Z[x], and
    rel = (a, b) encoding a + b F, which vanishes on any abelian variety whose
    real Weil polynomial has radical divisible by s.
    """
    m = math.isqrt(q)
    if m * m == q:
        return [([-2 * m, 1], ([-m], [1])), ([2 * m, 1], ([m], [1]))]
    # pi = +-sqrt(q): x = 2 pi, so 2F - x kills the factor x^2 - 4q
    return [([-4 * q, 0, 1], ([0, -1], [2]))]


def _fv_mul(u, v, q: int):
    """(a + bF)(c + dF) in Z[x][F]/(F^2 - xF + q)."""
    a, b = u
    c, d = v
    bd = mul(b, d)
    return (sub(mul(a, c), scale(bd, q)), add(add(mul(a, d), mul(b, c)), shift_mul(bd, 1)))


def frobenius_annihilator(h: Sequence, q: int) -> list:
    """R-ideal generators, R = Z[F, V] = Z[x][F]/(F^2 - xF + q), of the
    annihilator of an abelian variety with squarefree real Weil polynomial h.

    Away from the real Frobenius factors this is (h(x)); on a factor with
    pi real the ring Z[x]/(s) is a proper subring of Z[pi] and the extra
    relation between F and x lowers the ideal.  For two special factors we
    use the product of their ideals, which is contained in the intersection.
    """
    h = [int(c) for c in trim(h)]
    rest = h
    ideals = []
    for s, rel in _special_factors(q):
        qt = exact_div(rest, s)
        if qt is not None:
            rest = [int(c) for c in qt]
            ideals.append([(list(s), [0]), rel])
    gens = [(rest, [0])]
    for J in ideals:
        gens = [_fv_mul(g, j, q) for g in gens for j in J]
    return gens


def modified_reduced_resultant(h1: Sequence, h2: Sequence, q: int) -> int:
    """Positive generator of (ann_1 + ann_2) ∩ Z inside Z[F, V].

    ann_i is the Frobenius annihilator of a variety with squarefree real Weil
    polynomial h_i.  Divides reduced_resultant(h1, h2), and agrees with it
    unless one of h1, h2 has the factor of a real Frobenius.  Returns 0 when
    h1 and h2 share a factor.
    """
    h1, h2 = [int(c) for c in trim(h1)], [int(c) for c in trim(h2)]
    if h1[-1] != 1:
        h1, h2 = h2, h1
    if h1[-1] != 1:
        raise ValueError("modified_reduced_resultant needs a monic argument")
    n = len(h1) - 1
    if n == 0:
        return 1
    if len(gcd(h1, h2)) > 1:
        return 0

    def red(p):
        _, r = divmod_poly(p, h1)
        r = [int(c) for c in r] + [0] * n
        return r[:n]

    def coords(u):
        # F-part first, constants last, each from x^{n-1} down
        a, b = red(u[0]), red(u[1])
        return list(reversed(b)) + list(reversed(a))

    rows = []
    for g in frobenius_annihilator(h1, q) + frobenius_annihilator(h2, q):
        for i in range(n):
            xi = ([0] * i + [1], [0])
            for e in (xi, _fv_mul(xi, ([0], [1]), q)):
                rows.append(coords(_fv_mul(g, e, q)))
    hnf = hermite_normal_form(rows)
    if len(hnf) < 2 * n:
        return 0
    return abs(hnf[2 * n - 1][2 * n - 1])
