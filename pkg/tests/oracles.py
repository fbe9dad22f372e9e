"""Small independent oracles shared by the tests (exact, brute force)."""

from fractions import Fraction
from itertools import combinations
from math import gcd


def det(mat):
    """Fraction Gaussian elimination (independent of the Bareiss code)."""
    m = [[Fraction(x) for x in row] for row in mat]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return int(d)


def sylvester(a, b):
    """Resultant of ascending coefficient lists via the Sylvester matrix."""
    A, B = list(reversed(a)), list(reversed(b))
    m, n = len(A) - 1, len(B) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + A + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + B + [0] * (size - n - 1 - i))
    return det(rows)


def _polymod(a, h):
    """a mod monic h, ascending lists."""
    a = list(a)
    n = len(h) - 1
    for k in range(len(a) - 1, n - 1, -1):
        c = a[k]
        if c:
            for j in range(n + 1):
                a[k - n + j] -= c * h[j]
    return (a + [0] * n)[:n]


def reduced_resultant_smith(h1, h2):
    """Additive order of 1 in Z[x]/(h1, h2) for monic h1: the top invariant
    factor of the matrix of multiplication by h2 on Z[x]/(h1)."""
    n = len(h1) - 1
    cols = []
    for i in range(n):
        e = [0] * i + [1]
        prod = [0] * (len(e) + len(h2) - 1)
        for a, x in enumerate(e):
            for b, y in enumerate(h2):
                prod[a + b] += x * y
        cols.append(_polymod(prod, h1))
    M = [[cols[j][i] for j in range(n)] for i in range(n)]
    D = abs(det(M))
    if D == 0 or n == 1:
        return D
    g = 0
    for rs in combinations(range(n), n - 1):
        for cs in combinations(range(n), n - 1):
            g = gcd(g, det([[M[r][c] for c in cs] for r in rs]))
    return D // g
