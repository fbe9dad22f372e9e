import random

import numpy as np
import pytest

from relclass import poly as P

from oracles import reduced_resultant_smith, sylvester


def test_arithmetic():
    a, b = [1, 2], [-1, 0, 1]
    assert P.mul(a, b) == [-1, -2, 1, 2]
    q, r = P.divmod_poly(P.mul(a, b), b)
    assert (q, P.trim(r)) == ([1, 2], [])
    assert P.exact_div([1, 0, 1], [1, 1]) is None
    assert P.gcd(P.mul([1, 1], [2, 1]), P.mul([1, 1], [3, 1])) in ([1, 1], [-1, -1])


@pytest.mark.parametrize("a,b", [([1, 1], [-2, 1]), ([2, 0, 1], [-1, 3, 1]), ([1, -3, 0, 1], [5, 1, 1])])
def test_resultant_matches_sylvester(a, b):
    assert P.resultant(a, b) == sylvester(a, b)


def test_reduced_resultant_examples():
    # (x - a, x - b) -> |a - b|
    assert P.reduced_resultant([-3, 1], [4, 1]) == 7
    # x^2 + 1 and x - 1: Z[x]/(x^2+1, x-1) = Z/2
    assert P.reduced_resultant([1, 0, 1], [-1, 1]) == 2
    # x^2 - 2 and x^2 - 3: Res = 1, so reduced resultant 1
    assert P.reduced_resultant([-2, 0, 1], [-3, 0, 1]) == 1


def test_reduced_resultant_against_smith_oracle():
    rng = random.Random(7)
    n = 0
    while n < 150:
        d1, d2 = rng.randint(1, 3), rng.randint(1, 3)
        h1 = [rng.randint(-4, 4) for _ in range(d1)] + [1]
        h2 = [rng.randint(-4, 4) for _ in range(d2)] + [1]
        if len(P.gcd(h1, h2)) > 1:
            continue
        n += 1
        assert P.reduced_resultant(h1, h2) == reduced_resultant_smith(h1, h2), (h1, h2)


def test_hnf_is_upper_triangular_and_spans():
    rows = [[2, 4, 6], [1, 3, 5], [0, 0, 7]]
    H = P.hermite_normal_form(rows)
    H = [r for r in H if any(r)]
    for i, r in enumerate(H):
        assert all(x == 0 for x in r[:i])
        assert r[i] > 0
    # same lattice volume
    assert abs(np.linalg.det(np.array(H, dtype=float))) == pytest.approx(abs(np.linalg.det(np.array(rows, dtype=float))))


def test_sturm_counts_match_numpy():
    rng = random.Random(3)
    for _ in range(60):
        roots = [rng.randint(-6, 6) for _ in range(rng.randint(1, 5))]
        p = [1]
        for r in roots:
            p = P.mul(p, [-r, 1])
        lo, hi = -3, 4
        distinct = {r for r in roots if lo < r <= hi}
        assert P.count_roots(p, lo, hi) == len(distinct)


def test_modified_resultant_real_frobenius():
    # x^2 - 8 carries the real Frobenius over F_2: the Z[F, V] version is smaller
    assert P.reduced_resultant([-8, 0, 1], [0, 1]) == 8
    assert P.modified_reduced_resultant([-8, 0, 1], [0, 1], 2) == 4


def test_modified_resultant_square_q():
    # q = 4: x - 4 is a real-Frobenius factor
    r = P.modified_reduced_resultant([-4, 1], [0, 1], 4)
    assert r > 0 and 4 % r == 0


def test_modified_resultant_without_special_factor_is_plain():
    rng = random.Random(11)
    n = 0
    while n < 80:
        h1 = [rng.randint(-3, 3) for _ in range(rng.randint(1, 3))] + [1]
        h2 = [rng.randint(-3, 3) for _ in range(rng.randint(1, 3))] + [1]
        # over F_2 the only real-Frobenius factor is x^2 - 8
        if len(P.gcd(h1, h2)) > 1 or any(len(P.gcd(h, [-8, 0, 1])) > 1 for h in (h1, h2)):
            continue
        n += 1
        plain = P.reduced_resultant(h1, h2)
        mod = P.modified_reduced_resultant(h1, h2, 2)
        assert plain % mod == 0
        assert mod == plain
