from itertools import combinations_with_replacement

import pytest

from relclass import order_one as O
from relclass.enumeration import enumerate_real_weil
from relclass.weil import WeilPoly, label_encode, order, real_to_weil, traces


@pytest.fixture(scope="module")
def cat6():
    return O.enumerate_order_one(6)


def test_catalog_size_and_checks(cat6):
    assert len(cat6) == 16
    assert all(v.check() for v in cat6)


def test_split_orders_give_two_classes(cat6):
    by_n = {}
    for v in cat6:
        by_n.setdefault(v.n, []).append(v.label)
    assert len(by_n[7]) == 2 and len(by_n[30]) == 2
    assert all(len(v) == 1 for n, v in by_n.items() if n not in (7, 30))


def test_eta_traces_match_polynomial_traces():
    for v in O.enumerate_order_one(12, sort=False):
        assert O.order_one_traces(v.n, 4).values == traces(v.weil, 4).values or v.n in O.SPLIT_ORDERS


def test_render4():
    from fractions import Fraction
    assert O.render4(Fraction(1, 8)) == "0.1250"
    assert O.render4(Fraction(0)) == "0.0000"


def test_q34_catalog_is_the_ordinary_elliptic_curve():
    for q in (3, 4):
        (v,) = O.enumerate_order_one(6, q)
        assert v.weil.coeffs == (1, -q, q)


def _products(cat, max_dim):
    out = set()
    for k in range(1, max_dim + 1):
        for combo in combinations_with_replacement(cat, k):
            if sum(v.g for v in combo) <= max_dim:
                W = combo[0].weil
                for v in combo[1:]:
                    W = W * v.weil
                out.add(str(label_encode(W)))
    return out


def test_pruned_enumeration_matches_catalog_products_q2():
    # order is multiplicative and every factor has order >= 1, so the order-one
    # classes of dimension <= 4 are exactly the products of simple ones
    cat = O.enumerate_order_one(4)
    got = {str(label_encode(W)) for W in O.order_one_by_enumeration(2, 4)}
    assert got == _products(cat, 4)


@pytest.mark.parametrize("q,g", [(2, 3), (3, 3), (4, 3), (3, 4)])
def test_pruning_is_sound_against_unpruned_scan(q, g):
    plain = {h for h in enumerate_real_weil(q, g) if order(real_to_weil(h)) == 1}
    pruned = {W for W in O.order_one_by_enumeration(q, g) if W.g == g}
    assert {real_to_weil(h) for h in plain} == pruned


def test_excess_of_table_rows(cat6):
    ex = {v.label: O.render4(v.excess) for v in cat6}
    assert ex["1.2.ac"] == "0.0002"
    assert ex["2.2.a_ae"] == "0.0000"


def test_t2_plus_t4_rule():
    assert O.check_t2_plus_t4(((1, 1), 3))
    assert not O.check_t2_plus_t4(((1, 1), 4))
    assert O.check_t2_plus_t4(((1, 2), 4))


def test_catalog_rows_columns(cat6):
    rows = O.catalog_rows(cat6)
    assert list(rows[0]) == ["label", "n", "dimension", "T2", "T4", "T8", "T16", "T2+T4", "excess", "excess_4dp"]
    assert all(r["T2+T4"] == r["T2"] + r["T4"] for r in rows)


def test_bad_max_dim():
    with pytest.raises(ValueError):
        O.enumerate_order_one(0)
    assert isinstance(WeilPoly(2, 1, (1, -2, 2)), WeilPoly)
