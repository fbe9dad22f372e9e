import pytest

from relclass import enumeration as E
from relclass.weil import is_real_weil, real_traces


@pytest.mark.parametrize("q,g", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 2)])
def test_matches_brute_force(q, g):
    fast = sorted(h.coeffs for h in E.enumerate_real_weil(q, g))
    slow = sorted(h.coeffs for h in E.brute_force_real_weil(q, g))
    assert fast == slow


def test_every_output_is_real_weil():
    assert all(is_real_weil(h) for h in E.enumerate_real_weil(3, 3))


def test_sorted_by_traces():
    cands = E.enumerate_candidates(2, 3)
    keys = [c.traces for c in cands]
    assert keys == sorted(keys)
    for c in cands[:20]:
        assert tuple(real_traces(c.real, len(c.traces)).values) == tuple(c.traces)


def test_constraints_are_respected_and_complete():
    cs = E.ConstraintSet([E.positivity_constraint(), E.point_count_constraint(1, lo=4)])
    got = {c.b for c in E.enumerate_candidates(2, 3, cs)}
    want = set()
    for c in E.enumerate_candidates(2, 3):
        if c.counts[0] >= 4 and all(a >= 0 for a in c.places):
            want.add(c.b)
    assert got == want


def test_threads_do_not_change_output():
    one = [c.b for c in E.enumerate_candidates(2, 4)]
    two = [c.b for c in E.enumerate_candidates(2, 4, threads=2)]
    assert one == two


def test_debug_mode_detects_non_monotone_predicate():
    # accepts only prefixes of odd depth: rejecting depth 2 while depth 3 would pass
    bad = E.Constraint("odd-depth", lambda p: p.depth % 2 == 1)
    with pytest.raises(E.ConstraintViolation):
        list(E.enumerate_candidates(2, 3, [bad], debug=True))


def test_debug_mode_accepts_monotone_predicates():
    cs = [E.positivity_constraint(), E.point_count_constraint(1, hi=4)]
    assert len(E.enumerate_candidates(2, 3, cs, debug=True)) == len(E.enumerate_candidates(2, 3, cs))


def test_count_nodes():
    n, nodes, pruned = E.count_nodes(2, 2)
    assert n == len(E.brute_force_real_weil(2, 2))
    assert nodes >= n


def test_catalog_factor():
    from relclass import poly as P
    cat = E.irreducible_catalog(2, 2)
    a, b = cat[0], cat[1]
    fac = E.catalog_factor(P.mul(P.mul(list(a), list(a)), list(b)), cat)
    assert set(fac.factors) == {tuple(a), tuple(b)}
    assert sorted(fac.multiplicities) == [1, 2]
    assert len(fac.splittings) == 1
