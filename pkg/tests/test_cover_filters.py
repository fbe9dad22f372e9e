import pytest

from relclass import cover_filters as CF
from relclass import search as S
from relclass.weil import label_decode, point_counts


def pair(q, d, g, gp, C, A):
    Cw, Aw = label_decode(C), label_decode(A)
    return CF.PairCandidate(CF.CoverScenario(q, d, g, gp), Cw, Aw, (A,),
                            S.real_factors(q, list(reversed((1,) + _real(Aw)))),
                            S.real_factors(q, list(reversed((1,) + _real(Cw)))))


def _real(W):
    from relclass.weil import weil_to_real
    return weil_to_real(W).coeffs[1:]


def test_riemann_hurwitz_delta():
    assert CF.rh_delta(2, 2, 3) == 0
    assert CF.rh_delta(2, 2, 5) == 2
    assert CF.rh_delta(3, 2, 4) == 0
    assert CF.rh_delta(2, 3, 4) is None
    with pytest.raises(CF.FilterError):
        CF.CoverScenario(2, 2, 3, 4).delta


def test_feasible_t():
    assert CF.feasible_t(2, 0) == (0,)
    assert CF.feasible_t(2, 2) == (1, 2)
    assert CF.feasible_t(3, 1) == (1, 2)


def test_pair_counts_are_differences():
    c = pair(2, 2, 2, 3, "2.2.ab_c", "1.2.ac")
    NC = point_counts(c.C, c.depth).values
    NCp = point_counts(c.C * c.A, c.depth).values
    assert c.NC == NC
    assert c.NCp == NCp
    # the relative twist flips odd traces of A
    assert c.NCpp[0] == c.NC[0] + c.TA[0]
    assert c.NCpp[1] == c.NC[1] - c.TA[1]


def test_golden_pair_passes_all_filters():
    c = pair(2, 2, 2, 3, "2.2.ab_c", "1.2.ac")
    log = []
    assert CF.evaluate_pair(c, CF.FilterConfig(), log) is None
    assert all(ok for _, ok in log)
    assert CF.resultant_gate(c).verdict == CF.ACCEPT


def test_cyclic_divisibility():
    # unramified double cover: 2 divides #J(C)(F_2) = P_C(1)
    ok = pair(2, 2, 2, 3, "2.2.ab_c", "1.2.ac")
    assert sum(ok.C.coeffs) % 2 == 0 and CF.cyclic_divisibility(ok)
    bad = pair(2, 2, 2, 3, "2.2.a_a", "1.2.ac")   # P(1) = 5
    assert not CF.cyclic_divisibility(bad)


def test_deuring_shafarevich_by_hand():
    c = pair(2, 2, 2, 3, "2.2.ab_c", "1.2.ac")
    # gamma' - 1 = 2 (gamma - 1) + t with gamma' = gamma_C + gamma_A
    from relclass.weil import p_rank
    gC, gA = p_rank(c.C), p_rank(c.A)
    for t in (0, 1, 2, 3):
        assert CF.ds_check(c, t) == ((gC + gA) - 1 == 2 * (gC - 1) + t)
    assert CF.ds_feasible_t(c) == {(gC + gA - 1) - 2 * (gC - 1)}


def test_places_ok():
    assert CF.places_ok([3, 5, 9, 17])        # P^1 over F_2
    assert not CF.places_ok([3, 1])           # a_2 = (1 - 3) / 2 < 0
    assert not CF.places_ok([-1])


def test_curve_bound_ok_uses_static_table():
    assert CF.curve_bound_ok(2, 1, [5])
    assert not CF.curve_bound_ok(2, 1, [6])
    assert CF.curve_bound_ok(2, 0, [3, 5])
    assert not CF.curve_bound_ok(2, 0, [4, 5])


def test_reduced_resultant_requires_coprime():
    with pytest.raises(CF.FilterError):
        CF.reduced_resultant([-1, 1], [1, -2, 1])


def test_splittings():
    f, g, h = (1, 1), (-1, 1), (0, 1)
    sp = CF.splittings([f, f, g])
    assert sp == [((f, f), (g,))]
    assert len(CF.splittings([f, g, h])) == 3


def test_jacobian_resultant_rejects_resultant_one():
    # x^2 - 2 and x^2 - 3 have reduced resultant 1: no Jacobian splits that way
    assert not CF.jacobian_resultant_ok(2, 4, [3, 5, 9, 17], [(-2, 0, 1), (-3, 0, 1)])


def test_filter_config_presets():
    lemma = CF.FilterConfig.lemma_level()
    assert not lemma.parity and not lemma.relative_twist
    assert set(lemma.names()) < set(CF.FilterConfig.all().names())
