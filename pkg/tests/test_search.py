import warnings

import pytest

from relclass import cover_filters as CF
from relclass import search as S
from relclass.weil import WeilPoly, order, point_counts

from conftest import golden_pairs, pair_key


def test_superset_without_curve_data(geo_bare):
    got = {pair_key(p) for p in S.all_pairs(geo_bare)}
    assert golden_pairs() <= got


def test_curve_data_only_removes(geo_bare, geo_fixture):
    bare = {p.key() for p in S.all_pairs(geo_bare)}
    fix = {p.key() for p in S.all_pairs(geo_fixture)}
    assert fix <= bare


def test_monotone_filters(geo_lemma, geo_bare):
    # the full filter set is the lemma-level set plus more filters
    assert {p.key() for p in S.all_pairs(geo_bare)} <= {p.key() for p in S.all_pairs(geo_lemma)}


def test_spot_rows(geo_fixture):
    got = {pair_key(p) for p in S.all_pairs(geo_fixture)}
    assert {C for d, g, gp, A, C in got if (d, g, gp, A) == (2, 2, 3, "1.2.ac")} == {"2.2.ab_c", "2.2.b_c"}
    assert (7, 2, 8, "6.2.af_j_ah_d_ab_ab", "2.2.c_d") in got


def test_result_invariants(geo_bare):
    for p in S.all_pairs(geo_bare):
        assert order(p.A) == 1
        m = max(p.gp, 4)
        for Wp in (p.C, p.Cp):
            assert CF.places_ok(point_counts(Wp, m).values)
        if p.d == 2:
            Atw = WeilPoly(p.q, p.A.g, tuple(c * (-1) ** i for i, c in enumerate(p.A.coeffs)))
            assert CF.places_ok(point_counts(p.C * Atw, m).values)


def test_statuses(geo_bare, geo_fixture):
    assert {p.status for p in S.all_pairs(geo_bare)} == {S.POLY_LEVEL}
    assert S.CURVE_VERIFIED in {p.status for p in S.all_pairs(geo_fixture)}


def test_d2_runs_before_followups(geo_bare):
    # every d > 2 report sits next to d = 2 data for the same (g, g') or none exists
    assert all(k[1] == 2 or k in geo_bare for k in geo_bare)


def test_threads_do_not_change_output():
    spec1 = S.SearchSpec(ds=(2, 4), g_range=(2, 2), threads=1)
    spec2 = S.SearchSpec(ds=(2, 4), g_range=(2, 2), threads=2)
    r1 = [p.row() for p in S.all_pairs(S.geometric_search(spec1))]
    r2 = [p.row() for p in S.all_pairs(S.geometric_search(spec2))]
    assert r1 == r2 and r1


def test_filter_order_does_not_matter(geo_lemma):
    import random
    rng = random.Random(5)
    names = ["positivity", "bounds", "cyclic", "triple", "relative_twist"]
    sc = CF.CoverScenario(2, 2, 2, 4)
    pryms = S.prym_candidates(2, 2, 2, 8)
    from relclass.enumeration import enumerate_real_weil
    from relclass.weil import real_to_weil
    n = 0
    for h in enumerate_real_weil(2, 2):
        for A in pryms:
            c = CF.PairCandidate(sc, real_to_weil(h), A.weil, A.parts, A.real_factors)
            base = CF.evaluate_pair(c, CF.FilterConfig()) is None
            for _ in range(3):
                order_ = names[:]
                rng.shuffle(order_)
                assert (CF.evaluate_pair(c, CF.FilterConfig(), order=order_) is None) == base
            n += 1
    assert n > 50


def test_custom_scenario_guard():
    with pytest.raises(ValueError):
        S.custom_scenario(2, 2, 9, 20)
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        sc = S.custom_scenario(2, 2, 9, 20, allow_unproven=True)
    assert sc.key() == (2, 2, 9, 20)
    assert any(issubclass(x.category, S.OutsideProvenRange) for x in w)


def test_emit_tables_empty_is_header_only(tmp_path):
    p = S.emit_tables([], tmp_path / "empty.csv")
    assert p.read_text().strip() == ",".join(S.GEOMETRIC_COLUMNS)


def test_emit_tables_round_trip(tmp_path, geo_fixture):
    import csv
    import json
    pairs = S.all_pairs(geo_fixture)
    p = S.emit_tables(pairs, tmp_path / "g.csv")
    rows = list(csv.DictReader(open(p)))
    assert len(rows) == len(pairs)
    j = S.emit_tables(pairs, tmp_path / "g.json", "json")
    assert json.loads(j.read_text())[0] == {k: str(v) if k not in ("q", "d", "g", "gp") else v
                                           for k, v in pairs[0].row().items()}
    with pytest.raises(ValueError):
        S.emit_tables(pairs, tmp_path / "g.x", "xml")


def test_q34_lists(q34_outcome):
    o = q34_outcome
    assert len(o.d2) == 8
    assert {k[1:] for k in o.dbig} == {(3, 2, 4)}
    assert set(o.surviving) | set(o.dropped_by_filters) | set(o.dropped_by_curve_data) == set(o.d2) | set(o.dbig)


def test_base_change_degree3():
    assert sorted(W.coeffs for W in S.base_change_degree3()) == [(1, 1, 2), (1, 2, 2)]


def test_twist_real_is_involution():
    for f in [(1, 1), (-2, 0, 1), (3, -1, 2, 1)]:
        assert S.twist_real(S.twist_real(f)) == tuple(f)


def test_real_factors_multiply_back():
    from relclass import poly as P
    h = [2, -3, 0, 1]  # ascending; (x - 1)^2 (x + 2)
    fac = S.real_factors(2, h)
    assert P.product([list(f) for f in fac]) == h
