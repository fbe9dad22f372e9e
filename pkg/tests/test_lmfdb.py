import json

import pytest

from relclass import lmfdb as L
from relclass.weil import label_decode, traces


def test_order_one_fixture_serves_all_offline():
    store = L.order_one_fixture()
    assert len(store) == 16
    for label in store.labels():
        rec = store.fetch_isogeny(label)
        assert rec.simple is True
        assert rec.counts == L.point_counts(label_decode(label), len(rec.counts))


def test_fetch_2_2_a_ae():
    rec = L.order_one_fixture().fetch_isogeny("2.2.a_ae")
    q = 2
    T = traces(rec.weil, 4).values
    assert T == (0, 8, 0, 16)
    assert rec.counts[:4] == tuple(q ** i + 1 - t for i, t in enumerate(T, start=1))


def test_jacobian_answers(fixture_store):
    assert fixture_store.jacobian_exists(label_decode("2.3.g_p")) == L.NO
    assert fixture_store.jacobian_exists("1.2.ac") == L.YES
    assert fixture_store.fetch_isogeny("4.3.f_v_ca_eg").jacobian_count == 0
    # nothing is ingested at genus 9
    assert fixture_store.jacobian_exists(label_decode("9.2.a_a_a_a_a_a_a_a_a")) == L.UNKNOWN


def test_malformed_label():
    with pytest.raises(Exception):
        L.CurveStore().fetch_isogeny("2.2.A_b")


def test_unknown_label_offline(monkeypatch):
    store = L.CurveStore(offline=True)

    def boom(*a, **k):
        raise AssertionError("network touched")
    monkeypatch.setattr("urllib.request.urlopen", boom)
    with pytest.raises(L.UnknownLabel):
        store.fetch_isogeny("1.2.a")


def test_round_trip(tmp_path, fixture_store):
    p = fixture_store.cache_export(tmp_path / "all.jsonl")
    again = L.bulk_load(p)
    assert again.labels() == fixture_store.labels()
    for lab in fixture_store.labels():
        assert again.jacobian_exists(lab) == fixture_store.jacobian_exists(lab)
    # byte-stable
    p2 = again.cache_export(tmp_path / "again.jsonl")
    assert p.read_bytes() == p2.read_bytes()


def test_empty_file(tmp_path):
    p = tmp_path / "empty.jsonl"
    p.write_text("")
    assert len(L.bulk_load(p)) == 0


def test_validation_mismatch_is_hard(tmp_path):
    p = tmp_path / "bad.jsonl"
    p.write_text('{"label": "1.2.ac", "q": 2, "g": 1, "counts": [1, 5, 99]}\n')
    with pytest.raises(L.DataError, match=":1:"):
        L.bulk_load(p)


def test_schema_errors_report_line(tmp_path):
    p = tmp_path / "bad.jsonl"
    p.write_text('# comment\n\n{"label": "1.2.ac", "q": 2, "g": 1}\n{"label": "1.2.ac", "q": 2, "g": 1, "x": 1}\n')
    with pytest.raises(L.DataError, match=":4:.*unknown fields"):
        L.bulk_load(p)
    p.write_text('{"label": "1.2.ac", "q": 2, "g": 1, "jacobian_count": -1}\n')
    with pytest.raises(L.DataError):
        L.bulk_load(p)
    p.write_text('{"label": "1.2.ac", "q": 3, "g": 1}\n')
    with pytest.raises(L.DataError):
        L.bulk_load(p)


def test_conflicting_facts():
    store = L.CurveStore([L.IsogenyRecord("1.2.ac", 2, 1, (), jacobian_count=1)])
    with pytest.raises(L.DataError):
        store.add(L.IsogenyRecord("1.2.ac", 2, 1, (), has_jacobian=False))


def test_cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(L.CACHE_ENV, str(tmp_path))
    rec = L.IsogenyRecord("1.2.c", 2, 1, L.point_counts(label_decode("1.2.c"), 3), has_jacobian=True)
    (tmp_path / "1.2.c.json").write_text(json.dumps(rec.to_json()))
    store = L.CurveStore()
    assert store.cache_dir == tmp_path
    assert store.jacobian_exists("1.2.c") == L.YES


def test_http_path_validates(monkeypatch):
    import io

    payload = {"data": [{"label": "1.2.c", "q": 2, "g": 1, "curve_counts": [9, 9], "jacobian_count": -1}]}

    def fake(url, timeout=0):
        assert "1.2.c" in url
        return io.StringIO(json.dumps(payload))
    monkeypatch.setattr("urllib.request.urlopen", fake)
    store = L.CurveStore(offline=False, url_template="http://example.invalid/{label}")
    with pytest.raises(L.DataError):
        store.fetch_isogeny("1.2.c")
    payload["data"][0]["curve_counts"] = list(L.point_counts(label_decode("1.2.c"), 2))
    rec = store.fetch_isogeny("1.2.c")
    assert rec.jacobian() == L.UNKNOWN


def test_network_failure_degrades(monkeypatch):
    def down(url, timeout=0):
        raise OSError("unreachable")
    monkeypatch.setattr("urllib.request.urlopen", down)
    store = L.CurveStore(offline=False)
    with pytest.raises(L.UnknownLabel):
        store.fetch_isogeny("1.2.c")


def test_store_pickles():
    import pickle
    store = L.order_one_fixture()
    again = pickle.loads(pickle.dumps(store))
    assert again.labels() == store.labels()
