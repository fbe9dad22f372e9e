import csv
import json
from pathlib import Path

import pytest

from relclass import lmfdb
from relclass import search as S

DATA = lmfdb.DATA_DIR

# criterion number -> (verdict, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


def golden_pairs() -> set:
    with open(DATA / "geometric_bounds.csv", newline="") as fh:
        return {(int(r["d"]), int(r["g"]), int(r["gp"]), r["A"], r["C"]) for r in csv.DictReader(fh)}


def pair_key(p) -> tuple:
    # genus >= 7 rows of the golden table carry the first seven point counts of C
    C = p.C_label if p.g < 7 else " ".join(str(n) for n in p.C_counts[:7])
    return (p.d, p.g, p.gp, p.A_label, C)


def load_json(name: str):
    return json.loads((DATA / name).read_text())


@pytest.fixture(scope="session")
def fixture_store():
    return lmfdb.curve_fixture()


@pytest.fixture(scope="session")
def geo_bare():
    return S.geometric_search(S.SearchSpec())


@pytest.fixture(scope="session")
def geo_fixture(fixture_store):
    return S.geometric_search(S.SearchSpec(curve_data=fixture_store))


@pytest.fixture(scope="session")
def geo_lemma():
    from relclass.cover_filters import FilterConfig
    return S.geometric_search(S.SearchSpec(cfg=FilterConfig.lemma_level()))


@pytest.fixture(scope="session")
def constant_results(fixture_store):
    return S.constant_search(curve_data=fixture_store)


@pytest.fixture(scope="session")
def q34_outcome(fixture_store):
    return S.q34_geometric_search(curve_data=fixture_store)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        verdict, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  {detail}")
