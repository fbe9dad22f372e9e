import csv
import io

import pytest

from relclass import cli
from relclass.lmfdb import DATA_DIR


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("sub", [[], ["order-one"], ["bounds"], ["enumerate"], ["search"], ["ingest"],
                                 ["verify"]])
def test_help(capsys, sub):
    code, out, _ = run(capsys, *sub, "--help")
    assert code == 0 and "usage" in out


def test_usage_error(capsys):
    assert run(capsys, "nope")[0] == 2
    assert run(capsys, "search", "geometric", "--d", "7..2")[0] == 2
    assert run(capsys, "bounds", "--weights", "1,-1")[0] == 2


def test_parse_range():
    assert cli.parse_range("2..4") == (2, 3, 4)
    assert cli.parse_range("2,5") == (2, 5)
    assert cli.parse_range("3") == (3,)


def test_order_one_csv(capsys):
    code, out, _ = run(capsys, "order-one", "--max-dim", "6", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 16
    assert rows[0]["label"] == "1.2.ac" and rows[0]["excess_4dp"] == "0.0002"


def test_order_one_out_dir(capsys, tmp_path):
    code, _, _ = run(capsys, "order-one", "--format", "csv", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "order_one.csv").exists() and (tmp_path / "order_one.png").exists()


def test_bounds(capsys, tmp_path):
    code, out, _ = run(capsys, "bounds", "--q", "3", "--weights", "1,0.7,0.2")
    assert code == 0 and "slope" in out and "sqrt(3)" in out
    code, out, _ = run(capsys, "bounds", "--q", "2", "--weights", "1,0.85,0.25", "--refined", "4", "--check",
                       "--plot", str(tmp_path / "b.png"))
    assert code == 0 and out.count(": ok") == 6
    assert (tmp_path / "b.png").exists()


def test_enumerate_json_lines(capsys):
    import json
    code, out, _ = run(capsys, "--threads", "1", "enumerate", "--q", "2", "--g", "2", "--limit", "5")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(lines) == 5
    assert set(lines[0]) == {"q", "g", "label", "real", "coeffs", "traces", "counts"}


def test_search_constant_small(capsys):
    code, out, _ = run(capsys, "search", "constant", "--q", "2", "--d", "3", "--g", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert {r["C"] for r in rows} == {"1.2.b", "1.2.c"}


def test_search_geometric_out(capsys, tmp_path):
    code, _, err = run(capsys, "--threads", "1", "search", "geometric", "--d", "2", "--g", "2", "--gp", "3",
                       "--out", str(tmp_path))
    assert code == 0
    for name in ("geometric.csv", "geometric_summary.csv", "geometric.png"):
        assert (tmp_path / name).exists()
    rows = list(csv.DictReader(open(tmp_path / "geometric.csv")))
    assert {r["C"] for r in rows if r["A"] == "1.2.ac"} == {"2.2.ab_c", "2.2.b_c"}


def test_search_unproven_banner(capsys):
    code, _, err = run(capsys, "--threads", "1", "search", "geometric", "--d", "3", "--g", "2", "--gp", "9",
                       "--allow-unproven")
    assert code == 0 and "not proven complete" in err


def test_ingest(capsys, tmp_path):
    out_file = tmp_path / "x.jsonl"
    code, out, err = run(capsys, "ingest", "--from", str(DATA_DIR / "fixtures" / "order_one.jsonl"),
                         "--fetch", "2.2.a_ae", "--export", str(out_file))
    assert code == 0 and '"2.2.a_ae"' in out and out_file.exists()
    code, _, err = run(capsys, "ingest", "--fetch", "1.2.a")
    assert code == 1 and "unknown" in err


def test_verify_order_one(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "tables", "--which", "order-one")
    assert code == 0 and "match" in out
    bad = tmp_path / "bad.csv"
    text = (DATA_DIR / "order_one_table.csv").read_text().replace("0.0002", "0.0003")
    bad.write_text(text)
    code, out, _ = run(capsys, "verify", "tables", "--which", "order-one", "--against", str(bad))
    assert code == 1
    assert "- ('1.2.ac'" in out and "+ ('1.2.ac'" in out


def test_verify_q34(capsys):
    code, out, _ = run(capsys, "verify", "tables", "--which", "q34")
    assert code == 0
