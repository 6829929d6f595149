import csv
import io
import json
import subprocess
import sys

import pytest

from ktcount.cli import main, parse_range
from ktcount.graph import from_graph6
from ktcount.construction import ConstructibleTriple, build_graph
from ktcount.widths import ProperPathDecomposition, check_ppd


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_parse_range():
    assert parse_range("3..6") == [3, 4, 5, 6]
    assert parse_range("4") == [4]


def test_census_rows(capsys):
    code, out, _ = run(capsys, "census", "--n", "3..6", "--k", "1..3")
    assert code == 0
    assert out.startswith("# ktc census")
    assert len(rows(out)) == 12


def test_census_value(capsys):
    code, out, _ = run(capsys, "census", "--n", "4", "--k", "1", "--no-header")
    assert code == 0 and rows(out)[0]["T"] == "38"


def test_census_checkpoint_resume(capsys, tmp_path):
    ck = tmp_path / "ck.json"
    code, out, _ = run(capsys, "census", "--n", "5", "--k", "2", "--checkpoint", str(ck), "--no-header")
    assert code == 0 and rows(out)[0]["T"] == "913"
    assert json.loads(ck.read_text())["partial_count"] == 913
    code, out, _ = run(capsys, "census", "--n", "5", "--k", "2", "--checkpoint", str(ck), "--no-header")
    assert rows(out)[0]["T"] == "913"


@pytest.mark.parametrize(
    "args",
    [["census", "--n", "6..3"], ["census", "--n", "x"], ["census", "--workers", "0"],
     ["generate", "--n", "3..4"], ["nosuch"]],
)
def test_usage_errors(capsys, args):
    assert main(args) == 2


def test_capacity_refusal(capsys):
    code, _, err = run(capsys, "census", "--n", "9", "--k", "2")
    assert code == 3 and "capacity" in err
    code, _, err = run(capsys, "generate", "--n", "12", "--k", "4", "--s", "1")
    assert code == 3


def test_generate_dedup(capsys):
    code, out, _ = run(capsys, "generate", "--n", "3", "--k", "2", "--s", "1", "--dedup")
    assert code == 0
    assert sorted(out.split()) == ["Bo", "Bw"]


def test_generate_sample_deterministic(capsys, tmp_path):
    outs = []
    for workers in ("1", "3"):
        code, out, _ = run(capsys, "generate", "--n", "7", "--k", "3", "--s", "2",
                           "--sample", "10", "--seed", "7", "--workers", workers)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1] and len(outs[0].split()) == 10
    _, other, _ = run(capsys, "generate", "--n", "7", "--k", "3", "--s", "2", "--sample", "10", "--seed", "8")
    assert other != outs[0]


def test_generate_sidecar_certificates(capsys, tmp_path):
    side = tmp_path / "side.jsonl"
    code, out, _ = run(capsys, "generate", "--n", "5", "--k", "3", "--s", "2", "--sidecar", str(side))
    assert code == 0
    lines = out.split()
    records = [json.loads(l) for l in side.read_text().splitlines()]
    assert len(records) == len(lines) == 576
    for line, rec in zip(lines, records):
        g = from_graph6(line)
        assert rec["graph6"] == line
        assert build_graph(ConstructibleTriple.from_dict(rec["triple"])) == g
        assert check_ppd(g, ProperPathDecomposition.of(rec["ppd"]))


def test_bounds_table(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "5", "--k", "2", "--no-header")
    r = rows(out)[0]
    assert code == 0
    assert r["ub_eq1"] == "8960" and r["lb_eq3"] == "256" and r["ub_eq2"] == "3200000"
    assert "e" not in r["ub_eq1"].lower()
    assert float(r["lb_thm2_lo"]) <= float(r["lb_thm2_hi"])


def test_bounds_big_values_not_truncated(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "16", "--k", "4", "--no-header")
    r = rows(out)[0]
    from ktcount.bounds import ub_eq1
    assert r["ub_eq1"] == str(ub_eq1(16, 4))


def test_bounds_choose_s(capsys):
    code, out, _ = run(capsys, "bounds", "--k", "8", "--choose-s", "--no-header")
    assert code == 0 and rows(out)[0]["s"] == "2"


def test_json_format(capsys):
    code, out, _ = run(capsys, "census", "--n", "4", "--k", "1..2", "--format", "json", "--no-header")
    doc = json.loads(out)
    assert [r["T"] for r in doc["rows"]] == ["38", "63"]  # only K4 has treewidth 3
    assert "generated" not in doc


def test_identical_output_files(capsys, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["preimages", "--n", "5", "--k", "3", "--s", "1..2", "--no-header", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_ktrees_and_plk(capsys):
    code, out, _ = run(capsys, "ktrees", "--n", "4..6", "--k", "2", "--no-header")
    assert [r["count"] for r in rows(out)] == ["6", "70", "1215"]
    assert all(r["match"] == "true" for r in rows(out))
    code, out, _ = run(capsys, "plk", "--n", "4..6", "--k", "2", "--no-header")
    assert [r["count"] for r in rows(out)] == ["6", "60", "720"]


def test_verify_includes_sandwich_row(capsys):
    code, out, _ = run(capsys, "verify", "--n", "5", "--k", "2", "--s", "1", "--no-header")
    assert code == 0
    stmts = {r["check"]: r["statement"] for r in rows(out)}
    assert stmts["sandwich(5,2)"] == "256 <= 913 <= 8960"


def test_verify_golden(capsys, tmp_path):
    golden = tmp_path / "golden.json"
    args = ["verify", "--n", "4..5", "--k", "1..2", "--s", "1", "--no-header"]
    assert main(args + ["--save-golden", str(golden)]) == 0
    capsys.readouterr()
    assert main(args + ["--golden", str(golden)]) == 0
    capsys.readouterr()
    data = json.loads(golden.read_text())
    data["sandwich(5,2)"] = "421"
    golden.write_text(json.dumps(data))
    code, _, err = run(capsys, *args, "--golden", str(golden))
    assert code == 1
    assert "sandwich(5,2): expected 421 got 913" in err
    golden.write_text("{not json")
    assert main(args + ["--golden", str(golden)]) == 1


def test_verify_skips_capacity(capsys):
    code, out, _ = run(capsys, "verify", "--n", "8", "--k", "2", "--s", "1", "--no-header")
    assert code == 0
    statuses = {r["check"]: r["status"] for r in rows(out)}
    assert statuses["sandwich(8,2)"] == "skipped"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ktcount", "bounds", "--k", "2", "--choose-s", "--no-header"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "2,1," in res.stdout
