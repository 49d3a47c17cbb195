import json
import subprocess
import sys
from pathlib import Path

import pytest

from cellprotect import cli

DATA = Path(cli.__file__).parent / "data"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", DATA / "fig2.json")
    assert code == 0 and json.loads(out)["ok"]


def test_validate_broken(capsys, tmp_path):
    doc = json.loads((DATA / "fig1.json").read_text())
    doc["row_sums"][0] = "37"
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "validate", path)
    assert code == 3
    assert "row 1: sum mismatch" in json.loads(out)["violations"]


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "fig1.json")
    d = json.loads(out)
    assert code == 0
    assert d["invariant_cells"] == [{"col": "c", "row": "2"}, {"col": "c", "row": "3"}, {"col": "i", "row": "6"}]
    assert len(d["components"]) == 1


def test_protection_exit_codes(capsys):
    code, out, _ = run(capsys, "test-protection", DATA / "fig3.json", "--cells", "1:a")
    assert code == 0 and json.loads(out)["verdict"] == "protected"
    code, out, _ = run(capsys, "test-protection", DATA / "fig3.json", "--cells", "all")
    assert code == 1 and json.loads(out)["witness"]["kind"] == "edge_cut"


def test_cells_from_file(capsys, tmp_path):
    path = tmp_path / "q.json"
    path.write_text(json.dumps([{"row": "1", "col": "a"}, "2:a"]))
    code, _, _ = run(capsys, "test-protection", DATA / "fig3.json", "--cells", path)
    assert code in (0, 1)


def test_protect(capsys):
    code, out, _ = run(capsys, "protect", DATA / "tk22.json", "--cells", "all", "--mode", "exact")
    d = json.loads(out)
    assert code == 0 and d["size"] == 5 and d["verified"]
    code, out, _ = run(capsys, "protect", DATA / "tk22.json", "--cells", "all", "--mode", "paper")
    assert code == 2 and json.loads(out)["infeasible"]


def test_protect_mixed_table(capsys):
    code, out, _ = run(capsys, "protect", DATA / "fig3.json", "--cells", "1:a")
    assert code == 0 and json.loads(out)["size"] == 0
    code, _, err = run(capsys, "protect", DATA / "fig3.json", "--mode", "paper")
    assert code == 3 and json.loads(err)["error"] == "InputError"


def test_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", tmp_path / "missing.json")
    assert code == 3 and "message" in json.loads(err)
    code, _, err = run(capsys, "test-protection", DATA / "fig3.json", "--cells", "9:z")
    assert code == 3
    code, _, err = run(capsys, "test-protection", DATA / "fig3.json", "--cells", "1:c")
    assert code == 3


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["validate", str(DATA / "fig2.json"), "--colour"])
    assert exc.value.code == 3
    assert json.loads(capsys.readouterr().err)["error"] == "usage"


def test_reduce_hitting_set(capsys, tmp_path):
    path = tmp_path / "hs.json"
    path.write_text(json.dumps({"elements": ["s1", "s2"], "sets": [["s1"], ["s1", "s2"]], "budget": 1}))
    code, out, _ = run(capsys, "reduce-hitting-set", path)
    d = json.loads(out)
    assert code == 0 and d["budget"] == 4 and len(d["total"]) == 9
    code, out, _ = run(capsys, "reduce-hitting-set", path, "--solve")
    d = json.loads(out)
    assert code == 0 and d["hitting_set"] == ["s1"] and len(d["edges"]) == 4


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", DATA / "tk22.json")
    assert code == 0 and json.loads(out)["size"] == 5
    code, _, _ = run(capsys, "oracle", DATA / "fig1.json", "--cells", "1:a")
    assert code == 3


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--sizes", "200,400", "--seed", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "size,m,n,milliseconds"
    assert [row.split(",")[:3] for row in lines[1:]] == [["200", "400", "200"], ["400", "800", "400"]]


def test_out_and_quiet(capsys, tmp_path):
    target = tmp_path / "plan.json"
    code, out, _ = run(capsys, "protect", DATA / "tk22.json", "--out", target)
    assert code == 0 and out == "" and json.loads(target.read_text())["size"] == 5
    code, out, _ = run(capsys, "protect", DATA / "tk22.json", "--quiet")
    assert code == 0 and out == ""


def test_byte_identical_runs():
    argv = [sys.executable, "-m", "cellprotect", "analyze", str(DATA / "fig1.json")]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first
