import json
import subprocess
import sys

import pytest

from bhdpc import cli
from bhdpc.cli import main
from bhdpc.errors import InternalError
from bhdpc.formats import dot_stats, parse_instance

INSTANCE = {"n": 2, "faults": [[[0, 0], [1, 0]]],
            "terminals": {"s1": [0, 0], "s2": [2, 1], "t1": [1, 1], "t2": [3, 2]}}


@pytest.fixture
def inst_file(tmp_path):
    p = tmp_path / "inst.json"
    p.write_text(json.dumps(INSTANCE), encoding="utf-8")
    return p


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_then_verify(capsys, inst_file, tmp_path):
    code, out, _ = _run(capsys, "solve", inst_file)
    assert code == 0
    res = json.loads(out)
    assert res["status"] == "solved" and res["p1"][0] == [0, 0]
    rf = tmp_path / "res.json"
    rf.write_text(out, encoding="utf-8")
    code, out, _ = _run(capsys, "verify", inst_file, rf)
    assert code == 0 and json.loads(out) == {"valid": True, "violations": []}


def test_verify_rejects_broken_cover(capsys, inst_file, tmp_path):
    _, out, _ = _run(capsys, "solve", inst_file)
    res = json.loads(out)
    res["p2"] = res["p2"][:-2] + res["p2"][-1:]
    rf = tmp_path / "res.json"
    rf.write_text(json.dumps(res), encoding="utf-8")
    code, out, _ = _run(capsys, "verify", inst_file, rf)
    assert code == 1 and json.loads(out)["violations"]


def test_solve_trace(capsys, tmp_path):
    doc = {"n": 3, "faults": [], "terminals": {"s1": [0, 0, 0], "s2": [2, 1, 1],
                                               "t1": [1, 2, 2], "t2": [3, 3, 3]}}
    f = tmp_path / "i3.json"
    f.write_text(json.dumps(doc), encoding="utf-8")
    code, out, _ = _run(capsys, "solve", "--trace", f)
    assert code == 0 and "case" in json.loads(out)["case_plan"]


def test_counterexample_is_infeasible(capsys, tmp_path):
    code, out, _ = _run(capsys, "counterexample", 2, "--s1", "0,0", "--w", "1,1",
                        "--t1", "1,0", "--t2", "3,0")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["faults"]) == 2 and doc["terminals"]["s2"] == [2, 0]
    f = tmp_path / "cx.json"
    f.write_text(out, encoding="utf-8")
    code, out, _ = _run(capsys, "solve", f)
    res = json.loads(out)
    assert code == 1 and res["status"] == "infeasible"
    assert res["certificate"]["kind"] == "blocked-vertex" and res["certificate"]["witness"] == [1, 1]
    code, out, _ = _run(capsys, "oracle", f)
    assert code == 1 and json.loads(out)["status"] == "not-exists"


def test_counterexample_defaults_bh3(capsys):
    code, out, _ = _run(capsys, "counterexample", 3)
    assert code == 0 and len(parse_instance(json.loads(out)).faults) == 4


def test_invalid_input_exit_code(capsys, tmp_path):
    bad = json.loads(json.dumps(INSTANCE))
    bad["faults"][0][1][0] = 5
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(bad), encoding="utf-8")
    code, _, err = _run(capsys, "solve", f)
    assert code == 2 and "faults[0][1][0]" in err
    f.write_text("{not json", encoding="utf-8")
    assert _run(capsys, "solve", f)[0] == 2
    assert _run(capsys, "solve", tmp_path / "missing.json")[0] == 2
    assert _run(capsys, "export", 7)[0] == 2


def test_internal_error_exit_code(capsys, inst_file, monkeypatch):
    def boom(inst):
        raise InternalError("forced")
    monkeypatch.setattr(cli, "_solve", boom)
    code, out, _ = _run(capsys, "solve", "--oracle-fallback", inst_file)
    res = json.loads(out)
    assert code == 3 and res["status"] == "error"
    assert res["discrepancy"] == "constructor-missed-cover"


def test_oracle_reports_cover(capsys, inst_file):
    code, out, _ = _run(capsys, "oracle", inst_file)
    assert code == 0 and json.loads(out)["status"] == "exists"


def test_export(capsys, inst_file, tmp_path):
    code, out, _ = _run(capsys, "export", 2)
    assert code == 0 and dot_stats(out) == {"nodes": 16, "edges": 32}
    _, res, _ = _run(capsys, "solve", inst_file)
    rf = tmp_path / "res.json"
    rf.write_text(res, encoding="utf-8")
    code, out, _ = _run(capsys, "export", 2, "--instance", inst_file, "--result", rf)
    assert code == 0 and "dashed" in out and '"red"' in out and '"blue"' in out


def test_info(capsys, monkeypatch):
    monkeypatch.setenv("BHDPC_BUDGET", "777")
    code, out, _ = _run(capsys, "info", "--max-n", 3)
    doc = json.loads(out)
    assert code == 0 and doc["search_budget"] == 777 and len(doc["sizes"]) == 3
    assert doc["sizes"][1] == {"n": 2, "vertices": 16, "edges": 32, "fault_budget": 1}


def test_sweep_exit_code_and_report(capsys, tmp_path):
    out = tmp_path / "r.jsonl"
    code, _, err = _run(capsys, "sweep", "bh3-random", "--seed", 2, "--count", 20, "--out", out)
    assert code == 0 and "0 failures" in err
    lines = out.read_text(encoding="utf-8").splitlines()
    assert json.loads(lines[0])["header"]["seed"] == 2 and len(lines) == 22


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "bhdpc.cli", "info"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["numba"]
