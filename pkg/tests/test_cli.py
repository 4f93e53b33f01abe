from __future__ import annotations

import io
import json
import shutil
import subprocess
import sys
from fractions import Fraction

import pytest

from l2chi import acceptance, cli
from l2chi.acceptance import corpus_dir
from l2chi.fileformat import line_to_record, record_to_line

CORPUS = corpus_dir()


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(map(str, argv)), out, err)
    return code, out.getvalue(), err.getvalue()


def records(text):
    return [line_to_record(line) for line in text.splitlines()]


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_chi2_table():
    code, out, _ = run("chi2", CORPUS / "trefoil.yaml")
    assert code == 0
    assert out.startswith("trefoil") and "chi2=-1" in out


def test_chi2_records_and_sweep():
    code, out, _ = run("chi2", CORPUS / "trefoil.yaml", "--format", "records", "--scaling-sweep", "3", "--all-columns")
    assert code == 0
    (rec,) = records(out)
    assert rec["command"] == "chi2" and rec["input"] == "trefoil"
    assert rec["result"]["chi2"] == -1 and rec["result"]["scaling"] == [-1, -2, -3]
    assert rec["result"]["bound_ok"] is True
    assert record_to_line(rec) == out.strip()


def test_directory_order_and_jobs():
    code, out, _ = run("chi2", CORPUS, "--format", "records")
    assert code == 0
    names = [r["input"] for r in records(out)]
    stems = sorted(p.stem for p in CORPUS.glob("*.yaml"))
    assert len(names) == 21
    assert names == [n for n in stems]
    code2, out2, _ = run("chi2", CORPUS, "--format", "records", "--jobs", "2")
    assert code2 == 0
    strip = lambda t: [{**r, "wall_time": 0} for r in records(t)]
    assert strip(out2) == strip(out)


def test_delta_and_polytope():
    code, out, _ = run("delta", CORPUS / "figure_eight.yaml", "--format", "records")
    assert code == 0 and records(out)[0]["result"] == {"delta": 1}
    code, out, _ = run("polytope", CORPUS / "t2_x_interval.yaml", CORPUS / "trefoil.yaml", "--format", "records")
    assert code == 0
    for rec in records(out):
        assert rec["result"]["bridge_ok"] is True
        assert rec["result"]["d_eval"] == rec["result"]["half_degree"]
    trefoil = records(out)[1]["result"]
    assert Fraction(trefoil["d_eval"]) == 1


def test_polytope_rejects_polyz():
    code, out, _ = run("polytope", CORPUS / "trefoil_bundle.yaml", "--format", "records")
    assert code == 2 and records(out)[0]["error"]["kind"] == "input_error"


def test_input_errors(tmp_path):
    bad = write(tmp_path, "bad.yaml", "generators: [x, y]\nrelators: ['x q']\nquotient: {kind: abelianization}\nphi: [1]\n")
    code, out, _ = run("chi2", bad, "--format", "records")
    assert code == 2 and records(out)[0]["error"]["kind"] == "input_error"
    assert run("chi2", tmp_path / "nope.yaml")[0] == 2
    assert run("chi2")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("chi2", CORPUS / "trefoil.yaml", "--jobs", "0")[0] == 2


def test_not_acyclic(tmp_path):
    doc = ("generators: [x, y, z]\nrelators: ['x y x^-1 y^-1', 'x y x^-1 y^-1']\n"
           "quotient: {kind: abelian, images: {x: [1,0,0], y: [0,1,0], z: [0,0,1]}}\nphi: [1, 0, 0]\n")
    code, out, _ = run("chi2", write(tmp_path, "z.yaml", doc), "--format", "records")
    assert code == 1 and records(out)[0]["error"]["kind"] == "not_acyclic"


def test_size_guard_and_max_code(tmp_path):
    code, out, _ = run("chi2", CORPUS / "figure_eight.yaml", "--limit-bytes", "1", "--format", "records")
    assert code == 3 and records(out)[0]["error"]["kind"] == "size_guard"
    bad = write(tmp_path, "bad.yaml", "[]")
    code, out, _ = run("chi2", bad, CORPUS / "figure_eight.yaml", "--limit-bytes", "1", "--format", "records")
    assert code == 3 and len(records(out)) == 2


def test_verification_failure(monkeypatch):
    real = cli.chi2

    def skewed(p, q, phi, dual=None, **kw):
        res = real(p, q, phi, dual, **kw)
        if phi.values != (1,):
            res.chi2 += 1
        return res

    monkeypatch.setattr(cli, "chi2", skewed)
    code, out, _ = run("chi2", CORPUS / "trefoil.yaml", "--scaling-sweep", "2", "--format", "records")
    assert code == 4 and records(out)[0]["error"]["kind"] == "verification_failed"


def test_seifert():
    code, out, _ = run("seifert", "--cone-orders", "2,3", "--boundary", "1", "--fiber-index", "6", "--format", "records")
    assert code == 0
    res = records(out)[0]["result"]
    assert res == {"chi2": "-1", "orbifold_euler": "-1/6", "integral": True}
    code, out, _ = run("seifert", "--genus", "1", "--fiber-index", "1", "--format", "records")
    assert records(out)[0]["result"]["chi2"] == "0"
    assert run("seifert", "--fiber-index", "0")[0] == 2
    assert run("seifert", "--cone-orders", "2,x", "--fiber-index", "1")[0] == 2


def test_jsj_sum(tmp_path):
    code, out, _ = run("jsj-sum", CORPUS / "trefoil.yaml", CORPUS / "figure_eight.yaml", "--format", "records")
    assert code == 0
    rec = records(out)[0]
    assert rec["input"] == "trefoil+figure_eight"
    assert rec["result"] == {"chi2": -2, "thurston_lower_bound": 2, "pieces": [-1, -1]}
    assert run("jsj-sum", tmp_path / "missing.yaml")[0] == 2


def test_compare():
    code, out, err = run("compare", CORPUS / "trefoil.yaml", CORPUS / "trefoil.yaml", "--format", "records")
    assert code == 0 and records(out)[0]["result"]["relation"] == "equal" and not err
    code, out, err = run("compare", CORPUS / "trefoil.yaml", CORPUS / "solid_torus.yaml", "--format", "records")
    res = records(out)[0]["result"]
    assert code == 0 and res["holds"] and res["relation"] == "greater" and not err
    code, out, err = run("compare", CORPUS / "solid_torus.yaml", CORPUS / "trefoil.yaml", "--format", "records")
    res = records(out)[0]["result"]
    assert code == 0 and not res["holds"] and "warning" in res and err.startswith("WARNING")
    code, out, _ = run("compare", CORPUS / "trefoil.yaml", CORPUS / "trefoil_bundle.yaml", "--format", "records")
    assert code == 2


def test_selftest(monkeypatch):
    monkeypatch.setattr(acceptance, "CRITERIA", [acceptance.c01_trefoil, acceptance.c11_seifert])
    code, out, _ = run("selftest")
    assert code == 0 and out.count("[PASS]") == 2 and "2/2 criteria passed" in out
    monkeypatch.setattr(acceptance, "seifert_chi2", lambda base, n: Fraction(-2))
    code, out, _ = run("selftest")
    assert code == 4 and "[FAIL] 11." in out and "1/2 criteria passed" in out


@pytest.mark.skipif(shutil.which("l2chi") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["l2chi", "chi2", str(CORPUS / "trefoil.yaml"), "--format", "records"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["chi2"] == -1
    proc = subprocess.run([sys.executable, "-m", "l2chi.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout
