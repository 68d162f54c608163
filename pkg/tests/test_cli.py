import json
import subprocess
import sys
from pathlib import Path



from mixtile.cli import main

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    report = json.loads(capsys.readouterr().out)
    assert report["schema"] == 1 and report["exitCode"] == code
    return code, report


def test_analyze(capsys):
    code, rep = run(capsys, "analyze", DATA / "bowtie.txt", "--k", "3")
    assert code == 0
    assert rep["results"]["tight"] == 2 and rep["results"]["loose"] == 1
    assert set(rep["inputs"]) == {str(DATA / "bowtie.txt")}


def test_crit(capsys):
    code, rep = run(capsys, "crit", DATA / "c5.txt")
    assert code == 0 and rep["results"]["profile"]["crit"] == "5/2" and rep["results"]["fcr"]


def test_certify_pass_and_fail(capsys):
    assert run(capsys, "certify", DATA / "two_k4.txt", "--chi", "3", "--t", "2", "--l", "2")[0] == 0
    code, rep = run(capsys, "certify", DATA / "two_k4.txt", "--chi", "3", "--t", "1", "--l", "1")
    assert code == 1 and not rep["results"]["framework"]["f2"]["ok"]


def test_certify_extras(capsys):
    code, rep = run(capsys, "certify", DATA / "k6.txt", "--chi", "3", "--degree", "1/8", "--degseq", "1/8",
                    "--density", "1/16", "1/2", "0", "--robust", "1/6")
    assert code == 0
    assert {"degree", "degreeSequence", "density", "robust"} <= set(rep["results"])


def test_embed(capsys):
    code, rep = run(capsys, "embed", DATA / "triangles.txt", DATA / "k3.txt", "--m", "10", "--chi", "3")
    assert code == 0 and rep["results"]["embedded"]


def test_flexi(capsys):
    assert run(capsys, "flexi", DATA / "four_isolated.txt", "--k", "2", "--s", "2")[0] == 0
    code, rep = run(capsys, "flexi", DATA / "k2.txt", "--k", "2", "--s", "1")
    assert code == 1 and rep["results"]["refutation"]["failures"]
    code, rep = run(capsys, "flexi", DATA / "four_isolated.txt", "--k", "2", "--s", "2", "--elide")
    assert "witnesses" not in rep["results"]["certificate"]


def test_budget_exit(capsys):
    assert run(capsys, "flexi", DATA / "four_isolated.txt", "--k", "2", "--s", "2", "--budget", "2")[0] == 3


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "crit", tmp_path / "missing.txt")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("n 2\ne 0 0\n")
    code, rep = run(capsys, "analyze", bad, "--k", "2")
    assert code == 2 and rep["error"]["code"] == "PARSE_ERROR"


def test_suite(capsys):
    code, rep = run(capsys, "suite", "run", "bottle", "fcr")
    assert code == 0 and [s["name"] for s in rep["results"]["suites"]] == ["bottle", "fcr"]
    assert run(capsys, "suite", "run", "nonsense")[0] == 2


def test_json_file_and_determinism(capsys, tmp_path):
    out = tmp_path / "r.json"
    run(capsys, "crit", DATA / "k3_tiling.txt", "--json", out)
    first = json.loads(out.read_text())
    run(capsys, "crit", DATA / "k3_tiling.txt", "--json", out)
    second = json.loads(out.read_text())
    first.pop("timing"), second.pop("timing")
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mixtile", "crit", str(DATA / "k24.txt")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["fcr"] is False
