import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from crystalrep.cli import main, parse_element
from crystalrep.errors import ParseError
from crystalrep.verify import run_verify


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_info(capsys):
    code, out, _ = run(capsys, "--group", "pg", "info")
    info = json.loads(out)
    assert code == 0 and info["order"] == 2 and info["symmorphic"] is False
    assert info["cocycle"][1][1] == [1, 0]


def test_dual(capsys):
    code, out, _ = run(capsys, "--group", "pg", "dual")
    assert code == 0 and json.loads(out)["name"] == "pg*"


def test_domain(capsys):
    code, out, _ = run(capsys, "--group", "pg", "domain")
    body = json.loads(out)
    assert code == 0 and body["domain"]["area"] == pytest.approx(0.5)
    assert body["param_area"] == pytest.approx(1.0)
    code, out, _ = run(capsys, "--group", "p1", "domain", "--of", "group", "--center", "0.1,0.7")
    assert json.loads(out)["domain"]["area"] == pytest.approx(1.0)


def test_rep_matrix(capsys):
    code, out, _ = run(capsys, "--group", "pg", "rep-matrix", "--omega", "0.25,0.3333333333333333", "--element", "1:0,0")
    body = json.loads(out)
    U = np.array(body["matrix"]["real"]) + 1j * np.array(body["matrix"]["imag"])
    assert code == 0 and np.allclose(U, [[0, 1j], [1, 0]])
    assert body["irreducible"] is True


def test_parse_element(pg):
    assert parse_element("1:2,-3", pg).k == (2, -3)
    for bad in ("1", "5:0,0", "1:0", "a:b"):
        with pytest.raises(ParseError):
            parse_element(bad, pg)


def test_verify_rep_suite(capsys):
    code, out, _ = run(capsys, "--group", "pg", "verify", "--suite", "rep", "--seed", "1")
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    res = [c["residual"] for c in rep["checks"] if c["name"] in ("homomorphism", "unitarity", "psi-conjugation")]
    assert max(res) <= 1e-10


def test_verify_chain_suite(capsys):
    code, out, _ = run(capsys, "--group", "pg", "verify", "--suite", "chain", "--seed", "3")
    rep = json.loads(out)
    row = next(c for c in rep["checks"] if c["name"] == "intertwining")
    assert code == 0 and row["residual"] <= 1e-9


def test_verify_corrupted_fails(capsys, data_dir):
    code, out, _ = run(capsys, "--group", str(data_dir / "pg_corrupted.json"), "verify", "--suite", "all")
    rep = json.loads(out)
    assert code == 1 and not rep["passed"]
    assert rep["checks"][0]["name"] == "group-validation" and rep["checks"][0]["status"] == "fail"


def test_verify_csv_and_figures(capsys, tmp_path):
    code, out, _ = run(capsys, "--group", "pm", "verify", "--suite", "group-laws", "--format", "csv", "--figures", str(tmp_path))
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["name"] == "group-validation"
    assert {r["status"] for r in rows} == {"pass"}
    assert sorted(p.name for p in tmp_path.iterdir()) == ["pm-domain.svg", "pm-orbit.svg", "pm-param-domain.svg"]


def test_verify_reports_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["--group", "pg", "verify", "--suite", "domain", "--seed", "7", "--out", str(a)]) == 0
    assert main(["--group", "pg", "verify", "--suite", "domain", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_tol_override_makes_identity_checks_fail(capsys):
    code, out, _ = run(capsys, "--group", "pg", "verify", "--suite", "chain", "--tol", "0")
    rep = json.loads(out)
    assert code == 1
    assert any(c["status"] == "fail" and c["tolerance"] == 0.0 for c in rep["checks"])


def test_env_tolerance(monkeypatch):
    monkeypatch.setenv("CRYSTALREP_TOL", "1e-3")
    assert main(["--group", "pg", "verify", "--suite", "group-laws", "--out", "/dev/null"]) == 0


def test_timing_flag():
    rep = run_verify(__import__("crystalrep").catalog("p1"), "group-laws", 0, timing=True)
    assert all(c["wall_time"] is not None for c in rep["checks"])
    rep = run_verify(__import__("crystalrep").catalog("p1"), "group-laws", 0)
    assert all(c["wall_time"] is None for c in rep["checks"])


def test_subspace_check(capsys, tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"radius": 1.0, "omegas": [[0.3, 0.2], [0.5, 0.1]], "support": [[0, 0], [1, 0]]}))
    code, out, _ = run(capsys, "--group", "pg", "subspace-check", "--range", str(good))
    body = json.loads(out)
    assert code == 0 and body["invariance"]["invariant"] and body["tensor_factor_dims"] == [2, 2]
    bad = tmp_path / "bad.json"
    v = [0.0] * 10
    v[2] = 1.0  # delta_id (x) delta_0: dual point (0,0) sits at index 2 of the radius-1 ball
    bad.write_text(json.dumps({"radius": 1.0, "omegas": [[0.3, 0.2]], "spanning_vectors": [v], "elements": ["1:0,0"]}))
    code, out, _ = run(capsys, "--group", "pg", "subspace-check", "--range", str(bad))
    body = json.loads(out)
    assert code == 1 and body["invariance"]["residual"] >= 1.0 - 1e-12
    assert body["tensor_factor_dims"] == [None]


def test_subspace_check_bad_file(capsys, tmp_path):
    f = tmp_path / "x.json"
    f.write_text('{"omegas": [[0.3, 0.2]]}')
    code, _, err = run(capsys, "--group", "pg", "subspace-check", "--range", str(f))
    assert code == 2 and "ParseError" in err


def test_plot_verb(capsys, tmp_path):
    out = tmp_path / "d.svg"
    code, text, _ = run(capsys, "--group", "pg", "plot", "--what", "domain", "--out", str(out))
    assert code == 0 and out.exists()
    assert np.allclose(sorted(map(tuple, json.loads(text)["polygons"]["domain-R"])), [(-0.2, 0.0), (-0.2, 0.5), (0.8, 0.0), (0.8, 0.5)])


def test_unknown_group(capsys):
    code, _, err = run(capsys, "--group", "nope", "info")
    assert code == 2 and "UnknownGroupName" in err


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "crystalrep.cli", "--group", "p1", "info"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["order"] == 1
