import json
import subprocess
import sys

import numpy as np

from oplab.cli import check_matrix, main
from oplab.linalg import matrix_to_json
from oplab.model import model_matrix


def write(tmp_path, m, name="m.json"):
    p = tmp_path / name
    p.write_text(matrix_to_json(m))
    return p


def test_run_json(capsys):
    assert main(["run", "schwarz-pick", "--trials", "20", "--seed", "3", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["deterministic"]["failures"] == 0
    assert out["deterministic"]["config"]["seed"] == 3


def test_run_writes_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["run", "model-operator", "--trials", "5", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["deterministic"]["suite"] == "model-operator"
    assert "model-operator" in capsys.readouterr().out


def test_check_matrix_examples(tmp_path, capsys):
    t3 = model_matrix([0.3 + 0.1j, -0.5j, 0.2]).matrix
    verdict, out = check_matrix(write(tmp_path, t3), 1e-10)
    assert verdict.is_contraction
    assert abs(out["criterion_3x3"]["conditions"]["cond_14"]) <= 1e-14
    verdict, out = check_matrix(write(tmp_path, np.eye(3)), 1e-10)
    assert verdict.is_contraction and out["criterion_3x3"]["is_contraction"]
    assert out["criterion_3x3"]["branch"] == "boundary"
    assert main(["check-matrix", str(write(tmp_path, [[2.0]]))]) == 1
    assert "not a contraction" in capsys.readouterr().out
    assert main(["check-matrix", str(write(tmp_path, t3)), "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["contraction"]["is_contraction"]


def test_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["check-matrix", str(bad)]) == 2
    assert main(["check-matrix", str(tmp_path / "missing.json")]) == 2
    assert main(["run", "schwarz-pick", "--trials", "0"]) == 2
    assert "error" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "oplab", "list"], capture_output=True, text=True, check=True)
    assert len(proc.stdout.split()) == 19
