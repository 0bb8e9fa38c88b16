import json
import subprocess
import sys

import pytest

from fesys.cli import main


def _run(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = main(list(argv) + ["--out", str(out)])
    return code, json.loads(out.read_text()), out.read_bytes()


def test_verify_is_deterministic(tmp_path):
    code, rep, raw = _run(tmp_path, "verify", "gauge", "--seed", "7")
    assert code == 0 and rep["summary"]["status"] == "pass" and rep["seed"] == "7/1"
    _, _, raw2 = _run(tmp_path, "verify", "gauge", "--seed", "7")
    assert raw == raw2


def test_element_reference(tmp_path):
    code, rep, _ = _run(tmp_path, "element", "--family", "jm-min", "--probes", "4")
    assert code == 0
    assert rep["dims"] == ["9/1", "9/1", "3/1"] and rep["family"] == "jm-min"


def test_element_explicit_triangle(tmp_path):
    code, rep, _ = _run(tmp_path, "element", "--family", "strain-low", "--triangle", "0,0;2,0;0,1",
                        "--center", "1/2,1/4", "--probes", "2")
    assert code == 0 and rep["dims"] == ["15/1", "15/1", "3/1"]


def test_cohomology_fiber(tmp_path):
    code, rep, _ = _run(tmp_path, "cohomology", "--mesh", "annulus", "--fiber", "trivial:1")
    assert code == 0
    assert rep["fe_cohomology"] == rep["cochain_cohomology"] == ["1/1", "1/1", "0/1"]


def test_cohomology_family_on_mesh_file(tmp_path):
    mesh = tmp_path / "tri.txt"
    mesh.write_text("v 0 0\nv 1 0\nv 0 1\nt 0 1 2\n")
    code, rep, _ = _run(tmp_path, "cohomology", "--mesh", str(mesh), "--family", "jm")
    assert code == 0 and rep["fe_cohomology"] == ["3/1", "0/1", "0/1"]


@pytest.mark.parametrize("argv", [
    ["cohomology", "--mesh", "annulus", "--fiber", "twisted:2"],
    ["cohomology", "--mesh", "nowhere.txt", "--fiber", "trivial:1"],
    ["element", "--family", "jm", "--triangle", "0,0;1,1;2,2"],
    ["verify", "nonsense"],
])
def test_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "fesys", "verify", "exp-fitting"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["summary"]["status"] == "pass"
