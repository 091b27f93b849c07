from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from simvol.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = main([*map(str, argv), "--out", str(out)])
    report = json.loads(out.read_text())
    assert report["ok"] == (code == 0)
    return code, report


def value(report):
    return report["outputs"]["value"]["exact"]


def test_seminorm_sphere(tmp_path):
    code, rep = run(tmp_path, "seminorm", "--complex", DATA / "sphere.json")
    assert code == 0 and value(rep) == [4, 1]
    assert rep["inputs"]["complex"]["sha256"]
    assert all(c["pass"] for c in rep["checks"])


def test_seminorm_subdivided_and_relative(tmp_path):
    code, rep = run(tmp_path, "seminorm", "--complex", DATA / "sphere.json", "--subdivide", 1)
    assert code == 0 and value(rep) == [24, 1] and rep["outputs"]["f_vector"] == [14, 36, 24]
    code, rep = run(tmp_path, "seminorm", "--complex", DATA / "annulus.json", "--mark", "Y")
    assert code == 0 and value(rep) == [6, 1]


def test_seminorm_input_errors(tmp_path):
    code, rep = run(tmp_path, "seminorm", "--complex", DATA / "annulus.json")
    assert code == 2 and rep["error"]["stage"]
    code, rep = run(tmp_path, "seminorm", "--complex", tmp_path / "missing.json")
    assert code == 2 and rep["error"]["stage"] == "input"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, rep = run(tmp_path, "seminorm", "--complex", bad)
    assert code == 2


def test_verify_suite(tmp_path):
    code, rep = run(tmp_path, "verify", "--suite", "core", "--trials", 5, "--seed", 3)
    assert code == 0
    assert {p["name"] for p in rep["outputs"]["properties"]} == {c["name"] for c in rep["checks"]}


def test_subdivide(tmp_path):
    code, rep = run(tmp_path, "subdivide", "--complex", DATA / "triangle_edge.json",
                    "--class", DATA / "triangle_chain.json", "--mark", "Z")
    assert code == 0
    assert rep["outputs"]["output"]["l1"]["exact"] == [2, 1]


def test_diffuse_chain_and_function(tmp_path):
    code, rep = run(tmp_path, "diffuse", "--complex", DATA / "triangle_edge.json",
                    "--class", DATA / "triangle_chain.json", "--alt", "--eps", "1/10")
    assert code == 0 and rep["outputs"]["output"]["l1"]["exact"] == [0, 1]
    code, rep = run(tmp_path, "diffuse", "--complex", DATA / "triangle_edge.json",
                    "--class", DATA / "triangle_chain.json", "--eps", "1/10")
    assert code == 2 and rep["error"]["type"] == "OrbitSumError"
    code, rep = run(tmp_path, "diffuse", "--function", DATA / "two_point_function.json",
                    "--action", DATA / "z_translation.json", "--eps", "1/20")
    assert code == 0
    assert rep["outputs"]["bound"]["exact"] == [1, 20]


def test_decimal_eps_rejected(tmp_path):
    code, rep = run(tmp_path, "diffuse", "--function", DATA / "two_point_function.json",
                    "--action", DATA / "z_translation.json", "--eps", "0.05")
    assert code == 2 and "p/q" in rep["error"]["message"]


def test_glue_and_consum(tmp_path):
    code, rep = run(tmp_path, "glue", "--k1", DATA / "annulus.json", "--k2", DATA / "annulus.json",
                    "--glue", DATA / "glue_annuli.json")
    assert code == 0 and rep["outputs"]["f_vector"] == [9, 21, 12]
    code, rep = run(tmp_path, "glue", "--k1", DATA / "tetrahedron_face.json", "--k2", DATA / "tetrahedron_face.json",
                    "--glue", DATA / "glue_tetrahedra.json")
    assert code == 0 and rep["outputs"]["f_vector"] == [5, 9, 7, 2]
    code, rep = run(tmp_path, "consum", "--k1", DATA / "sphere.json", "--k2", DATA / "sphere.json")
    assert code == 0 and rep["outputs"]["seminorm"]["exact"] == [6, 1]


def test_pipeline_is_deterministic(tmp_path):
    argv = ["pipeline", "--k1", DATA / "annulus.json", "--k2", DATA / "annulus.json",
            "--glue", DATA / "glue_annuli.json", "--eps", "1/100"]
    code, rep = run(tmp_path, *argv)
    assert code == 0 and rep["outputs"]["bound_ok"]
    first = (tmp_path / "report.json").read_bytes()
    run(tmp_path, *argv)
    assert (tmp_path / "report.json").read_bytes() == first


def test_pipeline_gluing_error_stage(tmp_path):
    code, rep = run(tmp_path, "pipeline", "--k1", DATA / "annulus.json", "--k2", DATA / "annulus.json",
                    "--glue", DATA / "glue_tetrahedra.json", "--eps", "1/100")
    assert code == 2


def test_module_entry_point_writes_stdout():
    proc = subprocess.run([sys.executable, "-m", "simvol", "seminorm", "--complex", str(DATA / "sphere.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["outputs"]["value"]["exact"] == [4, 1]


def test_missing_subcommand_exits():
    with pytest.raises(SystemExit):
        main([])


@pytest.mark.parametrize("suite", ["core", "subdivision", "diffusion", "lp", "gluing"])
def test_every_suite_passes(suite):
    from simvol.suites import run_suite
    results = run_suite(suite, trials=3, seed=1)
    assert results and all(r.passed for r in results), [r.to_json() for r in results if not r.passed]
