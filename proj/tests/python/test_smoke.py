import json
import math
import os
import subprocess

import pytest

import realstab

SCALAR_LOOP = {
    "schema": "realstab/1",
    "kind": "plant-controller",
    "G": [[{"num": [1], "den": [0, 1]}]],
    "K": [["1/2"]],
}


def test_version():
    assert realstab.__version__.count(".") == 2


def test_analyze_scalar_loop():
    out = realstab.analyze(SCALAR_LOOP)
    assert out["verdict"]["status"] == "stable"
    assert out["rs_identity"] is True
    poles = {w["pole"][0] for w in out["verdict"]["witnesses"] if w["pole"]}
    assert all(abs(p - 0.5) < 1e-12 for p in poles)


def test_hinf_norms():
    assert abs(realstab.hinf_norm([[{"num": [0, 1], "den": [-1, 2]}]]) - 1.0) < 1e-6
    assert abs(realstab.hinf_norm([[{"num": [1], "den": ["-1/2", 1]}]]) - 2.0) < 1e-6


def test_stability_status():
    assert realstab.stability_status([[{"num": [1], "den": ["-1/2", 1]}]]) == "stable"
    assert realstab.stability_status([[{"num": [1], "den": [-1, 1]}]]) == "marginal"
    assert realstab.stability_status([[{"num": [1], "den": [-2, 1]}]]) == "unstable"


def test_exact_inverse():
    # [[1, 1/z], [0, 1]]^-1 = [[1, -1/z], [0, 1]]
    inv = realstab.inverse([["1", {"num": [1], "den": [0, 1]}], ["0", "1"]])
    assert inv == [["1", {"num": ["-1"], "den": ["0", "1"]}], ["0", "1"]]


def test_errors_raise():
    with pytest.raises(realstab.Error):
        realstab.hinf_norm([["1/0"]])
    with pytest.raises(realstab.Error):
        realstab.analyze({"schema": "realstab/1", "kind": "plant-controller", "G": [["1"]], "K": [["1"]]})


def test_run_in_process(tmp_path):
    path = tmp_path / "loop.json"
    path.write_text(json.dumps(SCALAR_LOOP))
    code, out, err = realstab.run(["analyze", str(path)])
    assert code == 0
    assert "poles: 0.5" in out
    code, _, err = realstab.run(["sample", str(path), "--radius", "1", "--n", "0"])
    assert code == 64


@pytest.mark.skipif("REALSTAB_CLI" not in os.environ, reason="CLI binary not provided")
def test_cli_pipeline(tmp_path):
    cli = os.environ["REALSTAB_CLI"]
    loop = tmp_path / "loop.json"
    loop.write_text(json.dumps(SCALAR_LOOP))

    def call(*args):
        return subprocess.run([cli, *map(str, args)], capture_output=True, text=True)

    assert call("synthesize", loop, "--family", "iop", "--out", tmp_path / "iop.json").returncode == 0
    m = call("margin", tmp_path / "iop.json", "--report", tmp_path / "m.json")
    assert m.returncode == 0
    margin = json.loads((tmp_path / "m.json").read_text())["certificate"]["margin"]
    assert math.isclose(margin, 1.0, abs_tol=1e-6)
    s = call("sample", tmp_path / "iop.json", "--margin-from", tmp_path / "m.json", "--n", "200", "--seed", "3")
    assert s.returncode == 0
    assert call("sample", tmp_path / "iop.json", "--radius", "2", "--n", "500").returncode == 1
