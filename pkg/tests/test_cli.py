import json
import shutil
import subprocess

import pytest

from normsurf.cli import main, run


def ok(argv):
    code, env = run(argv)
    assert code == 0, env.get("error")
    return env["result"]


def test_tri_info():
    res = ok(["-i", "solid-torus", "tri", "info"])
    assert res["counts"]["tetrahedra"] == 1


def test_options_after_subcommand():
    res = ok(["tri", "check", "-i", "knot"])
    assert res["counts"]["tetrahedra"] == 4


def test_ns_enumerate_counts():
    res = ok(["-i", "knot", "ns", "enumerate", "--fundamental"])
    assert res["count"] == 11


def test_ns_enumerate_constrained():
    res = ok(["-i", "solid-torus", "ns", "enumerate", "--slope", "2/-1"])
    assert res["count"] == 1


def test_lst_build():
    res = ok(["lst", "build", "--weights", "5,8,13"])
    assert res["tets"] == 4


def test_fill_and_drill():
    f = ok(["-i", "t2xi", "fill", "--boundary", "B0", "--slope", "1/0"])
    d = ok(["-i", "solid-torus", "drill", "--slope", "1/1"])
    assert f and d


def test_ale_and_audit():
    assert ok(["-i", "knot", "ale", "--variant", "Link1"])["C"] == "12"
    assert ok(["-i", "knot", "audit", "zero-efficiency"])["zero_efficient"] is True


def test_short_slopes():
    res = ok(["-i", "solid-torus", "slopes", "short", "--bound", "4"])
    assert res["count"] == 6


def test_search_exit_codes():
    code, env = run(["-i", "solid-torus", "search", "punctured-disk", "--slope", "2/-1"])
    assert code == 0 and env["result"]["outcome"] == "Found"
    code, env = run(["-i", "knot", "search", "planar"])
    assert code == 2 and env["result"]["outcome"] == "Inconclusive"
    code, env = run(["-i", "t2xi", "search", "planar", "--budget-rays", "5"])
    assert code == 2


def test_errors_exit_one():
    code, env = run(["-i", "no-such-fixture.json", "tri", "info"])
    assert code == 1 and "error" in env
    code, env = run(["-i", "solid-torus", "search", "punctured-disk", "--slope", "2/4"])
    assert code == 1
    code, env = run(["frobnicate"])
    assert code == 1 and env["error"]["code"] == "UsageError"


def test_text_and_output_file(tmp_path, capsys):
    assert main(["-i", "solid-torus", "--format", "text", "search", "planar"]) == 0
    assert "outcome: Found" in capsys.readouterr().out
    out = tmp_path / "r.json"
    assert main(["-i", "knot", "-o", str(out), "tri", "info"]) == 0
    data = json.loads(out.read_text())
    assert data["tool"] == "normsurf" and data["exit"] == 0 and len(data["input_hash"]) == 16


@pytest.mark.skipif(shutil.which("normsurf") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["normsurf", "-i", "solid-torus", "tri", "info"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["counts"]["vertices"] == 1
