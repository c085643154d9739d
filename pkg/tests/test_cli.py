import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from shagraph.cli import run

from conftest import NODAL, PATH

SCHEMA = json.loads(resources.files("shagraph").joinpath("schema/report.json").read_text())
MODELS = Path(__file__).resolve().parents[1] / "demos" / "models"


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 0, err
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    return data


@pytest.fixture
def nodal_file(tmp_path):
    p = tmp_path / "nodal.sg"
    p.write_text(NODAL)
    return str(p)


@pytest.fixture
def tree_file(tmp_path):
    p = tmp_path / "tree.sg"
    p.write_text(PATH)
    return str(p)


def test_sha_nodal_s3(capsys, nodal_file):
    data = report(capsys, "sha", "--model", nodal_file, "--group", "S3")
    assert (data["rank"], data["size"], data["oracle_count"]) == (1, 3, 3)
    assert data["criteria"]["trivial"] is False


def test_witt_kernel_tree(capsys, tree_file):
    data = report(capsys, "witt-kernel", "--model", tree_file)
    assert data["order"] == 1 and data["trivial"]


def test_covers_nodal_degree2_connected(capsys, nodal_file):
    data = report(capsys, "covers", "--model", nodal_file, "--degree", "2", "--connected")
    assert data["count"] == 1
    assert data["classes"][0]["connected"]


def test_covers_all_classes(capsys, nodal_file):
    data = report(capsys, "covers", "--model", nodal_file, "--degree", "3")
    assert data["count"] == 3


def test_verify_double_coset(capsys, nodal_file):
    data = report(capsys, "verify", "double-coset", "--model", nodal_file, "--group", "C2")
    assert (data["orbits"], data["sha"], data["passed"]) == (2, 2, True)


def test_verify_quotient_exactness(capsys, nodal_file):
    data = report(capsys, "verify", "quotient-exactness", "--model", nodal_file, "--group", "S3", "--normal", "derived")
    assert data["sizes"] == [3, 3, 2] and data["passed"]


def test_verify_trans_factor(capsys, nodal_file):
    code, out, _ = invoke(capsys, "verify", "trans-factor", "--model", nodal_file, "--group", "S3", "--normal", "231")
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    assert code == 0
    assert (data["bijective"], data["lifts_factor"], data["passed"]) == (False, False, True)


def test_verify_homotopy(capsys):
    data = report(capsys, "verify", "homotopy", "--samples", "8", "--seed", "7")
    assert data["models"] == 8 and data["passed"] and data["variants_checked"] > 0


def test_graph_and_pi1(capsys, nodal_file):
    g = report(capsys, "graph", "--model", nodal_file)
    assert (g["rank"], g["vertex_count"], g["edge_count"]) == (1, 2, 2)
    p = report(capsys, "pi1", "--model", nodal_file)
    assert p["rank"] == 1 and len(p["generators"]) == 1
    assert p["graph_fingerprint"] == g["graph_fingerprint"]


def test_blowup_and_refine(capsys, nodal_file):
    b = report(capsys, "blowup", "--model", nodal_file, "--point", "Q")
    assert b["rank_before"] == b["rank_after"] == 1
    assert "E1" in b["components"]
    r = report(capsys, "refine", "--model", nodal_file, "--component", "C")
    assert r["rank_after"] == 1 and "Q'" in r["points"]


def test_model_text_inline(capsys):
    data = report(capsys, "graph", "--model-text", "component C\\npoint Q on C:2")
    assert data["rank"] == 1


def test_text_format(capsys, nodal_file):
    code, out, _ = invoke(capsys, "sha", "--model", nodal_file, "--group", "S3", "--format", "text")
    assert code == 0
    assert "size: 3" in out.splitlines()


def test_dot_format(capsys, nodal_file):
    code, out, _ = invoke(capsys, "graph", "--model", nodal_file, "--format", "dot")
    assert code == 0 and out.startswith("graph") and out.count(" -- ") == 2
    code, _, err = invoke(capsys, "sha", "--model", nodal_file, "--group", "S3", "--format", "dot")
    assert code == 2 and "usage error" in err


def test_usage_errors(capsys, nodal_file):
    assert invoke(capsys, "sha", "--model", nodal_file)[0] == 2
    assert invoke(capsys, "frobnicate")[0] == 2
    assert invoke(capsys, "sha", "--model", nodal_file, "--group", "S3", "--max-states", "0")[0] == 2


def test_domain_errors(capsys, nodal_file, tmp_path):
    code, _, err = invoke(capsys, "sha", "--model", nodal_file, "--group", "Q8")
    assert code == 1 and "error" in err
    bad = tmp_path / "bad.sg"
    bad.write_text("component C\npoint Q on D:1\n")
    assert invoke(capsys, "graph", "--model", str(bad))[0] == 1
    assert invoke(capsys, "graph", "--model", str(tmp_path / "missing.sg"))[0] == 1
    assert invoke(capsys, "blowup", "--model", nodal_file, "--point", "Z")[0] == 1
    code, _, err = invoke(capsys, "verify", "trans-factor", "--model", nodal_file, "--group", "S3", "--normal", "213")
    assert code == 1 and "not-normal" in err


def test_state_cap_flag_and_env(capsys, monkeypatch):
    text = "component C\\npoint Q on C:4"
    code, _, err = invoke(capsys, "sha", "--model-text", text, "--group", "S3", "--max-states", "10")
    assert code == 1 and "state-cap-exceeded" in err
    monkeypatch.setenv("SHAGRAPH_MAX_STATES", "10")
    assert invoke(capsys, "sha", "--model-text", text, "--group", "S3")[0] == 1
    # the flag wins over the environment
    assert invoke(capsys, "sha", "--model-text", text, "--group", "S3", "--max-states", "1000")[0] == 0


def test_hyp_warning_on_stderr(capsys, nodal_file):
    _, _, err = invoke(capsys, "graph", "--model", nodal_file)
    assert "hyp-unverifiable" in err


@pytest.mark.parametrize("argv", [
    ["sha", "--model", f"{MODELS}/theta.sg", "--group", "D4"],
    ["covers", "--model", f"{MODELS}/theta.sg", "--degree", "3"],
    ["verify", "homotopy", "--samples", "5"],
])
def test_byte_identical_across_processes(argv):
    cmd = [sys.executable, "-m", "shagraph.cli", *argv]
    a = subprocess.run(cmd, capture_output=True, check=True)
    b = subprocess.run(cmd, capture_output=True, check=True, env={"PYTHONHASHSEED": "123", "PATH": ""})
    assert a.stdout == b.stdout and a.stdout


@pytest.mark.parametrize("name", ["nodal", "tree", "loop2", "theta"])
def test_demo_models_all_subcommands_validate(capsys, name):
    path = f"{MODELS}/{name}.sg"
    for argv in (["graph"], ["pi1"], ["witt-kernel"], ["sha", "--group", "S3"], ["covers", "--degree", "2"]):
        report(capsys, argv[0], "--model", path, *argv[1:])
