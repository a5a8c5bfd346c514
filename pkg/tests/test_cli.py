import json
import subprocess
import sys
from importlib import resources

import pytest

from gridfloer.cli import run
from gridfloer.corpus import CORPUS_NAMES, load_corpus

CORPUS_DIR = resources.files("gridfloer").joinpath("corpus")


def path(name):
    return str(CORPUS_DIR.joinpath(f"{name}.grid"))


def test_bundled_files_load_with_names():
    for name in CORPUS_NAMES:
        assert load_corpus(name).name == name
    with pytest.raises(KeyError):
        load_corpus("figure-eight")


def test_homology_json(capsys):
    assert run(["homology", path("hopf"), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["hat"]["total"] == 4
    assert data["tilde"]["total"] == 16


def test_homology_table_has_legend(capsys):
    assert run(["homology", path("unknot2")]) == 0
    out = capsys.readouterr().out
    assert "alex2 = 2A" in out
    assert "hat link Floer homology (total 1)" in out


def test_detect_unknot(capsys):
    assert run(["detect", path("unknot2")]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert any(line.startswith("unknot: yes") for line in lines)


def test_detect_with_pair(capsys):
    assert run(["detect", path("unlink2"), "--pair", "0,1", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["action"] == {"pair": [0, 1], "dim": 8, "rank": 4, "free": True}


@pytest.mark.parametrize("command", ["validate", "polytope", "alexander", "audit"])
def test_other_commands(command, capsys):
    assert run([command, path("hopf")]) == 0
    assert run([command, path("hopf"), "--json"]) == 0
    out = capsys.readouterr().out
    assert out


def test_audit_single_component(capsys):
    assert run(["audit", path("l6a2"), "--component", "1", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [a["component"] for a in data["audits"]] == [1]


def test_missing_file_is_input_error(capsys):
    assert run(["homology", "missing.grid"]) == 2
    assert "missing.grid" in capsys.readouterr().err


def test_malformed_file_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.grid"
    bad.write_text("n=3\nO: 0 1 1\nX: 1 2 0\n")
    assert run(["validate", str(bad)]) == 2
    assert "bad.grid" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["detect", path("hopf"), "--pair", "0"],
        ["homology", path("hopf"), "--max-size", "-1"],
        ["audit", path("hopf"), "--component", "x"],
    ],
)
def test_flag_errors(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err.startswith("error:")


@pytest.mark.parametrize(
    "argv",
    [
        ["homology", path("l6a2"), "--max-size", "6"],
        ["detect", path("hopf"), "--pair", "0,0"],
        ["detect", path("hopf"), "--pair", "0,7"],
        ["audit", path("trefoil")],
    ],
)
def test_domain_errors(argv, capsys):
    assert run(argv) == 1
    err = capsys.readouterr().err
    assert err.startswith(f"error: {argv[0]}:")


def test_state_limit_environment(monkeypatch, capsys):
    monkeypatch.setenv("GRIDFLOER_MAX_STATES", "100")
    assert run(["homology", path("trefoil")]) == 1
    assert "limit is 100" in capsys.readouterr().err


def test_json_output_is_deterministic(capsys):
    run(["detect", path("hopf-disjoint-unknot"), "--json"])
    first = capsys.readouterr().out
    run(["detect", path("hopf-disjoint-unknot"), "--json"])
    assert capsys.readouterr().out == first


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gridfloer", "validate", path("trefoil")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "components: 1" in proc.stdout
