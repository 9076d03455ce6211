"""Command-line runner: parsing, exit codes, determinism, artifacts."""

import json
import subprocess
import sys

import numpy as np
import pytest

from fracdim.cli import (EXIT_CONFIG, EXIT_NUMERICAL, RunConfig, main,
                         parse_family, parse_model, parse_phi, parse_set)


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "fracdim.cli", *args],
                          capture_output=True, text=True)
    return proc


# ---------------------------------------------------------------------------
# descriptor parsing
# ---------------------------------------------------------------------------

def test_parse_set_descriptors():
    assert parse_set("interval:0,1").kind == "interval"
    assert parse_set("cantor3").kind == "ifs"
    assert parse_set("cantor:0.4").params["ratios"][0] == 0.4
    assert parse_set("finite:0,0.5,1").params["points"].size == 3
    with pytest.raises(Exception):
        parse_set("blob:1")


def test_parse_phi_and_model():
    assert parse_phi("stable:0.5").family == "stable"
    assert parse_phi("gamma:1,2").family == "gamma"
    assert parse_phi("cpd:1,0.5,0.1").family == "compound_poisson_drift"
    assert parse_phi("drift:2").family == "compound_poisson_drift"
    assert parse_model("stable:0.8").kind == "isotropic_stable"
    assert parse_model("stable:0.8,2,1").params["c"] == 2.0
    assert parse_model("subordinator:stable:0.5").kind == "subordinator"
    assert parse_model("subbrownian:gamma:1,1,2").d == 2


def test_parse_family_needs_parameters():
    cfg = RunConfig(command="profile", family="fh")
    with pytest.raises(Exception):
        parse_family(cfg)
    cfg = RunConfig(command="profile", family="fh", s=1.0)
    assert parse_family(cfg).kind == "fh"
    cfg = RunConfig(command="profile", family="sandwich:0.8,1")
    assert parse_family(cfg).kind == "sandwich"


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------

def test_validation_exit_codes():
    # eps ladder with ratio > 1
    assert main(["profile", "--set", "interval:0,1", "--family", "fh",
                 "--s", "1.0", "--ladder", "0.1,2,5"]) == EXIT_CONFIG
    # missing required field
    assert main(["profile", "--family", "fh", "--s", "1.0",
                 "--ladder", "0.1,0.5,5"]) == EXIT_CONFIG
    # ladder too short
    assert main(["subordinator", "--set", "interval:0,1", "--phi", "stable:0.5",
                 "--ladder", "2,3,2"]) == EXIT_CONFIG
    # stochastic command without seed
    assert main(["simulate", "--set", "interval:0,1", "--model", "stable:2",
                 "--ladder", "0.125,0.5,5"]) == EXIT_CONFIG
    # unknown oracle name
    assert main(["oracle", "--name", "nope"]) == EXIT_CONFIG


def test_numerical_exit_code(tmp_path):
    # an unreachable gap target plus a one-iteration budget cannot converge
    out = tmp_path / "r.json"
    code = main(["subordinator", "--set", "interval:0,1", "--phi", "drift:1",
                 "--ladder", "2,2,3", "--tol", "0", "--max-iter", "1",
                 "--out", str(out)])
    assert code == EXIT_NUMERICAL


def test_config_file_roundtrip_and_override(tmp_path):
    cfg = {"command": "theta", "phi": "stable:0.5", "s": 0.7, "lam_max": 1e10}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / "t.json"
    assert main(["theta", "--config", str(path), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert abs(rep["theta"] - (1 - 0.5 / 0.7)) <= 0.02
    # flag overrides the file value
    assert main(["theta", "--config", str(path), "--s", "0.5",
                 "--lam-max", "1e26", "--out", str(out)]) == 0
    rep2 = json.loads(out.read_text())
    assert rep2["s"] == 0.5 and abs(rep2["theta"]) <= 0.02

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["theta", "--config", str(bad)]) == EXIT_CONFIG
    unknown = tmp_path / "unk.json"
    unknown.write_text(json.dumps({"command": "theta", "wat": 1}))
    assert main(["theta", "--config", str(unknown)]) == EXIT_CONFIG


# ---------------------------------------------------------------------------
# commands end to end
# ---------------------------------------------------------------------------

def test_theta_command_prints_prediction(capsys):
    assert main(["theta", "--phi", "stable:0.5", "--s", "0.7"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert abs(rep["theta"] - 0.2857) <= 0.02
    assert abs(rep["predicted_profile"] - 0.5) <= 0.02


def test_profile_command_cantor(tmp_path):
    out = tmp_path / "r.json"
    csv = tmp_path / "r.csv"
    code = main(["profile", "--set", "cantor3", "--family", "fh", "--s", "1.0",
                 "--ladder", "0.1,0.5,8", "--out", str(out), "--csv", str(csv),
                 "--restarts", "2"])
    assert code == 0
    rep = json.loads(out.read_text())
    assert abs(rep["estimate"] - 0.6309) <= 0.05
    assert (tmp_path / "r.json.meta.json").exists()   # timestamps live here
    assert "written_at" not in out.read_text()
    lines = csv.read_text().strip().splitlines()
    assert len(lines) == 9


def test_subordinator_command(tmp_path):
    out = tmp_path / "s.json"
    code = main(["subordinator", "--set", "interval:0,1", "--phi", "stable:0.5",
                 "--ladder", "10,4,6", "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert abs(rep["estimate"] - 0.5) <= 0.05


def test_simulate_command(tmp_path):
    out = tmp_path / "sim.json"
    csv = tmp_path / "sim.csv"
    code = main(["simulate", "--set", "interval:0,1", "--model",
                 "subordinator:stable:0.5", "--ladder", "0.25,0.5,8",
                 "--paths", "8", "--seed", "3", "--out", str(out),
                 "--csv", str(csv)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert abs(rep["median"] - 0.5) <= 0.2
    assert len(csv.read_text().strip().splitlines()) == 9


def test_oracle_command(capsys):
    assert main(["oracle", "--name", "two-point-energy", "--params", "0.5"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["value"] == 0.75
    assert main(["oracle", "--name", "cantor-capacity", "--params", "3"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["value"] == 16


def test_profile_report_byte_deterministic(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert main(["profile", "--set", "finite:0,0.4,1", "--family", "fh",
                     "--s", "0.8", "--ladder", "0.1,0.5,5", "--seed", "3",
                     "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_verify_fast_deterministic_bytes(tmp_path):
    out1, out2 = tmp_path / "v1.json", tmp_path / "v2.json"
    p1 = run_cli("verify", "--suite", "fast", "--seed", "0", "--out", str(out1))
    p2 = run_cli("verify", "--suite", "fast", "--seed", "0", "--out", str(out2))
    assert p1.returncode == 0, p1.stderr
    assert p2.returncode == 0, p2.stderr
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["all_passed"] and report["suite"] == "fast"
    assert all(line.startswith("[PASS]") for line in p1.stderr.strip().splitlines())
