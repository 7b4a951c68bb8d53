"""Command line interface: exit codes, JSON determinism, CSV output and
end-to-end runs of the shipped example inputs."""

import json
import subprocess
import sys
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "data"


def run_cli(*argv, expect: int):
    proc = subprocess.run([sys.executable, "-m", "beattycover.cli", *argv],
                          capture_output=True, text=True)
    assert proc.returncode == expect, (argv, proc.returncode,
                                       proc.stdout[-500:], proc.stderr[-500:])
    return proc


def data(name: str) -> str:
    return str(DATA / name)


def test_verify_golden_pair_clean():
    proc = run_cli("verify", "--family", data("golden_pair.json"),
                   "--window", "1", "2000", expect=0)
    payload = json.loads(proc.stdout)
    assert payload["violations"] == []
    assert payload["r_histogram"] == {"1": 2000}


def test_verify_defect_pair_reports_violations():
    proc = run_cli("verify", "--family", data("offset_pair_defect.json"),
                   "--window", "1", "500", expect=1)
    payload = json.loads(proc.stdout)
    assert payload["violations"]


def test_verify_csv_format():
    proc = run_cli("verify", "--family", data("golden_pair.json"),
                   "--window", "1", "5", "--format", "csv", expect=0)
    lines = proc.stdout.strip().splitlines()
    assert lines[0] == "N,r,epsilon"
    assert len(lines) == 6
    assert lines[1].startswith("1,1,1.0000")


def test_verify_deterministic_across_jobs():
    a = run_cli("verify", "--family", data("sqrt2_pair_m2.json"),
                "--window", "1", "3000", expect=0)
    b = run_cli("verify", "--family", data("sqrt2_pair_m2.json"),
                "--window", "1", "3000", "--jobs", "3", expect=0)
    assert a.stdout == b.stdout


def test_certify_homogeneous_pair():
    proc = run_cli("certify-homogeneous", "--family", data("sqrt2_pair_m2.json"),
                   expect=0)
    payload = json.loads(proc.stdout)
    assert payload["verdict"] == "CERTIFIED_EEC"
    assert payload["pairing"] == [[1, 2]]


def test_certify_pair_exit_codes():
    run_cli("certify-pair", "--family", data("offset_pair_integral.json"), expect=0)
    proc = run_cli("certify-pair", "--family", data("offset_pair_defect.json"),
                   expect=1)
    assert json.loads(proc.stdout)["verdict"] == "CERTIFIED_NOT_EEC"


def test_ap_equal():
    run_cli("ap-equal", "--lhs", data("ap_multiset_16.json"),
            "--rhs", data("ap_multiset_2366.json"), expect=0)
    proc = run_cli("ap-equal", "--lhs", data("ap_multiset_16.json"),
                   "--rhs", data("ap_multiset_16.json"), expect=0)
    assert json.loads(proc.stdout)["equal"] is True


def test_exactness_witness():
    proc = run_cli("exactness", "--system", data("system_16.json"), expect=1)
    payload = json.loads(proc.stdout)
    assert payload["exact"] is False
    assert payload["witness"]["residue"] == 0
    assert payload["witness"]["count"] == 2


def test_complementary_and_decompose():
    run_cli("complementary", "--system", data("system_3x3.json"),
            "--system2", data("system_2x4x4.json"), expect=0)
    proc = run_cli("decompose", "--system", data("system_3x3.json"),
                   "--system2", data("system_2x4x4.json"),
                   "--mode", "reducible", expect=1)
    assert json.loads(proc.stdout)["verdict"] == "IRREDUCIBLE"


def test_decompose_exact_mode_inexact_pair():
    proc = run_cli("decompose", "--system", data("system_16.json"),
                   "--system2", data("system_2366.json"),
                   "--mode", "exact", expect=1)
    assert json.loads(proc.stdout)["verdict"] == "INEXACT"


def test_derive_systems_six_sequence_family():
    proc = run_cli("derive-systems", "--family", data("six_sequence_family.json"),
                   expect=0)
    payload = json.loads(proc.stdout)
    assert payload["complementary_check"] is True
    assert sorted(payload["system"]["a"]) == [1, 6]
    assert sorted(payload["complement"]["a"]) == [2, 3, 6, 6]


def test_build_example48_and_verify_roundtrip(tmp_path):
    out = tmp_path / "family.json"
    proc = run_cli("build-example48", "--theta",
                   data("theta_minus_sqrt2_over_10.json"),
                   "--out", str(out), expect=0)
    assert proc.stdout == ""
    built = json.loads(out.read_text())
    assert built["m"] == 2 and len(built["sequences"]) == 6
    run_cli("verify", "--family", str(out), "--window", "1", "2000", expect=0)


def test_build_example48_range_violation():
    proc = run_cli("build-example48", "--theta", data("sqrt2_minus_1.json"),
                   expect=3)
    assert "error" in proc.stderr


def test_build_graham(tmp_path):
    out = tmp_path / "family.json"
    run_cli("build-graham", "--spec", data("graham_two_cover_spec.json"),
            "--out", str(out), expect=0)
    built = json.loads(out.read_text())
    assert built["m"] == 1
    assert len(built["sequences"]) == 6


def test_fractional_commands():
    proc = run_cli("fractional-classify", "--p", "5", "--q", "3",
                   "--theta1", data("sqrt2_minus_1.json"), expect=0)
    payload = json.loads(proc.stdout)
    assert payload["case"] == "Ci" and payload["value_set"] == [1, 2, 3]

    proc = run_cli("fractional-check-R", "--p", "5", "--q", "3",
                   "--theta1", data("sqrt2_minus_1.json"),
                   "--max-N", "200", expect=0)
    assert json.loads(proc.stdout)["mismatches"] == []

    proc = run_cli("fractional-densities", "--p", "5", "--q", "3",
                   "--theta1", data("sqrt2_minus_1.json"),
                   "--max-N", "20000", "--tolerance", "0.02", expect=0)
    payload = json.loads(proc.stdout)
    assert payload["empirical"]["outside_values"] == []


def test_discrepancy():
    proc = run_cli("discrepancy", "--theta", data("sqrt2_minus_1.json"),
                   "--max-N", "2000", expect=0)
    payload = json.loads(proc.stdout)
    assert float(payload["star_discrepancy"]) < 0.02


def test_f_identity_true_constant():
    proc = run_cli("f-identity", "--theta", data("sqrt2_minus_1.json"),
                   "--count", "200", "--expected", "3", expect=0)
    payload = json.loads(proc.stdout)
    assert float(payload["max_abs_deviation"]) == 0.0
    assert payload["constant_value"].startswith("3.0000")


def test_f_identity_default_expectation_fails():
    # the documented default (2) never matches: the sum is constantly 3
    proc = run_cli("f-identity", "--theta", data("sqrt2_minus_1.json"),
                   "--count", "50", expect=1)
    payload = json.loads(proc.stdout)
    assert payload["constant_value"].startswith("3.0000")


def test_malformed_json_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"m": 1, "sequences": [')
    proc = run_cli("verify", "--family", str(bad), "--window", "1", "10",
                   expect=3)
    err = json.loads(proc.stderr)
    assert "line" in err["error"] and "column" in err["error"]


def test_unknown_field_rejected(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"m": 1, "sequences": [], "extra": 1}))
    run_cli("verify", "--family", str(bad), "--window", "1", "10", expect=3)


def test_precision_validation():
    proc = run_cli("verify", "--family", data("golden_pair.json"),
                   "--window", "1", "10", "--precision", "32", expect=3)
    assert "precision" in proc.stderr


def test_precision_env_override(tmp_path, monkeypatch):
    # env default is picked up; absurdly low value rejected the same way
    import os
    env = dict(os.environ, BEATTY_PRECISION_BITS="32")
    proc = subprocess.run([sys.executable, "-m", "beattycover.cli", "verify",
                           "--family", data("golden_pair.json"),
                           "--window", "1", "10"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 3
