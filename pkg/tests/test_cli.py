import subprocess
import sys

import pytest

from hybridkd.cli import main

from conftest import TWO_PATH_VMIN, NETWORKS

TWO_PATH = str(NETWORKS / "two_path_xor.json")
DC_SERIES = str(NETWORKS / "datacenter_series.json")
F5 = str(NETWORKS / "f5_code.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_rate(capsys):
    code, out, _ = run(capsys, "rate", DC_SERIES)
    assert code == 0 and out == "2.12266e+07\n"
    assert float(out) == pytest.approx(2.123e7, rel=5e-4)


def test_vulns(capsys):
    code, out, _ = run(capsys, "vulns", TWO_PATH)
    assert code == 0 and out.splitlines() == TWO_PATH_VMIN
    assert run(capsys, "vulns", TWO_PATH, "--summary")[1] == "min_attack_size=2 vuln_count=9\n"


def test_attack(capsys):
    assert run(capsys, "attack", TWO_PATH, "--compromise", "X,Y")[1] == "COMPROMISED\n"
    assert run(capsys, "attack", TWO_PATH, "--compromise", "X,q_AX")[1] == "SAFE\n"


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", TWO_PATH, "--rounds", "32", "--seed", "1")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "key_bits 32" and lines[1] == "endpoints_agree yes"
    assert lines[4:] == [f"{e},32,32" for e in ("k_AX", "k_XB", "k_YB", "q_AX", "q_AY")]


def test_qkd_curve(capsys):
    code, out, _ = run(capsys, "qkd-curve", "--preset", "commercial", "--min", "0", "--max", "0", "--step", "1")
    assert code == 0 and out.splitlines()[0] == "distance_km,rate_bps" and len(out.splitlines()) == 2


def test_kem_rate(capsys):
    assert run(capsys, "kem-rate", "--preset", "kyber1024-pc")[1] == "3.07205e+06\n"


def test_lc_access(capsys):
    code, out, _ = run(capsys, "lc-access", F5)
    assert code == 0
    assert "{1,4}\n{2,4}\n{3,4}\n" in out and "dictatorial 4\n" in out


def test_ss_demo(capsys):
    code, out, _ = run(capsys, "ss-demo", "--q", "5", "--n", "3", "--g", "1", "--seed", "2")
    assert code == 0 and "ok=yes" in out and "secret=uniform" in out and "determined=yes" in out


def test_kms(capsys):
    code, out, _ = run(capsys, "kms", "--n", "2", "--bits", "64", "--seed", "1", "--compromise", "K,q1")
    assert code == 0 and "recovery ok" in out and "oracle COMPROMISED" in out and "formula COMPROMISED" in out
    out = run(capsys, "kms", "--n", "1", "--bits", "8", "--compromise", "r1,k0")[1]
    assert "formula SAFE" in out and "mismatch amended_formula COMPROMISED" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["rate", "/nonexistent.json"],
        ["attack", TWO_PATH, "--compromise", "A"],
        ["attack", TWO_PATH, "--compromise", "nope"],
        ["qkd-curve", "--preset", "nope", "--min", "0", "--max", "1", "--step", "1"],
        ["qkd-curve", "--preset", "commercial", "--min", "5", "--max", "1", "--step", "1"],
        ["ss-demo", "--q", "4", "--n", "3", "--g", "1"],
        ["lc-access", TWO_PATH],
        ["kms", "--n", "0", "--bits", "8"],
    ],
)
def test_domain_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == "" and err.startswith("error:")


@pytest.mark.parametrize("argv", [[], ["frob"], ["rate"], ["kem-rate"], ["simulate", TWO_PATH, "--rounds", "x", "--seed", "1"]])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
    assert capsys.readouterr().out == ""


def test_bad_network_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"nodes": ["A"], "links": [], "protocol": {"op": "link"}}')
    code, out, err = run(capsys, "rate", str(bad))
    assert code == 1 and "$.protocol.id" in err


def test_subprocess_deterministic():
    cmd = [sys.executable, "-m", "hybridkd.cli", "simulate", TWO_PATH, "--rounds", "48", "--seed", "5"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and b"digest" in a
