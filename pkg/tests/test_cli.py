"""End-to-end tests of the command line front end, driven through main()
with captured output, plus one real subprocess smoke test."""

import json
import subprocess
import sys

import pytest

from qmod.cli import DEFAULT_PREC_CEILING, RunConfig, main, run_grid


@pytest.fixture(autouse=True)
def _clean_ceiling(monkeypatch):
    monkeypatch.delenv("QMOD_PREC_CEILING", raising=False)


def run(capsys, *argv):
    rc = main(list(argv))
    cap = capsys.readouterr()
    return rc, cap.out, cap.err


# ---------------------------------------------------------------------------
# expand / build-h / build-psi

def test_expand_table_examples(capsys):
    rc, out, err = run(capsys, "expand", "--form", "G27", "--prec", "3")
    assert rc == 0 and err == ""
    assert out == "-1 1\n2 -1\n"
    rc, out, _ = run(capsys, "expand", "--form", "g27", "--prec", "5")
    assert rc == 0
    assert out == "1 1\n4 -2\n"
    rc, out, _ = run(capsys, "expand", "--form", "H2@27", "--prec", "5")
    assert rc == 0
    assert out == "-2 1\n4 -5\n"


def test_expand_json_schema(capsys):
    rc, out, _ = run(capsys, "expand", "--form", "g27", "--prec", "5",
                     "--format", "json")
    assert rc == 0
    payload = json.loads(out)
    assert payload == {"form": "g27", "prec": 5,
                       "coeffs": [[1, "1"], [4, "-2"]]}
    # deterministic key order from sort_keys
    assert out.index('"coeffs"') < out.index('"form"') < out.index('"prec"')


def test_expand_unknown_form_is_usage_error(capsys):
    rc, out, err = run(capsys, "expand", "--form", "nope", "--prec", "5")
    assert rc == 2 and out == ""
    assert err.startswith("error:")
    assert "g27" in err and "H<m>@<level>" in err


def test_expand_requires_form_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["expand", "--prec", "5"])
    assert exc.value.code == 2


def test_build_h_matches_expand(capsys):
    rc, out, _ = run(capsys, "build-h", "--form", "H2@27", "--prec", "5")
    assert rc == 0 and out == "-2 1\n4 -5\n"
    rc, out, _ = run(capsys, "build-h", "--form", "H-1@36", "--prec", "8")
    assert rc == 0 and out == "1 1\n7 -4\n"          # the weight 2 newform
    rc, out, err = run(capsys, "build-h", "--form", "g27")
    assert rc == 2 and "H<m>@<level>" in err


def test_build_psi_table_and_json(capsys):
    rc, out, _ = run(capsys, "build-psi", "--level", "27", "--p", "2",
                     "--prec", "6")
    assert rc == 0 and out == "-2 1\n1 1\n4 2\n"
    rc, out, _ = run(capsys, "build-psi", "--level", "36", "--p", "5",
                     "--prec", "4", "--format", "json")
    assert rc == 0
    payload = json.loads(out)
    assert payload["form"] == "psi5@36"
    assert payload["coeffs"][0] == [-5, "1"]
    assert payload["coeffs"][1] == [1, "3"]


def test_build_psi_rejects_composite_p(capsys):
    rc, _, err = run(capsys, "build-psi", "--level", "27", "--p", "9")
    assert rc == 2 and "must be prime" in err


# ---------------------------------------------------------------------------
# verify

def test_verify_grid_json_example(capsys):
    rc, out, err = run(capsys, "verify", "--curve", "27", "--primes", "2,5",
                       "--m-max", "1", "--K", "20", "--format", "json")
    assert rc == 0
    assert "PASSED 8/8 (skipped 0)" in err
    payload = json.loads(out)
    assert len(payload["reports"]) == 8
    assert all(r["passed"] for r in payload["reports"])
    assert payload["skipped"] == []
    assert payload["summary"] == {"passed": 8, "total": 8, "skipped": 0}
    # canonical order: p then m then check id
    keys = [(r["params"]["p"], r["params"]["m"], r["check_id"])
            for r in payload["reports"]]
    assert keys == sorted(keys)


def test_verify_ineligible_prime_is_skipped(capsys):
    rc, out, _ = run(capsys, "verify", "--curve", "36", "--primes", "2")
    assert rc == 0
    assert "SKIP level=36 p=2: 2 divides the level 36" in out
    assert "PASSED 0/0 (skipped 1)" in out


def test_verify_table_lines(capsys):
    rc, out, _ = run(capsys, "verify", "--curve", "27", "--primes", "2",
                     "--m-max", "0")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "PASS limit level=27 p=2 m=0 K=20"
    assert lines[1] == "PASS valuation level=27 p=2 m=0"
    assert lines[2] == "PASSED 2/2 (skipped 0)"


def test_verify_rejects_composite_primes(capsys):
    rc, _, err = run(capsys, "verify", "--curve", "27", "--primes", "4")
    assert rc == 2 and "must be prime" in err


def test_verify_bad_primes_value(capsys):
    rc, _, err = run(capsys, "verify", "--curve", "27", "--primes", "2;5")
    assert rc == 2 and err.startswith("error:")
    rc, _, err = run(capsys, "verify", "--curve", "27", "--primes", "auto:x")
    assert rc == 2


def test_verify_is_deterministic(capsys):
    args = ("verify", "--curve", "27", "--primes", "2", "--m-max", "0",
            "--format", "json")
    rc1, out1, err1 = run(capsys, *args)
    rc2, out2, err2 = run(capsys, *args)
    assert (rc1, out1, err1) == (rc2, out2, err2)


def test_verify_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    rc, out, err = run(capsys, "verify", "--curve", "27", "--primes", "2",
                       "--m-max", "0", "--format", "json",
                       "--out", str(target))
    assert rc == 0
    assert out == ""                       # payload went to the file
    assert "PASSED 2/2" in err
    payload = json.loads(target.read_text())
    assert len(payload["reports"]) == 2


def test_verify_ceiling_shapes_default_depth(capsys, monkeypatch):
    monkeypatch.setenv("QMOD_PREC_CEILING", "50")
    rc, out, _ = run(capsys, "verify", "--curve", "27", "--primes", "2")
    assert rc == 0
    # 20 * 2^3 + 1 > 50, so only m = 0 runs
    assert "PASSED 2/2 (skipped 0)" in out
    assert "m=1" not in out


def test_verify_ceiling_below_m0_skips(capsys, monkeypatch):
    monkeypatch.setenv("QMOD_PREC_CEILING", "30")
    rc, out, _ = run(capsys, "verify", "--curve", "27", "--primes", "2")
    assert rc == 0
    assert "PASSED 0/0 (skipped 1)" in out
    assert "precision ceiling 30" in out


def test_verify_ceiling_must_be_integer(capsys, monkeypatch):
    monkeypatch.setenv("QMOD_PREC_CEILING", "abc")
    rc, _, err = run(capsys, "verify", "--curve", "27", "--primes", "2")
    assert rc == 2 and "QMOD_PREC_CEILING" in err


def test_verify_explicit_m_max_overrides_ceiling(capsys, monkeypatch):
    monkeypatch.setenv("QMOD_PREC_CEILING", "50")
    rc, out, _ = run(capsys, "verify", "--curve", "27", "--primes", "2",
                     "--m-max", "1")
    assert rc == 0
    assert "PASSED 4/4 (skipped 0)" in out


# ---------------------------------------------------------------------------
# check

def test_check_congruence_table(capsys):
    rc, out, _ = run(capsys, "check", "congruence", "--level", "27",
                     "--p", "2", "--m", "1")
    assert rc == 0
    assert out == "PASS congruence level=27 p=2 m=1\n"


def test_check_requires_level_and_p(capsys):
    rc, _, err = run(capsys, "check", "congruence", "--p", "2")
    assert rc == 2 and "requires --level" in err
    rc, _, err = run(capsys, "check", "residue", "--level", "27")
    assert rc == 2 and "requires --p" in err


def test_check_unknown_id_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check", "frobnicate"])
    assert exc.value.code == 2


def test_check_json_report(capsys):
    rc, out, _ = run(capsys, "check", "nondivisibility", "--level", "32",
                     "--p", "3", "--format", "json")
    assert rc == 0
    payload = json.loads(out)
    assert payload["check_id"] == "nondivisibility"
    assert payload["passed"] is True
    assert payload["params"] == {"level": 32, "p": 3}


def test_check_twist_and_support(capsys):
    rc, out, _ = run(capsys, "check", "twist", "--prec", "60")
    assert rc == 0 and out.startswith("PASS twist")
    rc, out, _ = run(capsys, "check", "support", "--level", "64",
                     "--prec", "80")
    assert rc == 0 and out.startswith("PASS support")


def test_check_theta_psi_flags(capsys):
    rc, out, _ = run(capsys, "check", "theta-psi", "--level", "27",
                     "--p", "2", "--prec", "20", "--m-max", "0", "--K", "10")
    assert rc == 0
    assert out == "PASS theta-psi level=27 p=2 prec=20 m_max=0\n"


# ---------------------------------------------------------------------------
# config objects

def test_run_config_validation():
    with pytest.raises(ValueError, match="unknown command"):
        RunConfig(command="explode").validate()
    with pytest.raises(ValueError, match="unknown level"):
        RunConfig(command="verify", levels=(28,)).validate()
    with pytest.raises(ValueError, match="unknown format"):
        RunConfig(command="verify", format="xml").validate()
    with pytest.raises(ValueError, match="must be prime"):
        RunConfig(command="verify", primes=(6,)).validate()


def test_run_grid_direct_call():
    cfg = RunConfig(command="verify", levels=(32,), primes=(3, 5),
                    m_max=0, K=10)
    reports, skipped = run_grid(cfg)
    assert [r.check_id for r in reports] == ["limit", "valuation"]
    assert all(r.passed for r in reports)
    assert len(skipped) == 1 and skipped[0]["p"] == 5


def test_default_ceiling_constant():
    assert DEFAULT_PREC_CEILING == 10 ** 6


# ---------------------------------------------------------------------------
# subprocess smoke test

def test_module_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "qmod", "expand", "--form", "g36",
         "--prec", "8"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert proc.stdout == "1 1\n7 -4\n"
