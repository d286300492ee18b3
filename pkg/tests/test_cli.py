import json
import subprocess
import sys

import pytest

from nilvar.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_components_a5(capsys):
    code, data = run_json(capsys, "components", "--type", "A5")
    assert code == EXIT_OK
    assert (data["schema"], data["count"], data["dim"], data["seed"]) == (1, 1, 35, 0)


def test_components_g2(capsys):
    _, data = run_json(capsys, "components", "--type", "G2")
    assert data["count"] == 2 and data["dim"] == 14


def test_components_b4_diagrams(capsys):
    _, data = run_json(capsys, "components", "--type", "B4")
    assert data["count"] == 2
    assert [r["diagram"] for r in data["rows"]] == ["2222", "2020"]  # (9) and (5,3,1)


def test_components_tsv(capsys):
    code, out, _ = run(capsys, "components", "--type", "E8", "--format", "tsv")
    lines = out.splitlines()
    assert code == EXIT_OK and "# schema=1" in lines and "# count=11" in lines
    assert lines[lines.index("J\tdiagram") + 1] == "-\t22222222"


def test_bala_carter_orbit_count(capsys):
    _, data = run_json(capsys, "bala-carter", "--type", "G2")
    assert data["orbits"] == 5


def test_witness_gl(capsys):
    code, data = run_json(capsys, "witness", "--partition", "2,2", "--prime", "5")
    assert code == EXIT_OK and data["status"] == "pass"
    assert data["certificate"]["partition_zhat"] == "4"


def test_witness_form(capsys):
    code, data = run_json(capsys, "witness", "--partition", "3,3,3", "--kappa", "0")
    assert code == EXIT_OK and data["certificate"]["partition_zhat"] == "9"
    assert data["certificate"]["checks"]["skew_adjoint"] is True


def test_witness_not_required(capsys):
    code, data = run_json(capsys, "witness", "--partition", "3,2,1")
    assert code == EXIT_OK and data["status"] == "no_witness_required"


@pytest.mark.parametrize(
    "argv",
    [
        ["components", "--type", "X9"],
        ["components"],
        ["witness", "--partition", "2,a"],
        ["witness", "--partition", "2,1", "--kappa", "0"],
        ["witness", "--partition", "2,2", "--prime", "4"],
        ["witness", "--partition", "2,2", "--kappa", "0", "--prime", "2"],
        ["count", "pairs", "3", "--budget", "10"],
        ["hilbert", "--r", "1"],
        ["restricted-check"],
        ["nonsense"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_USAGE and out == "" and err


def test_env_budget(capsys, monkeypatch):
    monkeypatch.setenv("NILVAR_BUDGET", "10")
    assert run(capsys, "count", "nilpotent", "3", "--primes", "2")[0] == EXIT_USAGE
    monkeypatch.setenv("NILVAR_BUDGET", "lots")
    assert run(capsys, "count", "nilpotent", "2")[0] == EXIT_USAGE


def test_exceptional_g2(capsys):
    code, data = run_json(capsys, "exceptional", "g2")
    assert code == EXIT_OK and data["status"] == "pass"
    assert all(r["pass"] for r in data["rows"])


def test_count_pairs_exponent(capsys):
    code, data = run_json(capsys, "count", "pairs", "2", "--primes", "2,3")
    assert code == EXIT_OK and data["exponent"] == 3 and data["methods_agree"]
    assert [r["count"] for r in data["rows"]] == [10, 33]


def test_count_hilbert_exponent(capsys):
    _, data = run_json(capsys, "count", "hilbert", "2")
    assert data["exponent"] == 1 and [r["count"] for r in data["rows"]] == [3, 4]


def test_count_nilpotent_tsv(capsys):
    _, out, _ = run(capsys, "count", "nilpotent", "2", "--primes", "2", "--format", "tsv")
    lines = out.splitlines()
    assert "object\tn_or_r\tq\tcount\texponent" in lines
    assert lines[-1] == "nilpotent_matrices\t2\t2\t4\t"


def test_hilbert_command(capsys):
    code, data = run_json(capsys, "hilbert", "--r", "3")
    assert code == EXIT_OK and data["exponent"] == 2
    assert [r["points"] for r in data["rows"]] == [7, 13]


def test_restricted_check(capsys):
    code, data = run_json(capsys, "restricted-check", "--partition", "2,1", "--primes", "2,3")
    assert code == EXIT_OK and data["status"] == "pass"
    assert all(r["MT"] == 2 for r in data["rows"])


def test_deterministic_output(capsys):
    argv = ["restricted-check", "--n", "2", "--seed", "7"]
    first = run(capsys, *argv)
    assert first == run(capsys, *argv)
    assert json.loads(first[1])["seed"] == 7


def test_failure_exit_code(capsys, monkeypatch):
    import nilvar.cli as cli
    from nilvar.exceptional import Certificate

    def broken():
        cert = Certificate("broken", 5)
        cert.add("always_false", False)
        return cert

    monkeypatch.setitem(cli.SCENARIOS, "g2", broken)
    code, data = run_json(capsys, "exceptional", "g2")
    assert code == EXIT_FAIL and data["status"] == "fail"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nilvar.cli", "components", "--type", "A2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == 1
