import json
import math

import pytest

from dixonian.cli import main
from dixonian.urn import yule_closed_form


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- series ------------------------------------------------------------------


def test_series_sm_table(capsys):
    code, out, _ = run(capsys, "series", "sm", "--order", "13")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 14
    assert lines[0] == "0, 0, 0"
    assert lines[1] == "1, 1/1!, 1"
    assert lines[4] == "4, -4/4!, -4"
    assert lines[-1] == "13, 6476800/13!, 6476800"


def test_series_cm_order_zero(capsys):
    code, out, _ = run(capsys, "series", "cm", "--order", "0")
    assert code == 0
    assert out == "0, 1, 1\n"


def test_series_product_rows(capsys):
    # P = smh * cmh keeps integer scaled coefficients
    code, out, _ = run(capsys, "series", "P", "--order", "7")
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "1, 1/1!, 1"
    assert lines[4] == "4, 12/4!, 12"
    assert lines[7] == "7, 720/7!, 720"


def test_series_json_big_integers_are_strings(capsys):
    code, out, _ = run(capsys, "series", "sm", "--order", "13", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["function"] == "sm"
    rows = doc["rows"]
    assert rows[4]["egf_integer"] == "-4"
    assert rows[13]["egf_integer"] == "6476800"
    assert rows[13]["coefficient"] == "6476800/13!"


def test_series_csv_round_trips(capsys):
    code, out, _ = run(capsys, "series", "cm", "--order", "3", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,coefficient,egf_integer"
    assert lines[1] == "0,1,1"
    assert lines[4] == "3,-2/3!,-2"


# -- verify ------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "conrad-j", "--family", "sm", "--depth", "4"),
        ("verify", "conrad-j", "--depth", "3"),
        ("verify", "conrad-s", "--family", "cm", "--depth", "6"),
        ("verify", "parity", "--n", "5"),
        ("verify", "r-repeated", "--max-n", "5"),
        ("verify", "urn", "--n", "5"),
        ("verify", "yule"),
        ("verify", "valent", "--max-n", "3"),
        ("verify", "width", "--max-n", "4"),
        ("verify", "andre", "--max-n", "3"),
    ],
)
def test_verify_targets_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.splitlines()[-1] == "PASS"


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "conrad-j", "--family", "sm", "--depth", "4"),
        ("verify", "conrad-s", "--family", "cm", "--depth", "6"),
        ("verify", "parity", "--n", "4"),
        ("verify", "r-repeated", "--max-n", "4"),
        ("verify", "urn", "--n", "4"),
        ("verify", "yule"),
        ("verify", "valent", "--max-n", "2"),
        ("verify", "width", "--max-n", "3"),
        ("verify", "andre", "--max-n", "2"),
    ],
)
def test_injected_fault_turns_target_red(capsys, argv):
    code, out, _ = run(capsys, *argv, "--inject-fault")
    assert code == 1
    assert out.splitlines()[-1].startswith("FAIL")


def test_verify_valent_prints_polynomials(capsys):
    code, out, _ = run(capsys, "verify", "valent", "--max-n", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "Q0: Q0(z) = 1"
    assert lines[1] == "Q1: Q1(z) = z + 2"


def test_verify_parity_prints_table(capsys):
    code, out, _ = run(capsys, "verify", "parity", "--n", "4")
    assert code == 0
    assert "n=4: X=4 Y=0" in out.splitlines()


def test_verify_unknown_family_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "conrad-j", "--family", "nope")
    assert code == 2
    assert "family" in err


# -- enumerate ----------------------------------------------------------------


def test_enumerate_parity_witnesses(capsys):
    code, out, _ = run(capsys, "enumerate", "perms", "--class", "Y", "--n", "3")
    assert code == 0
    assert out == "2 1 3\n3 1 2\n"
    code, out, _ = run(capsys, "enumerate", "perms", "--class", "X", "--n", "1")
    assert code == 0
    assert out == "1\n"


def test_enumerate_histories(capsys):
    code, out, _ = run(capsys, "enumerate", "histories", "--n", "2")
    assert code == 0
    assert out == "xxy\nyxx\n"


def test_enumerate_cap_exceeded_fails(capsys, monkeypatch):
    monkeypatch.setenv("DIXONIAN_BRUTE_CAP", "3")
    code, out, err = run(capsys, "enumerate", "perms", "--class", "X", "--n", "4")
    assert code == 1
    assert out == ""
    assert "cap" in err
    code, _, err = run(capsys, "enumerate", "histories", "--n", "4")
    assert code == 1
    assert "cap" in err


def test_enumerate_flag_mismatches_are_usage_errors(capsys):
    assert run(capsys, "enumerate", "perms", "--n", "3")[0] == 2
    assert run(capsys, "enumerate", "histories", "--class", "X", "--n", "2")[0] == 2
    assert run(capsys, "enumerate", "perms", "--class", "X", "--n", "3", "--start", "y")[0] == 2


def test_enumerate_json_listing(capsys):
    code, out, _ = run(
        capsys, "enumerate", "perms", "--class", "Y", "--n", "3", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["items"] == [[2, 1, 3], [3, 1, 2]]


# -- eval ---------------------------------------------------------------------


def test_eval_pi3_digits(capsys):
    code, out, _ = run(capsys, "eval", "pi3", "--digits", "10")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "5.2999162508"
    assert lines[1] == "error < 2e-10"


def test_eval_smh_at_zero(capsys):
    code, out, _ = run(capsys, "eval", "smh", "0")
    assert code == 0
    assert float(out.splitlines()[0]) == 0.0


def test_eval_smh_known_value(capsys):
    code, out, _ = run(capsys, "eval", "smh", "1", "--digits", "10")
    assert code == 0
    assert out.splitlines()[0] == "1.2054151514"


def test_eval_yule_matches_ode_oracle(capsys):
    code, out, _ = run(capsys, "eval", "yuleX", "1.0", "--digits", "12")
    assert code == 0
    expected = yule_closed_form(1.0)[0]
    assert abs(float(out.splitlines()[0]) - expected) < 1e-9
    code, out, _ = run(capsys, "eval", "yuleY", "0.25", "--digits", "12")
    assert code == 0
    expected = yule_closed_form(0.25)[1]
    assert abs(float(out.splitlines()[0]) - expected) < 1e-9


def test_eval_domain_violations_exit_one(capsys):
    code, _, err = run(capsys, "eval", "smh", "2")
    assert code == 1
    assert err != ""
    code, _, err = run(capsys, "eval", "yuleX", "--", "-0.5")
    assert code == 1
    assert "forward" in err


def test_eval_argument_arity_is_checked(capsys):
    assert run(capsys, "eval", "pi3", "1")[0] == 2
    assert run(capsys, "eval", "smh")[0] == 2
    assert run(capsys, "eval", "smh", "abc")[0] == 2


# -- global plumbing -----------------------------------------------------------


def test_usage_errors_exit_two(capsys):
    assert run(capsys, "series", "tanh")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "series", "sm", "--order", "-1")[0] == 2
    assert run(capsys, "series", "sm", "--format", "xml")[0] == 2
    assert run(capsys, "eval", "pi3", "--precision", "5")[0] == 2


def test_environment_overrides(capsys, monkeypatch):
    monkeypatch.setenv("DIXONIAN_ORDER", "5")
    code, out, _ = run(capsys, "series", "sm")
    assert code == 0
    assert len(out.splitlines()) == 6
    monkeypatch.setenv("DIXONIAN_FORMAT", "json")
    code, out, _ = run(capsys, "series", "sm")
    assert json.loads(out)["order"] == 5
    # explicit flags win over the environment
    code, out, _ = run(capsys, "series", "sm", "--order", "4", "--format", "text")
    assert out.splitlines()[-1] == "4, -4/4!, -4"
    monkeypatch.setenv("DIXONIAN_ORDER", "nine")
    assert run(capsys, "series", "sm")[0] == 2


def test_output_file_matches_stdout(capsys, tmp_path):
    code, out, _ = run(capsys, "series", "sm", "--order", "7")
    assert code == 0
    target = tmp_path / "table.txt"
    code, piped, _ = run(
        capsys, "series", "sm", "--order", "7", "--output", str(target)
    )
    assert code == 0
    assert piped == ""
    assert target.read_text(encoding="utf-8") == out


def test_output_is_deterministic(capsys):
    first = run(capsys, "verify", "parity", "--n", "4", "--format", "json")
    second = run(capsys, "verify", "parity", "--n", "4", "--format", "json")
    assert first == second


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0
    code, out, _ = run(capsys, "series", "--help")
    assert code == 0
