import io
import json
import subprocess
import sys

import pytest

from schurindex.cli import EXIT_INPUT, EXIT_OK, EXIT_REFUSAL, run

TOP_KEYS = {"beta", "p_power", "case", "nu", "constants", "q0", "h", "frame", "oracle"}


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    lines = [json.loads(line) for line in out.getvalue().splitlines()]
    return code, lines, err.getvalue()


def test_beta_on_Q_at_2():
    code, [rep], _ = call("beta", "--field", '{"conductor":2,"generators":[]}', "--p", "2", "--r", "3")
    assert code == EXIT_OK
    assert rep["beta"] == 1 and rep["case"] == "1b" and rep["p_power"] == 2


def test_beta_on_Q_zeta5():
    code, [rep], _ = call("beta", "--cyclotomic", "5", "--p", "5", "--r", "11")
    assert code == EXIT_OK and rep["beta"] == 1


def test_beta_trivial():
    code, [rep], _ = call("beta", "--cyclotomic", "1", "--p", "3", "--r", "7")
    assert code == EXIT_OK and rep["beta"] == 0 and rep["case"] == "trivial"


def test_output_keys_are_schema_stable():
    for argv in (
        ["beta", "--cyclotomic", "1", "--p", "2", "--r", "3"],
        ["beta", "--cyclotomic", "21", "--p", "3", "--r", "7", "--trace"],
        ["oracle", "--cyclotomic", "4", "--p", "2", "--r", "5"],
    ):
        code, [rep], _ = call(*argv)
        assert code == EXIT_OK
        assert {"beta", "p_power", "case", "nu", "constants"} <= set(rep) <= TOP_KEYS
        assert set(rep["constants"]) == {"m", "a", "s", "b"}


@pytest.mark.parametrize("argv", [
    ["beta", "--cyclotomic", "1", "--p", "2", "--r", "4"],
    ["beta", "--cyclotomic", "1", "--p", "4", "--r", "5"],
    ["beta", "--field", '{"conductor":16,"generators":[4]}', "--p", "2", "--r", "3"],
    ["beta", "--field", "not json", "--p", "2", "--r", "3"],
    ["beta", "--p", "2", "--r", "3"],
    ["beta", "--cyclotomic", "1", "--p", "2"],
    ["frame", "--cyclotomic", "1", "--p", "3"],
    ["beta", "--cyclotomic", "21", "--p", "3", "--r", "7", "--q0-bound", "5"],
])
def test_invalid_input_exits_2(argv):
    code, lines, _ = call(*argv)
    assert code == EXIT_INPUT and lines == []


def test_oracle_agrees():
    code, [rep], _ = call("oracle", "--cyclotomic", "1", "--p", "2", "--r", "3")
    assert code == EXIT_OK
    assert rep["oracle"]["beta"] == rep["beta"] == 1
    assert rep["oracle"]["cardinality"] > 0


def test_oracle_without_roots_of_unity():
    code, [rep], _ = call("oracle", "--cyclotomic", "1", "--p", "3", "--r", "7")
    assert code == EXIT_OK and rep["oracle"]["beta"] == 0 and "skipped" in rep["oracle"]


def test_oracle_refusal_exits_3():
    code, [rep], _ = call("oracle", "--cyclotomic", "1", "--p", "2", "--r", "3", "--max-combinations", "100")
    assert code == EXIT_REFUSAL
    assert rep["error"] == "oracle refusal" and rep["cardinality"] == 16 ** 6


def test_sweep_keeps_input_order():
    code, lines, _ = call("sweep", "--cyclotomic", "4", "--p", "2", "3", "--r", "13", "3", "7")
    assert code == EXIT_OK and len(lines) == 6
    singles = [call("beta", "--cyclotomic", "4", "--p", str(p), "--r", str(r))[1][0]
               for p in (2, 3) for r in (13, 3, 7)]
    assert lines == singles


def test_sweep_with_workers_matches_serial():
    _, serial, _ = call("sweep", "--cyclotomic", "8", "--p", "2", "--r-max", "30")
    _, parallel, _ = call("sweep", "--cyclotomic", "8", "--p", "2", "--r-max", "30", "--workers", "2")
    assert serial == parallel and len(serial) == 9


def test_sweep_needs_primes():
    code, _, _ = call("sweep", "--cyclotomic", "4", "--p", "2")
    assert code == EXIT_INPUT


def test_frame_command():
    code, [fr], _ = call("frame", "--cyclotomic", "1", "--p", "2")
    assert code == EXIT_OK
    assert fr["N"] == 16 and fr["rho"] == 15 and fr["sigma"] == 5


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "schurindex.cli", "beta", "--cyclotomic", "5", "--p", "5", "--r", "11"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["beta"] == 1
