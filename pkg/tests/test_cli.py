import json
import subprocess
import sys

import pytest

from baileykit.cli import main, parse_param
from baileykit.errors import UsageError
from baileykit.series import Monomial


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_equal_exits_zero(capsys):
    code, out, _ = run(capsys, "--verify", "id-1.1", "--order", "30")
    assert code == 0 and out.startswith("id-1.1: equal through q^30")


def test_mismatch_exits_one(capsys):
    code, out, _ = run(capsys, "--verify", "id-4.10", "--order", "10", "--param", "t=q")
    assert code == 1 and "MISMATCH at q^1" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["--verify", "id-nope"],
        ["--verify", "id-1.1", "--param", "c=q"],
        ["--verify", "id-2.12", "--param", "c=banana"],
        ["--verify", "id-2.12", "--param", "c"],
        ["--verify", "id-1.1", "--order", "0"],
        ["--order", "5"],
        ["--verify", "id-1.1", "--format", "xml"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and "error" in err


def test_computation_error_exits_three(capsys):
    code, out, err = run(capsys, "--verify", "id-pair-seed", "--param", "c=1", "--order", "10")
    assert code == 3 and "ERROR" in out and "DegenerateParameterError" in err


def test_error_outranks_mismatch(capsys):
    code, _, _ = run(capsys, "--verify", "id-4.9,id-pair-seed", "--param", "c=1", "--order", "10")
    assert code == 3


def test_json_lines(capsys):
    code, out, _ = run(capsys, "--verify", "id-2.12", "--param", "c=-q^1", "--order", "20", "--n-max", "3", "--format", "json")
    (line,) = out.strip().splitlines()
    d = json.loads(line)
    assert code == 0 and d["identity"] == "id-2.12" and d["params"] == {"c": str(Monomial(-1, 1))}
    assert d["status"] == "equal" and d["order"] == 20


def test_sorted_and_deduplicated(capsys):
    _, out, _ = run(capsys, "--verify", "id-4.5", "--verify", "id-1.1,id-4.5", "--order", "20")
    names = [line.split(":")[0] for line in out.strip().splitlines()]
    assert names == ["id-1.1", "id-4.5"]


def test_fail_fast_stops(capsys):
    code, out, _ = run(capsys, "--verify", "id-4.9,id-4.9-signed", "--order", "20", "--fail-fast")
    assert code == 1 and len(out.strip().splitlines()) == 1


def test_jobs_match_serial(capsys):
    args = ["--verify", "id-1.1,id-4.5,id-4.9", "--order", "20", "--format", "json"]
    _, serial, _ = run(capsys, *args)
    _, parallel, _ = run(capsys, *args, "--jobs", "2")
    strip = lambda text: [{k: v for k, v in json.loads(x).items() if k != "elapsed_ms"} for x in text.splitlines()]  # noqa: E731
    assert strip(serial) == strip(parallel)


def test_list(capsys):
    code, out, _ = run(capsys, "--list")
    assert code == 0 and "id-5.G2" in out and "id-pair-4.1" in out


def test_param_parsing():
    assert parse_param("t=q^1/2") == ("t", Monomial(1, Monomial.parse("q^1/2").exp))
    assert parse_param(" c = -q^3 ") == ("c", Monomial(-1, 3))
    with pytest.raises(UsageError):
        parse_param("=q")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "baileykit", "--verify", "id-4.5", "--order", "15"], capture_output=True, text=True)
    assert proc.returncode == 0 and "equal through q^15" in proc.stdout
