import json
import subprocess
import sys

import pytest

from koopcrypt.cli import main, parse_primes


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_text(capsys):
    code, out, _ = run(capsys, "simulate", "--p", "19", "--m", "2", "--steps", "18")
    values = out.split()
    assert code == 0 and len(values) == 19 and values[-1] == "1"
    assert run(capsys, "simulate", "--p", "19", "--m", "2", "--steps", "0")[1].strip() == "1"
    assert run(capsys, "simulate", "--p", "15", "--m", "4", "--steps", "4")[1].split() == ["1", "4", "1", "4", "1"]


def test_simulate_csv_and_json(capsys):
    _, out, _ = run(capsys, "simulate", "--p", "7", "--m", "3", "--steps", "2", "--format", "csv")
    assert out.splitlines() == ["k,x", "0,1", "1,3", "2,2"]
    _, out, _ = run(capsys, "simulate", "--p", "7", "--m", "3", "--format", "json")
    report = json.loads(out)
    assert report["command"] == "simulate" and report["outputs"]["period"] == 6


def test_simulate_bad_input(capsys):
    code, _, err = run(capsys, "simulate", "--p", "15", "--m", "3")
    assert code == 2 and "not a unit" in err


@pytest.mark.parametrize("argv,key,value", [
    (["--scheme", "dh", "--p", "19", "--m", "2", "--c", "13"], "exponent", 5),
    (["--scheme", "dh", "--p", "19", "--m", "2", "--c", "1"], "exponent", 0),
    (["--scheme", "rsa", "--p1", "3", "--p2", "5", "--e", "3"], "exponent", 3),
])
def test_recover(capsys, argv, key, value):
    code, out, _ = run(capsys, "recover", *argv)
    assert code == 0
    assert json.loads(out)["outputs"][key] == value


def test_recover_input_errors(capsys):
    assert run(capsys, "recover", "--scheme", "dh", "--p", "19")[0] == 2
    assert run(capsys, "recover", "--scheme", "dh", "--p", "19", "--m", "2", "--c", "0")[0] == 2
    assert run(capsys, "recover", "--scheme", "rsa", "--p1", "3", "--p2", "3", "--e", "3")[0] == 2


def test_recover_failure_exit_code(capsys, monkeypatch):
    from koopcrypt import cli
    from koopcrypt.errors import RecoveryError

    def boom(*a):
        raise RecoveryError("forced")

    monkeypatch.setattr(cli, "recover_exponent", boom)
    assert run(capsys, "recover", "--scheme", "dh", "--p", "19", "--m", "2", "--c", "13")[0] == 3


@pytest.mark.parametrize("argv", [
    ["simulate", "--p", "19", "--m", "2"],
    ["recover", "--scheme", "dh", "--p", "97", "--m", "5", "--c", "3"],
    ["recover", "--scheme", "rsa", "--p1", "5", "--p2", "11", "--e", "23"],
    ["analyze", "--p", "19", "--m", "2", "--mode", "dimension"],
    ["analyze", "--p", "15", "--m", "4", "--mode", "edmd"],
])
def test_json_is_deterministic(capsys, argv):
    fmt = ["--format", "json"] if argv[0] == "simulate" else []
    _, a, _ = run(capsys, *argv, *fmt, "--no-timing")
    _, b, _ = run(capsys, *argv, *fmt, "--no-timing")
    assert a == b and "timing_ms" not in a
    _, c, _ = run(capsys, *argv, *fmt)
    d = json.loads(c)
    assert d.pop("timing_ms") >= 0 and d == json.loads(a)


def test_bench(capsys, tmp_path):
    code, out, _ = run(capsys, "bench", "--primes", "5")
    assert code == 0
    header, row = out.splitlines()
    assert header.startswith("p,worst_s,avg_s")
    assert row.startswith("5,")
    target = tmp_path / "t.csv"
    assert run(capsys, "bench", "--primes", "11,13", "--sample", "2", "--out", str(target))[0] == 0
    assert [line.split(",")[0] for line in target.read_text().splitlines()[1:]] == ["11", "13"]


def test_parse_primes():
    assert parse_primes("5-20") == [5, 7, 11, 13, 17, 19]
    assert parse_primes("97") == [97]
    with pytest.raises(Exception):
        parse_primes("15")


def test_guard(capsys, monkeypatch):
    assert run(capsys, "bench", "--primes", "100003")[0] == 4
    assert run(capsys, "simulate", "--p", "997", "--m", "7", "--guard", "500")[0] == 4
    monkeypatch.setenv("KOOPCRYPT_GUARD", "100")
    assert run(capsys, "simulate", "--p", "101", "--m", "2", "--steps", "1")[0] == 4
    monkeypatch.setenv("KOOPCRYPT_GUARD", "off")
    assert run(capsys, "simulate", "--p", "100003", "--m", "2", "--steps", "1")[0] == 0
    monkeypatch.delenv("KOOPCRYPT_GUARD")
    assert run(capsys, "simulate", "--p", "100003", "--m", "2", "--steps", "1", "--no-guard")[0] == 0


def test_analyze_dimension(capsys):
    _, out, _ = run(capsys, "analyze", "--p", "19", "--m", "2", "--mode", "dimension")
    table = {row["q"]: row["feasible"] for row in json.loads(out)["outputs"]["table"]}
    assert table[8] is False and table[9] is True
    assert json.loads(out)["outputs"]["minimal_q"] == 9


def test_analyze_edmd(capsys):
    _, out, _ = run(capsys, "analyze", "--p", "15", "--m", "4", "--mode", "edmd")
    assert json.loads(out)["outputs"]["q_min"] == 1


def test_analyze_lincomp(capsys, tmp_path):
    seq = tmp_path / "counter3.txt"
    seq.write_text("\n".join(map(str, [0, 1, 2] * 3)) + "\n")
    code, out, _ = run(capsys, "analyze", "--seq", str(seq), "--mode", "lincomp", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1] == "counter3,9,3,root_of_unity,1"
    bad = tmp_path / "bad.txt"
    bad.write_text("1\nx\n")
    assert run(capsys, "analyze", "--seq", str(bad), "--mode", "lincomp")[0] == 2
    assert run(capsys, "analyze", "--mode", "lincomp")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "koopcrypt", "recover", "--scheme", "dh", "--p", "19", "--m", "2", "--c", "13"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["outputs"]["exponent"] == 5
