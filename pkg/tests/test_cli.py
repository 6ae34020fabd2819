import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from psfield import cli, haar_sim
from psfield.report import MAX_WITNESSES, SCHEMA, Check, RunReport, strip_timing


def run(*argv):
    buf = io.StringIO()
    code, rep = cli.run(list(argv), out=buf)
    return code, buf.getvalue(), rep


def run_json(*argv):
    code, text, _ = run(*argv, "--json", "--threads", "1")
    return code, json.loads(text)


def test_tournament_verify_example():
    code, d = run_json("tournament", "verify", "--q", "7", "--p", "3")
    assert code == 0 and d["passed"]
    counts = d["checks"][0]["counts"]
    assert counts["tuples"] == 210 and counts["violations"] == 0


def test_haar_estimate_example():
    code, d = run_json("haar", "estimate", "--p", "3", "--level", "4", "--trials", "1000000", "--seed", "7")
    assert code == 0
    c = d["checks"][0]["counts"]
    assert c["exact"] == "1/27" and abs(c["z"]) <= 4
    assert d["seed"] == 7 and d["parameters"]["seed"] == 7


def test_usage_errors_exit_2(capsys):
    assert run("tournament", "verify", "--q", "7", "--p", "5")[0] == 2
    assert run("tournament", "verify", "--q", "6", "--p", "5")[0] == 2
    assert run("haar", "estimate", "--p", "3", "--level", "2", "--trials", "0")[0] == 2
    assert run("nonsense")[0] == 2
    assert run("field", "--q", "9", "--bogus")[0] == 2
    assert run("haar", "estimate", "--level", "2")[0] == 2  # --p missing
    assert run("field", "--q", "9", "--threads", "0")[0] == 2
    assert "error" in capsys.readouterr().err


def test_check_failure_exits_1(monkeypatch):
    monkeypatch.setattr(haar_sim, "exact_event_measure", lambda p, k, e: Fraction(1, 2))
    code, text, rep = run("haar", "exact", "--p", "3", "--level", "3")
    assert code == 1 and not rep.passed
    assert "[FAIL]" in text


@pytest.mark.parametrize(
    "argv",
    [
        "field --q 9 --element [1,2]",
        "cyclo units --p 3 --level 4",
        "cyclo roots --p 3 --q 7 --depth 2",
        "tournament mu2n --q 13 --n 2",
        "tournament index --q 64 --p 3",
        "tournament vandermonde --p 5",
        "tournament obstruction --q 7 --p 3",
        "interpret iso --q 4 --n 3",
        "interpret galois --q 3 --n 4",
        "kummer chain --q 7 --b 3 --p 3 --depth 1",
        "artin-schreier solve --q 9 --b 0",
        "artin-schreier bridge --q 9",
        "lemma fuzz --trials 200",
        "lemma bridge --q 9",
        "puiseux verify --q 7 --p 3 --depth 2 --trials 50",
        "haar exact --p 2 --level 4",
        "haar table --p 3 --level 5",
        "haar uniformity --p 3 --level 2 --trials 100000",
    ],
)
def test_subcommands_pass_with_schema(argv):
    code, d = run_json(*argv.split())
    assert code == 0
    assert d["schema"] == SCHEMA and d["version"]
    assert set(d) == {"schema", "version", "command", "parameters", "seed", "passed", "checks", "wall_time"}
    for c in d["checks"]:
        assert set(c) == {"name", "passed", "counts", "witnesses"}
        assert len(c["witnesses"]) <= MAX_WITNESSES


def test_text_output():
    code, text, _ = run("haar", "table", "--p", "3", "--level", "4")
    assert code == 0 and "[PASS] decay" in text and "seed 7" in text


def test_determinism_modulo_timing():
    argv = ("lemma", "fuzz", "--trials", "300", "--seed", "3")
    _, a = run_json(*argv)
    _, b = run_json(*argv)
    assert strip_timing(a) == strip_timing(b)
    assert json.dumps(strip_timing(a), sort_keys=True) == json.dumps(strip_timing(b), sort_keys=True)


def test_thread_count_does_not_change_results():
    argv = ["haar", "estimate", "--p", "5", "--level", "3", "--trials", "300000", "--json"]
    _, t1, _ = run(*argv, "--threads", "1")
    _, t3, _ = run(*argv, "--threads", "3")
    a, b = json.loads(t1), json.loads(t3)
    assert a["checks"] == b["checks"] and a["parameters"] == b["parameters"]


def test_witness_lists_are_bounded():
    rep = RunReport(["x"], {}, [Check("c", False, {}, list(range(50)))])
    assert len(rep.to_dict()["checks"][0]["witnesses"]) == MAX_WITNESSES


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "psfield", "tournament", "vandermonde", "--p", "3", "--json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert out.returncode == 0 and json.loads(out.stdout)["passed"]
