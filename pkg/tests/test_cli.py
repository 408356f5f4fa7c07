import csv
import io
import json
import math
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from changkit.cli import format_set, parse_set, run
from changkit.cube import make_set


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def jsonl(text):
    return [json.loads(line) for line in text.splitlines()]


def test_check_all_dictator():
    code, out = call("check", "--set", "dictator:3,1", "--all")
    reports = jsonl(out)
    assert code == 0
    assert [r["name"] for r in reports] == ["level1", "subadditivity", "biased"]
    assert all(r["satisfied"] for r in reports)
    assert reports[0]["lhs"] == 0.25
    assert reports[0]["rhs"] == pytest.approx(0.5 * math.log(2), abs=1e-15)


def test_check_even_k_counterexample():
    code, out = call("check", "--set", "idx:2:0,3", "--weightk", "2")
    (rep,) = jsonl(out)
    assert code == 1
    assert rep["satisfied"] is False and rep["lhs"] == 0.25
    assert rep["rhs"] == pytest.approx(0.25 * math.log(2), abs=1e-15)


def test_check_defaults_and_flags():
    code, out = call("check", "--set", "random:5,9,2")
    assert code == 0 and len(jsonl(out)) == 3
    code, out = call("check", "--set", "random:5,9,2", "--dimension", "--weightk")
    reps = jsonl(out)
    assert code == 0
    assert reps[0]["flags"]["rho"] == "1/2" and reps[1]["flags"]["k"] == 1
    code, out = call("check", "--set", "hex:2:9", "--basis", "3,1")
    (rep,) = jsonl(out)
    assert code == 0 and rep["name"] == "basis" and rep["lhs"] == 0.25


def test_plot_data_five_points():
    code, out = call("plot-data", "--points", "5")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["x", "h", "taylor", "biased"]
    assert len(rows) == 6
    center = [float(v) for v in rows[3]]
    assert center[0] == 0.0
    assert center[1] == pytest.approx(math.log(2), abs=1e-15)
    assert center[2] == pytest.approx(math.log(2), abs=1e-15)
    assert center[3] == pytest.approx((1 + math.log(2)) / 2, abs=1e-15)


def test_plot_data_rows_respect_bounds():
    code, out = call("plot-data")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2001
    for r in rows:
        hv = float(r["h"])
        assert hv <= float(r["taylor"]) + 1e-12
        assert hv <= float(r["biased"]) + 1e-12


def test_transform():
    code, out = call("transform", "--set", "dictator:3,1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [int(r["coeff"]) for r in rows] == [4, 4, 0, 0, 0, 0, 0, 0]
    assert rows[1]["fhat"] == "1/2"
    code, out = call("transform", "--set", "idx:3:0,5,6", "--top", "2", "--json")
    recs = jsonl(out)
    assert [r["mask"] for r in recs] == [0, 7] and recs[0]["coeff"] == 3


def test_spectrum_and_weightk():
    code, out = call("spectrum", "--set", "dictator:3,1")
    (rec,) = jsonl(out)
    assert code == 0 and rec["members"] == [0, 1] and rec["span_dim"] == 1
    code, out = call("spectrum", "--set", "dictator:3,1", "--rho", "1/1")
    assert jsonl(out)[0]["members"] == []
    code, out = call("spectrum", "--set", "idx:2:0,1,2,3")
    rec = jsonl(out)[0]
    assert code == 0 and rec["degenerate"] is True
    code, out = call("weightk", "--set", "idx:2:0,3", "-k", "2")
    assert code == 1
    code, out = call("weightk", "--set", "ball:4,1", "--weightk", "3")
    assert code == 0 and jsonl(out)[0]["flags"]["proven"] is True


def test_extremal_and_sweep():
    code, out = call("extremal", "--n", "2")
    (rec,) = jsonl(out)
    assert code == 0 and rec["best_value"] == pytest.approx(1 / (2 * math.log(2)), abs=1e-9)
    code, out = call("extremal", "--n", "6", "--m", "8", "--seed", "3", "--iters", "5")
    rec = jsonl(out)[0]
    assert code == 0 and rec["mode"] == "local" and rec["seed"] == 3 and rec["size"] == 8
    code, again = call("extremal", "--n", "6", "--m", "8", "--seed", "3", "--iters", "5")
    assert again == out
    code, out = call("sweep", "--n-range", "2..5", "--family", "weight1", "--family", "ball:1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2 * 4 * 4
    code, out = call("sweep", "--n-range", "3", "--json")
    assert code == 0 and all(r["satisfied"] for r in jsonl(out))


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "--set", "hex:3:zz"],
        ["check", "--set", "idx:2:0,9"],
        ["check", "--set", "idx:2:a"],
        ["check", "--set", "bogus:1"],
        ["check", "--set", "dictator:3,1", "--dimension", "0"],
        ["check", "--set", "dictator:3,1", "--basis", "1,1,2"],
        ["check"],
        ["frobnicate"],
        ["plot-data", "--points", "1"],
        ["extremal", "--n", "5"],
        ["extremal", "--n", "3", "--objective", "nope"],
        ["sweep", "--n-range", "x"],
        ["transform", "--set", "dictator:3,1", "--top", "-1"],
        ["check", "--set", "idx:2:", "--subadd"],
    ],
)
def test_usage_errors_exit_2(argv):
    assert call(*argv)[0] == 2


@given(st.integers(1, 7).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, (1 << n) - 1)))))
def test_hex_spec_round_trip(args):
    n, members = args
    A = make_set(n, members)
    assert parse_set(format_set(A)) == A
    assert parse_set(f"idx:{n}:" + ",".join(map(str, sorted(members)))) == A


def test_output_is_deterministic():
    a = call("sweep", "--n-range", "2..6", "--family", "random:5,1", "--json")
    b = call("sweep", "--n-range", "2..6", "--family", "random:5,1", "--json")
    assert a == b


def test_console_module_entry():
    res = subprocess.run(
        [sys.executable, "-m", "changkit", "check", "--set", "idx:2:0,3", "--weightk", "2"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 1
    assert json.loads(res.stdout)["satisfied"] is False
    res = subprocess.run([sys.executable, "-m", "changkit", "check", "--set", "x"], capture_output=True)
    assert res.returncode == 2
