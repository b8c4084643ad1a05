import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from circtel.circular import wrap_law
from circtel.cli import atoms_path, load_paths, main
from circtel.semigroup import AnalyticPair
from circtel.telegraph_core import PathSample, TelegraphParams, line_cdf


def _run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_json_count_and_roundtrip(tmp_path):
    out = tmp_path / "p.json"
    assert main(["simulate", "--T", "10", "--n", "100", "--seed", "3", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["schema_version"] == 1 and d["seed"] == 3
    paths = load_paths(out.read_text())
    assert len(paths) == 100
    assert [PathSample.from_json(p.to_json()) for p in paths] == paths


def test_simulate_reproducible_and_env_seed(tmp_path, monkeypatch, capsys):
    a = _run(["simulate", "--n", "3", "--seed", "5"], capsys)[1]
    b = _run(["simulate", "--n", "3", "--seed", "5"], capsys)[1]
    assert a == b
    monkeypatch.setenv("CIRCTEL_SEED", "5")
    assert _run(["simulate", "--n", "3"], capsys)[1] == a


def test_simulate_csv(capsys):
    code, out, _ = _run(["simulate", "--n", "2", "--T", "5", "--format", "csv", "--seed", "1"], capsys)
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0 and rows[0]["k"] == "0" and {r["path"] for r in rows} == {"0", "1"}
    times = [float(r["time"]) for r in rows if r["path"] == "0"]
    assert times == sorted(times) and times[-1] < 5


@pytest.mark.parametrize("extra", [["--variant", "heavy", "--alpha", "0.7"],
                                   ["--variant", "asym", "--c1", "1", "--c2", "2",
                                    "--lambda1", "1", "--lambda2", "3"]])
def test_simulate_variants(extra, capsys):
    code, out, _ = _run(["simulate", "--n", "4", "--T", "3", "--seed", "2"] + extra, capsys)
    assert code == 0 and len(load_paths(out)) == 4


def test_law_line_and_sidecar(tmp_path):
    out = tmp_path / "line.csv"
    assert main(["law", "--variant", "line", "--t", "1.5", "--grid", "11", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    x = np.array([float(r["x"]) for r in rows])
    cdf = np.array([float(r["cdf"]) for r in rows])
    assert np.allclose(cdf, line_cdf(x, 1.5, TelegraphParams(1.0, 1.0)))
    side = json.loads(atoms_path(out).read_text())
    assert atoms_path(out).name == "line.atoms.json"
    assert side["atoms"][0][1] == pytest.approx(0.5 * math.exp(-1.5))


def test_law_wrapped_json(capsys):
    code, out, _ = _run(["law", "--t", "2", "--grid", "16", "--format", "json"], capsys)
    d = json.loads(out)
    law = wrap_law(2.0, TelegraphParams(1.0, 1.0))
    assert code == 0
    assert np.allclose(d["columns"]["density"], law.density(np.array(d["columns"]["theta"])), atol=1e-15)


def test_law_oscillator_stdout_atoms_on_stderr(capsys):
    code, out, err = _run(["law", "--variant", "oscillator", "--t", "2", "--grid", "8"], capsys)
    assert code == 0 and len(out.strip().splitlines()) == 9
    assert set(json.loads(err)["atoms"]) == {"Z1", "Z2"}


def test_operator_constant_pair(tmp_path, capsys):
    f = tmp_path / "one.json"
    f.write_text(AnalyticPair((1.0,), (1.0,)).to_json())
    code, out, _ = _run(["operator", "--variant", "resolvent", "--pair", str(f), "--mu", "2",
                         "--z", "0.3+0.2j"], capsys)
    assert code == 0
    assert json.loads(out)["value"]["result"] == pytest.approx([0.5, 0.0])
    code, out, _ = _run(["operator", "--variant", "generator", "--pair", str(f), "--z", "0.5"], capsys)
    assert json.loads(out)["value"]["result"] == pytest.approx([0.0, 0.0], abs=1e-15)
    assert _run(["operator", "--pair", str(f), "--z", "2"], capsys)[0] == 2


def test_operator_bad_pair(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text("{}")
    code, _, err = _run(["operator", "--pair", str(f)], capsys)
    assert code == 2 and "AnalyticPair" in err


def test_limits_kac_descends(capsys):
    code, out, _ = _run(["limits", "--variant", "kac", "--t", "1", "--format", "json"], capsys)
    tv = [r["tv"] for r in json.loads(out)["rows"]]
    assert code == 0 and tv == sorted(tv, reverse=True)


def test_moments(capsys):
    code, out, _ = _run(["moments", "--q", "1", "--t", "1", "--q2", "1", "--t2", "2"], capsys)
    d = json.loads(out)
    assert code == 0 and "joint_moment" in d and len(d["moment"]) == 2
    code, out, _ = _run(["moments", "--variant", "heavy", "--alpha", "1.5", "--q", "1", "--t", "2"], capsys)
    assert json.loads(out)["moment"] == pytest.approx(math.exp(-2.0))


@pytest.mark.parametrize("argv,needle", [
    (["law", "--lambda", "0"], "lambda > 0"),
    (["law", "--c", "-1"], "c > 0"),
    (["simulate", "--variant", "heavy", "--alpha", "1"], "alpha"),
    (["simulate", "--n", "0"], "n >= 1"),
    (["simulate", "--variant", "asym"], "c1 > 0"),
    (["verify", "--suite", "nope"], "suite"),
    (["moments", "--variant", "heavy", "--alpha", "2.5"], "alpha"),
])
def test_usage_errors(argv, needle, capsys):
    code, _, err = _run(argv, capsys)
    assert code == 2 and needle in err and "invalid input" in err


def test_verify_writes_reports(tmp_path, capsys):
    prefix = tmp_path / "rep"
    code, out, _ = _run(["verify", "--suite", "numerics", "--out", str(prefix)], capsys)
    assert code == 0 and "checks passed" in out
    d = json.loads((tmp_path / "rep.json").read_text())
    assert all(r["passed"] for r in d["reports"])
    assert (tmp_path / "rep.csv").read_text().startswith("check_id,")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "circtel", "law", "--lambda", "-1"],
                       capture_output=True, text=True)
    assert r.returncode == 2 and "lambda > 0" in r.stderr
