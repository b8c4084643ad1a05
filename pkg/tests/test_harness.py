import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from circtel.circular import wrap_law
from circtel.harness import (
    McConfig,
    VerificationReport,
    circular_tv,
    ks_distance,
    reports_from_json,
    reports_to_csv,
    reports_to_json,
    run_suite,
    suite_checks,
    two_sample_circular_tv,
)
from circtel.harness.core import CheckContext, ladder_score, mean_and_se, se_multiple
from circtel.harness.stats import bin_masses
from circtel.telegraph_core import TelegraphParams


@pytest.mark.parametrize("kw", [dict(streams=0), dict(streams=1.5), dict(samples_per_stream=0),
                                dict(bins=1), dict(master_seed=-1)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        McConfig(**kw)


def test_stream_seeds_independent_of_salt_and_id():
    cfg = McConfig(streams=3)
    a = [s.generate_state(2).tolist() for s in cfg.stream_seeds("x", 0)]
    b = [s.generate_state(2).tolist() for s in cfg.stream_seeds("x", 1)]
    c = [s.generate_state(2).tolist() for s in cfg.stream_seeds("y", 0)]
    assert len(a) == 3 and len({tuple(x) for x in a}) == 3
    assert a != b and a != c
    assert a == [s.generate_state(2).tolist() for s in cfg.stream_seeds("x", 0)]


def test_context_requests_are_fresh_and_merged_in_order():
    ctx = CheckContext("demo", McConfig(streams=4))
    first = ctx.mc(lambda rng, m: rng.random(m), 10)
    second = ctx.mc(lambda rng, m: rng.random(m), 10)
    assert first.size == 10 and not np.array_equal(first, second)
    again = CheckContext("demo", McConfig(streams=4), threads=3).mc(lambda rng, m: rng.random(m), 10)
    assert np.array_equal(first, again)
    pair = CheckContext("demo", McConfig()).mc(lambda rng, m: (rng.random(m), np.zeros(m)), 9)
    assert isinstance(pair, tuple) and pair[0].size == 9


def test_samples_per_stream_override():
    assert CheckContext("a", McConfig()).n(1000) == 1000
    assert CheckContext("a", McConfig(streams=2, samples_per_stream=5)).n(1000) == 10


def _rep(error, tol, passed):
    return VerificationReport("x.y", 1.0, 1.0 + 0.5j, "abs", error, tol, passed, 10, 7, 1.23, "numerics")


def test_passed_must_match_gate():
    with pytest.raises(ValueError):
        _rep(0.2, 0.1, True)
    with pytest.raises(ValueError):
        _rep(0.05, 0.1, False)
    assert _rep(0.1, 0.1, True).passed


def test_report_json_roundtrip_and_no_time():
    reps = [_rep(0.05, 0.1, True), _rep(math.inf, 0.1, False)]
    text = reports_to_json(reps)
    d = json.loads(text)
    assert d["schema_version"] == 1 and "wall_time" not in d["reports"][0]
    back = reports_from_json(text)
    assert reports_to_json(back) == text
    assert back[1].error == math.inf and not back[1].passed
    assert d["reports"][0]["values"]["oracle"] == [1.0, 0.5]
    assert "wall_time" in json.loads(reports_to_json(reps, with_time=True))["reports"][0]


def test_report_csv():
    rows = list(csv.DictReader(io.StringIO(reports_to_csv([_rep(0.05, 0.1, True)]))))
    assert rows[0]["check_id"] == "x.y" and rows[0]["passed"] == "True"
    assert set(rows[0]) == {"check_id", "suite", "metric", "error", "tol", "passed", "seed", "n"}


def test_suite_selection():
    assert run_suite([]) == []
    ids = [c.check_id for c in suite_checks("numerics")]
    assert ids == sorted(ids) and all(i.startswith("numerics.") for i in ids)
    with pytest.raises(ValueError):
        suite_checks("nope")
    with pytest.raises(KeyError):
        suite_checks(["not.a.check"])
    with pytest.raises(ValueError):
        run_suite("numerics", threads=0)


def test_gate_helpers():
    assert se_multiple(1.1, 1.0, 0.05) == pytest.approx(2.0)
    assert se_multiple(1.0, 1.0, 0.0) == 0.0 and se_multiple(1.1, 1.0, 0.0) == math.inf
    m, se = mean_and_se(np.array([1.0, 3.0]))
    assert m == 2.0 and se == pytest.approx(1.0)
    assert ladder_score([0.3, 0.2, 0.05], 0.1, strict=True) == pytest.approx(0.5)
    assert ladder_score([0.3, 0.31, 0.05], 0.1, strict=True) == math.inf
    assert ladder_score([0.3, 0.31, 0.05], 0.1, slack=0.02) == pytest.approx(0.5)
    assert ladder_score([0.3, 0.2, 0.2], 0.1) == pytest.approx(2.0)


def test_ks_distance_exact_small_case():
    # one sample at 0.5 against U(0,1): distance 0.5
    assert ks_distance([0.5], lambda x: np.clip(x, 0, 1)) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        ks_distance([], lambda x: x)


def test_bin_masses_sum_to_continuous_mass():
    law = wrap_law(2.0, TelegraphParams(1.0, 1.0))
    atom_mass = sum(m for _, m in law.atoms)
    assert bin_masses(law, 32).sum() + atom_mass == pytest.approx(1.0, abs=1e-6)


@given(st.integers(2, 64))
def test_two_sample_tv_identity(bins):
    a = np.linspace(0, 6, 50)
    assert two_sample_circular_tv(a, a, bins) == 0.0
    assert two_sample_circular_tv(a, a + 2 * np.pi, bins) == pytest.approx(0.0, abs=1e-12)


def test_circular_tv_penalises_missing_atoms():
    law = wrap_law(0.5, TelegraphParams(1.0, 1.0))
    rng = np.random.default_rng(0)
    theta = rng.uniform(0, 2 * np.pi, 20_000)
    assert circular_tv(theta, law, bins=32) > 0.5 * sum(m for _, m in law.atoms)
