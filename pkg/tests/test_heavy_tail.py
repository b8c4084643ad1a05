import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from circtel.heavy_tail import (
    HeavyTailParams,
    circular_stable_bin_masses,
    circular_stable_density,
    inverse_subordinator_paths,
    joint_limit_moment,
    limit_moment_subdiffusive,
    limit_moment_superdiffusive,
    sample_heavy,
    sample_heavy_path,
    sample_inverse_subordinator,
    sample_one_sided_stable,
    sample_stable_path,
    sample_symmetric_stable,
    scaling_limit_check,
    stable_fourier_coefficient,
)
from circtel.numerics import mittag_leffler
from circtel.telegraph_core import PathSample, position

alpha_st = st.floats(0.1, 1.9).filter(lambda a: abs(a - 1.0) > 0.05)


@pytest.mark.parametrize("alpha", [0.0, 1.0, 2.0, -0.5, 2.5])
def test_alpha_validation(alpha):
    with pytest.raises(ValueError):
        HeavyTailParams(alpha)


def test_tail_constant_and_a_n():
    p = HeavyTailParams(1.5)
    C = float(mp.gamma(0.5) * abs(mp.cos(0.75 * mp.pi)) / 0.5)
    assert p.tail_constant == pytest.approx(C, rel=1e-14)
    assert p.a_n(100) == pytest.approx((100 * C) ** (1 / 1.5))
    assert p.a_n(100, "alternate") == pytest.approx((100 / C) ** (1 / 1.5))
    assert p.mean_gap == pytest.approx(3.0)
    assert HeavyTailParams(0.7).mean_gap == math.inf
    with pytest.raises(ValueError):
        HeavyTailParams(0.7).a_n(10)


def test_heavy_path_zero_events():
    # Pareto gaps are at least the scale, so a horizon below it has no events
    path = sample_heavy_path(HeavyTailParams(1.5, pareto_scale=2.0, c=0.5), 1.5, seed=1, initial=-1)
    assert path.event_times == ()
    assert position(path, 1.5) == pytest.approx(-0.75)
    assert PathSample.from_json(path.to_json()) == path


def test_sample_heavy_bound():
    x, v, n = sample_heavy(HeavyTailParams(0.7), [5.0], 1000, seed=2)
    assert np.all(np.abs(x) <= 5.0 + 1e-9)


@settings(max_examples=20, deadline=None)
@given(alpha_st, st.floats(0.1, 5.0))
def test_one_sided_self_similarity(alpha, t):
    a = sample_one_sided_stable(alpha, t, 4000, seed=1)
    b = t ** (1 / alpha) * sample_one_sided_stable(alpha, 1.0, 4000, seed=1)
    assert np.allclose(a, b, rtol=1e-10)


def test_one_sided_support_and_scalar():
    x = sample_one_sided_stable(0.5, 1.0, 10_000, seed=3)
    assert np.all(x >= 0)
    assert isinstance(sample_one_sided_stable(0.5, 1.0, seed=3), float)


def test_one_sided_self_similarity_in_law():
    a = sample_one_sided_stable(1.5, 2.0, 100_000, seed=4)
    b = 2.0 ** (1 / 1.5) * sample_one_sided_stable(1.5, 1.0, 100_000, seed=5)
    assert stats.ks_2samp(a, b).statistic < 0.02


def test_symmetric_median():
    x = sample_symmetric_stable(0.8, 1.0, 100_000, seed=6)
    assert abs(np.median(x)) < 0.03


def test_laplace_normalisation_of_subordinator():
    u = sample_one_sided_stable(0.6, 1.0, 200_000, seed=7, normalization="laplace")
    m = np.mean(np.exp(-u))
    assert m == pytest.approx(math.exp(-1.0), abs=4 * np.std(np.exp(-u)) / math.sqrt(u.size))


def test_inverse_subordinator_mittag_leffler_small():
    L = sample_inverse_subordinator(0.7, 1.0, 200_000, seed=8)
    e = np.exp(-L)
    se = e.std() / math.sqrt(e.size)
    assert abs(e.mean() - mittag_leffler(0.7, -1.0)) < 4 * se


def test_inverse_paths_monotone_in_time():
    L = inverse_subordinator_paths(0.7, [0.5, 1.0, 2.0], 500, seed=9)
    assert np.all(np.diff(L, axis=1) >= 0)
    assert np.all(L > 0)


@pytest.mark.parametrize("kind,alpha", [("one_sided", 0.6), ("symmetric", 1.5), ("inverse", 0.7)])
def test_stable_path(kind, alpha):
    path = sample_stable_path(kind, alpha, 2.0, step=0.01, seed=10)
    assert path.grid[0] == 0.0 and path.values[0] == 0.0
    assert path.grid.shape == path.values.shape
    if kind != "symmetric":
        assert np.all(np.diff(path.values) >= 0)
    assert np.isfinite(path(1.234))
    with pytest.raises(ValueError):
        sample_stable_path("other", alpha, 1.0)


def test_circular_stable_density_against_mpmath():
    t, alpha, th = 0.5, 0.7, 1.1
    ref = 1 / (2 * mp.pi) + mp.nsum(lambda k: mp.exp(-k**alpha * t) * mp.cos(k * th), [1, mp.inf]) / mp.pi
    assert circular_stable_density(th, t, alpha) == pytest.approx(float(ref), abs=1e-12)


def test_circular_stable_series_too_long():
    from circtel.numerics import ConvergenceError

    with pytest.raises(ConvergenceError):
        circular_stable_density(0.0, 1.0, 0.25)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.5, 1.9).filter(lambda a: abs(a - 1.0) > 0.05), st.floats(0.2, 3.0))
def test_circular_stable_law_is_probability(alpha, t):
    edges = np.linspace(0, 2 * math.pi, 33)
    masses = circular_stable_bin_masses(edges, t, alpha)
    assert masses.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(masses > -1e-12)


def test_bin_masses_match_density_quadrature():
    edges = np.array([0.0, 0.5, 2.0])
    m = circular_stable_bin_masses(edges, 0.8, 1.3)
    q = [integrate.quad(lambda x: circular_stable_density(x, 0.8, 1.3), a, b)[0] for a, b in zip(edges, edges[1:])]
    assert np.allclose(m, q, atol=1e-10)


def test_fourier_coefficients():
    assert stable_fourier_coefficient(0, 1.0, 0.5) == 1.0
    assert stable_fourier_coefficient(-2, 1.0, 1.5) == pytest.approx(math.exp(-2**1.5))


def test_limit_moments():
    assert limit_moment_superdiffusive(1.0, 2.0, 1.5) == pytest.approx(math.exp(-2.0))
    assert limit_moment_subdiffusive(1.0, 1.0, 0.5) == pytest.approx(float(mp.e * mp.erfc(1)), abs=1e-12)
    with pytest.raises(ValueError):
        limit_moment_superdiffusive(1.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        limit_moment_subdiffusive(1.0, 1.0, 1.5)


@settings(max_examples=40)
@given(st.floats(1.05, 1.95), st.floats(0.0, 3.0), st.floats(0.0, 3.0), st.floats(0.0, 3.0))
def test_joint_limit_moment_equal_times(alpha, q1, q2, t):
    assert joint_limit_moment(q1, q2, t, t, alpha) == pytest.approx(
        limit_moment_superdiffusive(q1 + q2, t, alpha))


def test_joint_limit_moment_needs_pairs_below_one():
    with pytest.raises(ValueError):
        joint_limit_moment(1.0, 1.0, 2.0, 1.0, 0.7)
    m, se = joint_limit_moment(1.0, 1.0, 2.0, 1.0, 0.7, (np.array([1.0, 2.0]), np.array([0.5, 1.0])))
    assert se >= 0 and 0 < m < 1


def test_scaling_limit_check_rows():
    rows = scaling_limit_check(1.5, [10, 100], 1.0, 2000, seed=11)
    assert [r["n"] for r in rows] == [10, 100]
    assert all(0 <= r["tv"] <= 1 for r in rows)
    assert rows[1]["scale"] == pytest.approx(HeavyTailParams(1.5).a_n(100))
