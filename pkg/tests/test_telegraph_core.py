import json
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from circtel.telegraph_core import (
    PathSample,
    TelegraphParams,
    VelocitySign,
    char_fn,
    conditional_density,
    density_ac,
    joint_law,
    line_cdf,
    line_law,
    position,
    sample_conditional,
    sample_marginal,
    sample_path,
    velocity_at,
)

UNIT = TelegraphParams(1.0, 1.0)
GRID3 = (0.5, 1.0, 2.0)
params_st = st.builds(TelegraphParams, st.floats(0.1, 5.0), st.floats(0.1, 5.0))

# e^{-1}/2 [I0(1) + I1(1)], series oracle
DENSITY_AC_X0 = 0.33683501147167444
# e^{-1} I0(1) / 2
OPPOSITE_X0 = 0.2328798


def test_params_validation():
    for bad in ((0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (math.inf, 1.0), (math.nan, 1.0)):
        with pytest.raises(ValueError):
            TelegraphParams(*bad)


def test_velocity_sign():
    assert VelocitySign.of(-1) is VelocitySign.MINUS
    with pytest.raises(ValueError):
        VelocitySign.of(0)


def test_density_ac_frozen_value():
    ref = float(mp.exp(-1) / 2 * (mp.besseli(0, 1) + mp.besseli(1, 1)))
    assert density_ac(0.0, 1.0, UNIT) == pytest.approx(ref, rel=1e-14)
    assert density_ac(0.0, 1.0, UNIT) == pytest.approx(DENSITY_AC_X0, rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(params_st, st.floats(0.05, 4.0), st.floats(-0.999, 0.999))
def test_density_ac_against_mpmath(p, t, frac):
    ct = p.c * t
    x = frac * ct
    lam, c = p.lam, p.c
    w = lam / c * mp.sqrt(ct**2 - x**2)
    # (e^{-lam t}/2c)[lam I0(w) + d/dt I0(w)], d/dt I0(w) = I1(w) lam c t / sqrt(c^2t^2 - x^2)
    s = mp.sqrt(ct**2 - x**2)
    ref = mp.exp(-lam * t) / (2 * c) * (lam * mp.besseli(0, w) + mp.besseli(1, w) * lam * c * t / s)
    assert density_ac(x, t, p) == pytest.approx(float(ref), rel=1e-11)


def test_density_ac_vanishes_outside_support():
    assert density_ac(1.0, 1.0, UNIT) == 0.0
    assert np.all(density_ac(np.array([-3.0, 2.0]), 1.0, UNIT) == 0.0)


def test_density_ac_large_lambda_t_is_finite():
    p = TelegraphParams(500.0, 1.0)
    v = density_ac(0.0, 3.0, p)
    assert math.isfinite(v) and v > 0


@pytest.mark.parametrize("lam", GRID3)
@pytest.mark.parametrize("c", GRID3)
@pytest.mark.parametrize("t", GRID3)
def test_normalization_grid(lam, c, t):
    assert line_law(t, TelegraphParams(lam, c)).total_mass() == pytest.approx(1.0, abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(params_st, st.floats(0.1, 3.0), st.floats(-0.95, 0.95))
def test_poisson_mixture_identity(p, t, frac):
    x = frac * p.c * t
    lt = p.lam * t
    total, n = 0.0, 1
    while True:
        w = stats.poisson.pmf(n, lt)
        total += w * conditional_density(x, t, n, p)
        if stats.poisson.sf(n, lt) < 1e-12 and n > lt:
            break
        n += 1
    assert density_ac(x, t, p) == pytest.approx(total, rel=1e-6, abs=1e-10)


def test_conditional_density_one_switch_is_uniform():
    xs = np.linspace(-0.9, 0.9, 7)
    assert np.allclose(conditional_density(xs, 2.0, 1, TelegraphParams(3.0, 0.5)), 0.5)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 7, 40])
def test_conditional_density_normalised(n):
    p = TelegraphParams(1.0, 1.5)
    val, _ = integrate.quad(lambda x: conditional_density(x, 2.0, n, p), -3.0, 3.0, limit=200)
    assert val == pytest.approx(1.0, abs=1e-8)


def test_conditional_density_rejects_n0():
    with pytest.raises(ValueError):
        conditional_density(0.0, 1.0, 0, UNIT)


def test_char_fn_closed_form_and_symmetry():
    for xi in (0.3, 1.0, 3.0, 10.0):
        w = mp.sqrt(mp.mpf(xi) ** 2 - 1)
        # sin(w)/w -> 1 at the branch point
        ref = mp.exp(-1) * (mp.cos(w) + (mp.sin(w) / w if w != 0 else 1))
        assert char_fn(xi, 1.0, UNIT) == pytest.approx(float(mp.re(ref)), abs=1e-14)
        assert char_fn(-xi, 1.0, UNIT) == char_fn(xi, 1.0, UNIT)


def test_char_fn_xi3_matches_fourier_quadrature():
    xi, t = 3.0, 1.0
    law = line_law(t, UNIT)
    ac, _ = integrate.quad(lambda x: density_ac(x, t, UNIT), -1, 1, weight="cos", wvar=xi)
    ref = ac + 2 * law.atom_plus[1] * math.cos(xi)
    assert char_fn(xi, t, UNIT) == pytest.approx(ref, abs=1e-6)


def test_char_fn_branch_point_continuity():
    p = TelegraphParams(2.0, 1.0)
    xs = 2.0 + np.array([-1e-6, 0.0, 1e-6])
    v = char_fn(xs, 1.3, p)
    assert abs(v[0] + v[2] - 2 * v[1]) < 1e-8
    assert abs(v[2] - v[0]) < 1e-5


def test_joint_law_frozen_opposite_sign():
    _, d = joint_law(0.0, 1.0, -1, +1, UNIT)
    assert d == pytest.approx(float(mp.exp(-1) * mp.besseli(0, 1) / 2), rel=1e-14)
    assert d == pytest.approx(OPPOSITE_X0, abs=1e-7)


@settings(max_examples=30, deadline=None)
@given(params_st, st.floats(0.1, 3.0), st.floats(-0.99, 0.99))
def test_joint_law_marginalises(p, t, frac):
    x = frac * p.c * t
    total = 0.0
    for vi in (1, -1):
        for vf in (1, -1):
            total += 0.5 * joint_law(x, t, vf, vi, p)[1]
    assert total == pytest.approx(density_ac(x, t, p), rel=1e-10, abs=1e-14)


@pytest.mark.parametrize("vi", [1, -1])
def test_joint_law_conditional_mass(vi):
    p, t = TelegraphParams(1.3, 0.7), 1.1
    ct = p.c * t
    mass = 0.0
    for vf in (1, -1):
        atom, _ = joint_law(0.0, t, vf, vi, p)
        if atom is not None:
            assert atom[0] == pytest.approx(vi * ct)
            mass += atom[1]
        mass += integrate.quad(lambda x: joint_law(x, t, vf, vi, p)[1], -ct, ct, limit=200)[0]
    assert mass == pytest.approx(1.0, abs=1e-8)


def test_line_cdf_atoms_and_monotone():
    t = 1.0
    m = 0.5 * math.exp(-1.0)
    assert line_cdf(-1.0, t, UNIT) == pytest.approx(m)
    assert line_cdf(-1.0, t, UNIT, left=True) == 0.0
    assert line_cdf(1.0, t, UNIT) == 1.0
    assert line_cdf(1.0, t, UNIT, left=True) == pytest.approx(1.0 - m, abs=1e-10)
    xs = np.linspace(-1, 1, 51)
    assert np.all(np.diff(line_cdf(xs, t, UNIT)) >= 0)
    assert line_cdf(0.0, t, UNIT) == pytest.approx(0.5, abs=1e-12)


path_st = st.builds(
    lambda lam, c, h, seed, init: sample_path(TelegraphParams(lam, c), h, init, seed),
    st.floats(0.1, 5.0), st.floats(0.1, 3.0), st.floats(0.1, 10.0), st.integers(0, 2**32 - 1),
    st.sampled_from([1, -1]),
)


@settings(max_examples=60, deadline=None)
@given(path_st, st.floats(0.0, 1.0))
def test_position_bound_and_parity(path, frac):
    t = frac * path.horizon
    c = path.speeds[0]
    assert abs(position(path, t)) <= c * t + 1e-12
    n = sum(1 for s in path.event_times if s <= t)
    assert int(velocity_at(path, t)) == int(path.initial_sign) * (-1) ** n


@settings(max_examples=60, deadline=None)
@given(path_st)
def test_path_json_roundtrip(path):
    text = path.to_json()
    assert json.loads(text)["schema_version"] == 1
    assert PathSample.from_json(text) == path


def test_path_validation():
    with pytest.raises(ValueError):
        PathSample(1, (0.5, 0.4), 1.0)
    with pytest.raises(ValueError):
        PathSample(1, (1.5,), 1.0)
    with pytest.raises(ValueError):
        PathSample(0, (), 1.0)
    with pytest.raises(ValueError):
        position(PathSample(1, (), 1.0), 2.0)


def test_sample_path_reproducible():
    a = sample_path(UNIT, 5.0, seed=3)
    b = sample_path(UNIT, 5.0, seed=3)
    assert a == b


def test_position_speed_override():
    path = PathSample(1, (0.25,), 1.0)
    assert position(path, 1.0) == pytest.approx(0.25 - 0.75)
    assert position(path, 1.0, c=2.0) == pytest.approx(2 * (0.25 - 0.75))


def test_sample_marginal_contract():
    x, v, n = sample_marginal(TelegraphParams(2.0, 0.5), 3.0, 5000, seed=1)
    assert x.shape == v.shape == n.shape == (5000,)
    assert np.all(np.abs(x) <= 1.5 + 1e-12)
    # zero-switch draws sit at the atoms with the initial velocity
    zero = n == 0
    assert np.allclose(np.abs(x[zero]), 1.5)
    assert np.all(v[~zero] * v[~zero] == 1)


def test_sample_conditional_matches_density_small():
    x = sample_conditional(UNIT, 1.0, 3, 40_000, seed=5)
    cdf = lambda y: np.array([integrate.quad(lambda u: conditional_density(u, 1.0, 3, UNIT), -1, v)[0]
                              for v in np.atleast_1d(y)])
    grid = np.linspace(-0.9, 0.9, 9)
    ecdf = np.searchsorted(np.sort(x), grid) / x.size
    assert np.max(np.abs(ecdf - cdf(grid))) < 0.02
