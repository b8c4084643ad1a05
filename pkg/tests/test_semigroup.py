import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circtel.semigroup import (
    AnalyticPair,
    complex_telegraph_residual,
    generator_apply,
    generator_pair,
    heat_residual,
    integral_equation_residual,
    laplace_transform_semigroup,
    resolvent_apply,
    resolvent_pair,
    semigroup_apply,
    semigroup_quadrature,
    series_coefficients,
    transition_pair,
)
from circtel.telegraph_core import TelegraphParams, char_fn

UNIT = TelegraphParams(1.0, 1.0)
cplx = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)
pair_st = st.builds(lambda a, b: AnalyticPair(tuple(a), tuple(b)),
                    st.lists(cplx, min_size=1, max_size=6), st.lists(cplx, min_size=1, max_size=6))
params_st = st.builds(TelegraphParams, st.floats(0.2, 3.0), st.floats(0.2, 3.0))
disc = st.builds(lambda r, a: r * cmath.exp(1j * a), st.floats(0.0, 0.95), st.floats(0.0, 2 * math.pi))


@settings(max_examples=80)
@given(pair_st)
def test_pair_json_roundtrip(f):
    assert AnalyticPair.from_json(f.to_json()) == f


def test_pair_padding_and_eval():
    f = AnalyticPair((1, 2), (0, 0, 3))
    assert f.truncation == 2
    assert f(0.5, 1) == pytest.approx(2.0)
    assert f(0.5, -1) == pytest.approx(0.75)
    assert f.derivative(0.5, -1, 2) == pytest.approx(6.0)


def test_semigroup_at_zero_time_is_identity():
    f = AnalyticPair((1, 2j, 0.5), (0.3, 0, 1))
    for v in (1, -1):
        assert semigroup_apply(f, 0.4 + 0.2j, v, 0.0, UNIT) == pytest.approx(f(0.4 + 0.2j, v))


def test_series_kernel_real_axis_matches_char_fn():
    # averaging over the start and summing end states gives the CF at xi = k
    K, t = 5, 1.3
    sp = series_coefficients(K, t, +1, UNIT)
    sm = series_coefficients(K, t, -1, UNIT)
    avg = 0.5 * (sp.d_k + sp.e_k + sm.d_k + sm.e_k)
    assert np.allclose(avg, char_fn(np.arange(K + 1.0), t, UNIT), atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(pair_st, params_st, st.floats(0.0, 3.0), disc, st.sampled_from([1, -1]))
def test_contraction(f, p, t, z, v):
    assert abs(semigroup_apply(f, z, v, t, p)) <= f.sup_bound() + 1e-9


@settings(max_examples=40, deadline=None)
@given(pair_st, params_st, st.floats(0.0, 2.0), st.floats(0.0, 2.0))
def test_semigroup_law(f, p, t, s):
    a = transition_pair(transition_pair(f, t, p), s, p)
    b = transition_pair(f, t + s, p)
    assert np.allclose(a.coeffs_plus, b.coeffs_plus, atol=1e-10)
    assert np.allclose(a.coeffs_minus, b.coeffs_minus, atol=1e-10)


def test_series_vs_quadrature_z3():
    f = AnalyticPair.same([0, 0, 0, 1])
    avg = 0.5 * (semigroup_apply(f, 0.3, 1, 1.0, UNIT) + semigroup_apply(f, 0.3, -1, 1.0, UNIT))
    assert avg == pytest.approx(semigroup_quadrature(f, 0.3, 1.0, UNIT), abs=1e-6)


@pytest.mark.parametrize("v", [1, -1])
def test_series_vs_joint_quadrature_per_sign(v):
    f = AnalyticPair((0.5, 1, 0, 2j), (0, -1, 1, 0))
    z = 0.4 * cmath.exp(0.3j)
    assert semigroup_apply(f, z, v, 0.8, UNIT) == pytest.approx(
        semigroup_quadrature(f, z, 0.8, UNIT, v=v), abs=1e-6)


def test_alternate_kernel_breaks_per_sign_agreement():
    f = AnalyticPair.same([0, 0, 1])
    z = 0.5
    ref = semigroup_quadrature(f, z, 1.0, UNIT, v=1)
    assert abs(semigroup_apply(f, z, 1, 1.0, UNIT, form="alternate") - ref) > 1e-3


def test_generator_richardson_first_order():
    f = AnalyticPair((0, 1, 0.5j), (1, 0, 0.25))
    z, v = 0.4 + 0.1j, 1
    g = generator_apply(f, z, v, UNIT)
    errs = [abs((semigroup_apply(f, z, v, h, UNIT) - f(z, v)) / h - g) for h in (1e-3, 1e-4)]
    assert errs[1] < errs[0]
    assert math.log10(errs[0] / errs[1]) == pytest.approx(1.0, abs=0.1)


def test_resolvent_vs_laplace_transform():
    f = AnalyticPair.same([0, 0, 1])
    for v in (1, -1):
        r = resolvent_apply(f, 0.4, v, 2.0, UNIT)
        assert r == pytest.approx(laplace_transform_semigroup(f, 0.4, v, 2.0, UNIT), abs=1e-4)


@settings(max_examples=30, deadline=None)
@given(pair_st, params_st, st.floats(0.1, 5.0))
def test_resolvent_identity(f, p, mu):
    r = resolvent_pair(f, mu, p)
    g = generator_pair(r, p)
    lhs_p = mu * np.array(r.coeffs_plus) - np.array(g.coeffs_plus)
    lhs_m = mu * np.array(r.coeffs_minus) - np.array(g.coeffs_minus)
    assert np.allclose(lhs_p, f.coeffs_plus, atol=1e-10)
    assert np.allclose(lhs_m, f.coeffs_minus, atol=1e-10)


def test_alternate_resolvent_fails_on_constants():
    one = AnalyticPair.same([1])
    mu = 2.0
    assert resolvent_apply(one, 0.0, 1, mu, UNIT) == pytest.approx(1 / mu)
    assert abs(resolvent_apply(one, 0.0, 1, mu, UNIT, form="alternate") - 1 / mu) > 0.1


def test_integral_equation_residual():
    f = AnalyticPair.same([0, 1])
    assert integral_equation_residual(f, 0.5, 1, 0.5, UNIT) < 1e-6
    assert integral_equation_residual(f, 0.5, -1, 0.5, UNIT) < 1e-6


def test_telegraph_equation_second_order():
    f = AnalyticPair.same([0, 0, 1])
    r = [complex_telegraph_residual(f, 0.5, 1.0, UNIT, h_t=h) for h in (2e-3, 1e-3)]
    assert r[1] < 1e-4
    assert math.log2(r[0] / r[1]) == pytest.approx(2.0, abs=0.2)


def test_alternate_telegraph_equation_does_not_vanish():
    f = AnalyticPair.same([0, 0, 1])
    assert complex_telegraph_residual(f, 0.5, 1.0, UNIT, h_t=1e-4, equation="alternate") > 1e-2


def test_heat_limit_under_kac_scaling():
    f = AnalyticPair.same([0, 1, 1])
    lam = 1e3
    res, scale = heat_residual(f, 0.5, 1.0, TelegraphParams(lam, math.sqrt(lam)))
    assert res < 1e-2 * scale


def test_inside_disc_required():
    f = AnalyticPair.same([0, 1])
    with pytest.raises(ValueError):
        semigroup_apply(f, 1.0, 1, 1.0, UNIT)
