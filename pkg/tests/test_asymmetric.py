import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate

from circtel.asymmetric import (
    AsymmetricParams,
    KacLimitParams,
    asym_atoms,
    asym_density,
    asym_generator_apply,
    asym_pde_residual,
    asym_wrap,
    sample_asym,
    sample_asym_path,
)
from circtel.semigroup import AnalyticPair, generator_apply
from circtel.telegraph_core import PathSample, TelegraphParams, density_ac

REF = AsymmetricParams(1.0, 2.0, 1.5, 0.5)
pos = st.floats(0.2, 3.0)


def _mass(t, p):
    atoms = sum(m for _, m in asym_atoms(t, p))
    lo, hi = -p.c2 * t, p.c1 * t
    m, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
    ac = integrate.quad(lambda u: asym_density(m + h * math.sin(u), t, p) * h * math.cos(u),
                        -math.pi / 2, math.pi / 2, limit=400, epsabs=1e-13)[0]
    return atoms + ac


def test_params_validation():
    with pytest.raises(ValueError):
        AsymmetricParams(1.0, 0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        KacLimitParams(1.5, 1.0, 1.0)


@settings(max_examples=40, deadline=None)
@given(pos, pos, st.floats(0.1, 3.0), st.floats(-0.99, 0.99))
def test_symmetric_reduction(lam, c, t, frac):
    p = TelegraphParams(lam, c)
    a = AsymmetricParams.symmetric(p)
    assert a.is_symmetric
    x = frac * c * t
    assert asym_density(x, t, a) == pytest.approx(density_ac(x, t, p), rel=1e-10, abs=1e-12)
    (l1, m1), (l2, m2) = asym_atoms(t, a)
    assert (l1, l2) == pytest.approx((c * t, -c * t))
    assert m1 == m2 == pytest.approx(0.5 * math.exp(-lam * t))


def test_normalization_reference():
    assert _mass(1.0, REF) == pytest.approx(1.0, abs=1e-6)


@settings(max_examples=15, deadline=None)
@given(pos, pos, pos, pos, st.floats(0.2, 2.0))
def test_normalization_random(c1, c2, l1, l2, t):
    assert _mass(t, AsymmetricParams(c1, c2, l1, l2)) == pytest.approx(1.0, abs=1e-6)


def test_support_bound():
    t = 1.0
    assert asym_density(REF.c1 * t + 1e-3, t, REF) == 0.0
    assert asym_density(-REF.c2 * t - 1e-3, t, REF) == 0.0
    assert asym_density(0.0, t, REF) > 0


def test_atom_pairing():
    (lp, mp_), (lm, mm) = asym_atoms(1.0, REF)
    assert lp == 1.0 and mp_ == pytest.approx(0.5 * math.exp(-1.5))
    assert mp_ == pytest.approx(0.11157, abs=1e-5)
    assert lm == -2.0 and mm == pytest.approx(0.5 * math.exp(-0.5))
    (_, swapped), _ = asym_atoms(1.0, REF, pairing="alternate")
    assert swapped == pytest.approx(mm)
    with pytest.raises(ValueError):
        asym_atoms(1.0, REF, pairing="other")


def test_asym_wrap_mass():
    law = asym_wrap(2.0, REF)
    assert law.total_mass() == pytest.approx(1.0, abs=1e-6)


def test_generator_reduces_to_symmetric():
    p = TelegraphParams(1.3, 0.8)
    f = AnalyticPair((0, 1, 0.5j), (1, -1, 0.2))
    for v in (1, -1):
        assert asym_generator_apply(f, 0.3 + 0.2j, v, AsymmetricParams.symmetric(p)) == pytest.approx(
            generator_apply(f, 0.3 + 0.2j, v, p))
    # the alternate transport sign breaks the reduction in the minus state
    a = asym_generator_apply(f, 0.3 + 0.2j, -1, AsymmetricParams.symmetric(p), sign="alternate")
    assert abs(a - generator_apply(f, 0.3 + 0.2j, -1, p)) > 1e-3


def test_pde_residual_second_order():
    xs = np.array([0.0, -0.5, 0.4])
    r1 = np.abs(asym_pde_residual(1.0, xs, REF, h=2e-3)).max()
    r2 = np.abs(asym_pde_residual(1.0, xs, REF, h=1e-3)).max()
    assert r2 < 1e-3
    assert math.log2(r1 / r2) == pytest.approx(2.0, abs=0.3)


def test_pde_residual_guard():
    with pytest.raises(ValueError):
        asym_pde_residual(1.0, [REF.c1 - 1e-4], REF, h=1e-3)


@settings(max_examples=50)
@given(st.floats(0.1, 5.0), st.floats(0.1, 3.0), st.floats(-2.0, 2.0), st.floats(1.0, 1e4))
def test_kac_family_has_constant_drift(nu2, sigma2, delta, s):
    kac = KacLimitParams(nu2, math.sqrt(nu2) * sigma2, sigma2, delta)
    # small scales with a negative drift give c1 <= 0, which the params reject
    assume(kac.sigma1 * math.sqrt(s * nu2) + delta * (1 + nu2) > 0)
    p = kac.family(s)
    drift = (p.lam2 * p.c1 - p.lam1 * p.c2) / (p.lam1 + p.lam2)
    assert drift == pytest.approx(delta, abs=1e-9 * max(1.0, p.c1))


def test_sample_asym_path_roundtrip_and_speeds():
    path = sample_asym_path(REF, 5.0, initial=1, seed=2)
    assert path.speeds == (1.0, 2.0)
    assert PathSample.from_json(path.to_json()) == path


def test_sample_asym_support():
    x, v, n = sample_asym(REF, [1.0, 2.0], 2000, seed=3)
    assert x.shape == (2000, 2)
    assert np.all(x[:, 0] <= REF.c1 + 1e-12) and np.all(x[:, 0] >= -REF.c2 - 1e-12)
