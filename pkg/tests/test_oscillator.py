import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circtel.harness import oracles
from circtel.oscillator import (
    em_strong_errors,
    simulate_diffusion,
    z1_cdf,
    z1_law,
    z2_cdf,
    z2_law,
)
from circtel.telegraph_core import TelegraphParams, line_cdf

UNIT = TelegraphParams(1.0, 1.0)
params_st = st.builds(TelegraphParams, st.floats(0.2, 3.0), st.floats(0.2, 3.0))


def test_z1_cdf_small_time_closed_form():
    # ct < pi: cos is monotone on [0, ct], so P(cos X <= x) = 2 P(X >= arccos x)
    t, x = 1.0, 0.8
    ref = 2.0 * (1.0 - line_cdf(math.acos(x), t, UNIT, left=True))
    assert z1_cdf(x, t, UNIT) == pytest.approx(ref, abs=1e-12)


@settings(max_examples=12, deadline=None)
@given(params_st, st.floats(0.2, 3.0), st.floats(-0.97, 0.97))
def test_cdfs_match_pushforward_oracle(p, t, x):
    assert z1_cdf(x, t, p) == pytest.approx(oracles.pushforward_cdf(np.cos, x, t, p), abs=1e-6)
    assert z2_cdf(x, t, p) == pytest.approx(oracles.pushforward_cdf(np.sin, x, t, p), abs=1e-6)


@pytest.mark.parametrize("lam,c,t", [(1.0, 1.0, 2.0), (0.5, 2.0, 3.0), (2.0, 1.0, 0.7)])
def test_laws_integrate_to_one(lam, c, t):
    p = TelegraphParams(lam, c)
    assert z1_law(t, p).total_mass() == pytest.approx(1.0, abs=1e-8)
    assert z2_law(t, p).total_mass() == pytest.approx(1.0, abs=1e-8)


def test_atom_jumps():
    t = 2.0
    law = z1_law(t, UNIT)
    (loc, mass), = law.atoms
    assert loc == pytest.approx(math.cos(2.0))
    assert mass == pytest.approx(math.exp(-2.0))
    jump = z1_cdf(loc, t, UNIT) - z1_cdf(loc - 1e-10, t, UNIT)
    assert jump == pytest.approx(mass, abs=1e-6)
    atoms2 = dict(z2_law(t, UNIT).atoms)
    assert sorted(atoms2) == pytest.approx([-math.sin(2.0), math.sin(2.0)])
    lo = -math.sin(2.0)
    assert z2_cdf(lo, t, UNIT) - z2_cdf(lo - 1e-10, t, UNIT) == pytest.approx(0.5 * math.exp(-2.0), abs=1e-6)


def test_cdf_edges_and_monotone():
    assert z1_cdf(1.0, 2.0, UNIT) == 1.0
    xs = np.linspace(-1, 0.999, 60)
    vals = [z2_cdf(float(x), 2.0, UNIT) for x in xs]
    assert np.all(np.diff(vals) >= -1e-12)
    with pytest.raises(ValueError):
        z1_cdf(1.5, 1.0, UNIT)


def test_density_vanishes_outside_range():
    law = z1_law(2.0, UNIT)
    # cos X(2) >= cos 2 for |X| <= 2
    assert law.density(-0.9) == 0.0
    assert law.density(0.3) > 0


def test_simulate_diffusion_reference_and_csv():
    path = simulate_diffusion(1.0, 1e-3, seed=4)
    assert path.time[-1] == pytest.approx(1.0)
    assert np.allclose(path.y_exact ** 2 + path.v_exact ** 2, 1.0)
    assert np.max(np.hypot(path.y_em - path.y_exact, path.v_em - path.v_exact)) < 0.2
    text = path.to_csv()
    assert text.splitlines()[0] == "time,y_em,v_em,y_exact,v_exact"
    assert len(text.splitlines()) == path.time.size + 1
    s = path.state(0)
    assert (s.y, s.v, s.time) == (0.0, 1.0, 0.0)


def test_simulate_diffusion_with_supplied_increments():
    dB = np.full(10, 0.1)
    path = simulate_diffusion(1.0, 0.1, increments=dB)
    assert path.y_exact[-1] == pytest.approx(math.sin(1.0))


def test_em_strong_errors_decrease():
    errs = em_strong_errors(1.0, (1e-3, 1e-2), 50, seed=1)
    assert errs[1e-3][0] < errs[1e-2][0]
