import cmath
import math

import numpy as np

from ...numerics import (
    bessel_i0,
    bessel_i1,
    mittag_leffler,
    trig_pair,
    wrapped_normal_density,
)
from .. import oracles
from ..core import register

S = "numerics"


def _bessel_check(ctx, order, x, frozen):
    fn = bessel_i0 if order == 0 else bessel_i1
    got = float(fn(x))
    ref = oracles.bessel_series(x, order)
    err = max(abs(got - ref), abs(got - frozen)) / abs(frozen)
    return ctx.report(got, [ref, frozen], "rel", err, 1e-14)


@register("numerics.bessel_i0.at_1", S, derived="bessel_i0:1")
def i0_at_1(ctx):
    """I0(1) against the power-series oracle."""
    return _bessel_check(ctx, 0, 1.0, 1.2660658777520084)


@register("numerics.bessel_i0.at_10", S, derived="bessel_i0:10")
def i0_at_10(ctx):
    """I0(10) against the power-series oracle."""
    return _bessel_check(ctx, 0, 10.0, 2815.716628466254)


@register("numerics.bessel_i1.at_1", S, derived="bessel_i1:1")
def i1_at_1(ctx):
    """I1(1) against the power-series oracle."""
    return _bessel_check(ctx, 1, 1.0, 0.5651591039924850)


@register("numerics.bessel_i1.at_2", S, derived="bessel_i1:2")
def i1_at_2(ctx):
    """I1(2) against the power-series oracle."""
    return _bessel_check(ctx, 1, 2.0, 1.5906368546373291)


@register("numerics.mittag_leffler.erfc_identity", S, derived="mittag_leffler:erfc")
def ml_half(ctx):
    """E_{1/2}(-1) = e erfc(1) with erfc by quadrature."""
    got = float(mittag_leffler(0.5, -1.0))
    ref = math.e * oracles.erfc_quadrature(1.0)
    return ctx.report(got, ref, "abs", abs(got - ref), 1e-10)


@register("numerics.trig_pair.complex_oracle", S, derived="trig_pair:complex")
def trig_complex(ctx):
    """Hyperbolic branch equals cos(i t) and sin(i t)/i from complex arithmetic."""
    got = trig_pair(-1.0, 1.0)
    ref = (cmath.cos(1j).real, (cmath.sin(1j) / 1j).real)
    err = max(abs(got[0] - ref[0]), abs(got[1] - ref[1]))
    return ctx.report(list(got), list(ref), "abs", err, 1e-14)


@register("numerics.wrapped_normal.at_zero", S, derived="wrapped_normal_density:zero")
def wn_zero(ctx):
    """Image and Fourier series agree at theta=0, t=0.5."""
    a = wrapped_normal_density(0.0, 0.5, method="images")
    b = wrapped_normal_density(0.0, 0.5, method="fourier")
    return ctx.report(a, b, "abs", abs(a - b), 1e-12)


@register("numerics.bessel.monotone", S, invariant="numerics:bessel-monotone")
def bessel_monotone(ctx):
    """I0 >= 1, I1 >= 0 and both increasing on [0, 50]."""
    x = np.linspace(0.0, 50.0, 5001)
    i0, i1 = np.asarray(bessel_i0(x)), np.asarray(bessel_i1(x))
    bad = int(np.sum(i0 < 1)) + int(np.sum(i1 < 0)) + int(np.sum(np.diff(i0) <= 0)) + int(
        np.sum(np.diff(i1) <= 0))
    return ctx.report(bad, 0, "count", bad, 0)


@register("numerics.trig_pair.continuity", S, invariant="numerics:trig-continuity")
def trig_continuity(ctx):
    """trig_pair continuous across omega^2 = 0."""
    errs = []
    for t in (0.5, 1.0, 3.0):
        base = np.array(trig_pair(0.0, t))
        for eps in (1e-4, 1e-8):
            for s in (1, -1):
                errs.append((eps, float(np.abs(np.array(trig_pair(s * eps, t)) - base).max())))
    # the gap must be O(eps): scale-free score
    score = max(e / (10 * eps) for eps, e in errs)
    return ctx.report(errs, 0, "gap/(10 eps)", score, 1.0)


@register("numerics.wrapped_normal.representations", S, invariant="numerics:wn-agree")
def wn_agree(ctx):
    """Images and Fourier series agree within 1e-10 for t in {0.1, 1, 10}."""
    th = np.linspace(0.0, 2 * math.pi, 257)
    err = max(float(np.abs(wrapped_normal_density(th, t, method="images")
                           - wrapped_normal_density(th, t, method="fourier")).max())
              for t in (0.1, 1.0, 10.0))
    return ctx.report(err, 0, "abs", err, 1e-10)


@register("numerics.mittag_leffler.exponential", S, invariant="numerics:ml-exp")
def ml_exp(ctx):
    """E_1(x) = exp(x) on [-5, 0]."""
    x = np.linspace(-5.0, 0.0, 51)
    got = np.asarray(mittag_leffler(1.0, x))
    err = float(np.abs(got - np.exp(x)).max())
    return ctx.report(err, 0, "abs", err, 1e-12)
