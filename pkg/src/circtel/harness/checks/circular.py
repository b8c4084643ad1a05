import math

import numpy as np
from scipy import integrate, stats

from ...circular import (
    TWO_PI,
    cbm_joint_moment,
    circular_moment,
    covariance,
    fourier_coefficient,
    joint_moment,
    reconstruct_probability,
    sample_angles,
    wrap_conditional,
    wrap_law,
    wrapped_tv_to_normal,
)
from ...numerics import trig_pair, wrapped_normal_density
from ...telegraph_core import TelegraphParams, char_fn, sample_conditional, sample_marginal
from ..core import DEFAULT_SE_GATE, ks_null_sd, ladder_score, mean_and_se, register, se_multiple
from ..stats import binned_tv, circular_tv, ks_distance

S = "circular"
UNIT = TelegraphParams(1.0, 1.0)
MC_BINS = 32  # binned-TV noise floor at 1e5 draws is ~0.007 with 32 bins, ~0.02 with 256


def paired_positions(params, t_early, t_late, size, rng):
    """``(X(t_early), X(t_late))`` along common paths by Markov chaining on ``V``."""
    x1, v1, _ = sample_marginal(params, t_early, size, rng)
    x2 = x1.copy()
    for s in (1, -1):
        idx = np.flatnonzero(v1 == s)
        dx, _, _ = sample_marginal(params, t_late - t_early, idx.size, rng, initial=s)
        x2[idx] += dx
    return x1, x2


@register("circular.wrap_law.multi_winding_mass", S, derived="wrap_law:mass")
def multi_winding(ctx):
    """Wrapped law at (lambda, c, t) = (1, 3, 4) has total mass 1."""
    m = wrap_law(4.0, TelegraphParams(1.0, 3.0)).total_mass()
    return ctx.report(m, 1.0, "abs", abs(m - 1.0), 1e-8)


@register("circular.wrap_conditional.order_stats", S, derived="wrap_conditional:n2")
def wrap_conditional_mc(ctx):
    """Wrapped density given N = 2 at theta = 0 (ct = 7) vs simulated order statistics."""
    p = TelegraphParams(1.0, 1.0)
    dens = wrap_conditional(2, 7.0, p)
    delta = 0.05
    window = integrate.quad(dens, 0.0, delta)[0] + integrate.quad(dens, TWO_PI - delta, TWO_PI)[0]
    x = ctx.mc(lambda rng, m: sample_conditional(p, 7.0, 2, m, rng), ctx.n(1_000_000))
    th = np.mod(x, TWO_PI)
    p_hat = float(np.mean((th < delta) | (th > TWO_PI - delta)))
    se = math.sqrt(window * (1 - window) / x.size)
    return ctx.report(window / (2 * delta), p_hat / (2 * delta), "s.e. multiple",
                      se_multiple(p_hat, window, se), DEFAULT_SE_GATE, x.size)


@register("circular.circular_moment.trig_pair", S, derived="circular_moment:alpha2")
def moment_alpha2(ctx):
    """Moment of order 2 equals e^{-1}(cos sqrt3 + sin(sqrt3)/sqrt3) via trig_pair(3, 1)."""
    co, si = trig_pair(3.0, 1.0)
    ref = math.exp(-1.0) * (co + si)
    got = circular_moment(2.0, 1.0, UNIT)
    direct = math.exp(-1.0) * (math.cos(math.sqrt(3)) + math.sin(math.sqrt(3)) / math.sqrt(3))
    return ctx.report(got, [ref, direct], "abs", max(abs(got - ref), abs(got - direct)), 1e-14)


@register("circular.circular_moment.mc", S, derived="circular_moment:mc")
def moment_mc(ctx):
    """Mean of cos(2 X(1)) over 1e6 paths within 4 s.e."""
    x = ctx.mc(lambda rng, m: sample_marginal(UNIT, 1.0, m, rng)[0], ctx.n(1_000_000))
    m, se = mean_and_se(np.cos(2.0 * x))
    ref = circular_moment(2.0, 1.0, UNIT)
    return ctx.report(ref, m, "s.e. multiple", se_multiple(m, ref, se), DEFAULT_SE_GATE, x.size)


@register("circular.joint_moment.mc", S, derived="joint_moment:mc")
def joint_mc(ctx):
    """E cos(X(2) + X(1)) over paired paths within 4 s.e. of the exact joint moment."""
    x1, x2 = ctx.mc(lambda rng, m: paired_positions(UNIT, 1.0, 2.0, m, rng), ctx.n(1_000_000))
    m, se = mean_and_se(np.cos(x1 + x2))
    exact = joint_moment(1.0, 1.0, 2.0, 1.0, UNIT)
    prod = joint_moment(1.0, 1.0, 2.0, 1.0, UNIT, form="product")
    return ctx.report(exact, m, "s.e. multiple", se_multiple(m, exact, se), DEFAULT_SE_GATE,
                      x1.size, note=f"product form {prod:.6f} is {se_multiple(m, prod, se):.0f} s.e. off")


@register("circular.covariance.mc", S, derived="covariance:mc")
def covariance_mc(ctx):
    """Covariance of Z(2), Z(1) vs paired-path MC (delta-method s.e.)."""
    x1, x2 = ctx.mc(lambda rng, m: paired_positions(UNIT, 1.0, 2.0, m, rng), ctx.n(1_000_000))
    c1, c2, j = np.cos(x1), np.cos(x2), np.cos(x1 + x2)
    m1, m2 = c1.mean(), c2.mean()
    est = j.mean() - m1 * m2
    infl = j - m2 * c1 - m1 * c2
    se = float(infl.std(ddof=1)) / math.sqrt(x1.size)
    ref = covariance(2.0, 1.0, UNIT)
    return ctx.report(ref, est, "s.e. multiple", se_multiple(est, ref, se), DEFAULT_SE_GATE, x1.size,
                      note=f"product form {covariance(2.0, 1.0, UNIT, form='product'):.6f}")


@register("circular.fourier_coefficient.quadrature", S, derived="fourier_coefficient:k3")
def fourier_quad(ctx):
    """Fourier coefficient k = 3 vs atoms plus quadrature of the wrapped density."""
    law = wrap_law(1.0, UNIT)
    k = 3
    atoms = sum(m * complex(math.cos(k * a), math.sin(k * a)) for a, m in law.atoms)
    pts = sorted(a for a, _ in law.atoms)
    re = integrate.quad(lambda th: law.density(th) * math.cos(k * th), 0, TWO_PI, points=pts,
                        limit=400, epsabs=1e-13)[0]
    im = integrate.quad(lambda th: law.density(th) * math.sin(k * th), 0, TWO_PI, points=pts,
                        limit=400, epsabs=1e-13)[0]
    ref = atoms + complex(re, im)
    got = fourier_coefficient(k, 1.0, UNIT).value
    return ctx.report(got, ref, "abs", abs(got - ref), 1e-6)


@register("circular.reconstruct.wrap_law_oracle", S, derived="reconstruct_probability:arc")
def reconstruct_arc(ctx):
    """Abel-summed Fourier estimate of P([2.5, 3.5]) vs wrap_law at r = 0.999, K = 2000."""
    got = reconstruct_probability(2.5, 3.5, 0.999, 2000, 1.0, UNIT)
    ref = wrap_law(1.0, UNIT).interval_probability(2.5, 3.5)
    return ctx.report(got, ref, "abs", abs(got - ref), 5e-3)


@register("circular.reconstruct.cauchy", S, derived="reconstruct_probability:cauchy")
def reconstruct_cauchy(ctx):
    """Estimates at r = 0.9, 0.99, 0.999 have shrinking increments, the last below 5e-3."""
    vals = [reconstruct_probability(2.5, 3.5, r, 2000, 1.0, UNIT) for r in (0.9, 0.99, 0.999)]
    d1, d2 = abs(vals[1] - vals[0]), abs(vals[2] - vals[1])
    score = d2 / 5e-3 if d2 < d1 else math.inf
    return ctx.report(vals, [d1, d2], "last increment / 5e-3", score, 1.0)


# ---------------------------------------------------------------- invariants


@register("circular.wrapping_consistency", S, invariant="circular:wrap-mc")
def wrapping_consistency(ctx):
    """Binned circular TV of simulated angles vs wrap_law, atoms on mass (t = 2)."""
    th, atom = ctx.mc(lambda rng, m: sample_angles(UNIT, 2.0, m, rng), ctx.n(100_000))
    tv = circular_tv(th, wrap_law(2.0, UNIT), bins=MC_BINS, atom_flags=atom)
    return ctx.report(tv, 0.0, "TV", tv, 0.01, th.size)


@register("circular.moment_equals_fourier", S, invariant="circular:moment-fourier")
def moment_fourier(ctx):
    """circular_moment(k) is fourier_coefficient(k).value for integer k."""
    bad = sum(complex(circular_moment(float(k), 1.7, UNIT)) != fourier_coefficient(k, 1.7, UNIT).value
              for k in range(-10, 11))
    return ctx.report(bad, 0, "mismatches", bad, 0)


@register("circular.slln_proxy", S, invariant="circular:slln")
def slln_proxy(ctx):
    """Median of |X(t)|/t^{2/3} decreases over t in {1e2, 1e3, 1e4}."""
    meds = []
    for t in (1e2, 1e3, 1e4):
        x = ctx.mc(lambda rng, m, t=t: sample_marginal(UNIT, t, m, rng)[0], ctx.n(100_000))
        meds.append(float(np.median(np.abs(x))) / t ** (1 / 1.5))
    score = meds[-1] / meds[0] if all(b < a for a, b in zip(meds, meds[1:])) else math.inf
    return ctx.report(meds, 0.0, "final/initial (strict descent)", score, 1.0)


@register("circular.weak_convergence", S, invariant="circular:weak-convergence")
def weak_convergence(ctx):
    """KS of sigma_n X(n) vs N(0,1) over n in {1e2, 1e3, 1e4}; wrapped TV at the top."""
    N = ctx.n(100_000)
    ks, tv = [], None
    for n in (1e2, 1e3, 1e4):
        x = ctx.mc(lambda rng, m, n=n: sample_marginal(UNIT, n, m, rng)[0], N)
        y = x * math.sqrt(UNIT.lam / n) / UNIT.c
        ks.append(ks_distance(y, stats.norm.cdf))
        if n == 1e4:
            edges = np.linspace(0, TWO_PI, MC_BINS + 1)
            fine = np.linspace(0, TWO_PI, 64 * MC_BINS + 1)
            dens = wrapped_normal_density(fine, 1.0)
            cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(fine))])
            tv = binned_tv(y, np.diff(cum[::64]))
    slack = 3 * ks_null_sd(N)
    score = max(ladder_score(ks, 0.02, slack), tv / 0.02)
    return ctx.report(ks, tv, "ladder score", score, 1.0, 3 * N,
                      note=f"descent tolerated within {slack:.4f} (Monte Carlo resolution)")


@register("circular.kac_tv_ladder", S, invariant="circular:kac-tv")
def kac_tv(ctx):
    """Wrapped telegraph vs wrapped normal TV at c^2 = lambda in {10, 100, 1000}."""
    d = [wrapped_tv_to_normal(1.0, TelegraphParams(lam, math.sqrt(lam))) for lam in (10., 100., 1000.)]
    return ctx.report(d, 0.0, "ladder score", ladder_score(d, 0.02, strict=True), 1.0)


@register("circular.cbm.joint_moment", S, invariant="circular:cbm-factor")
def cbm_joint(ctx):
    """Circular Brownian joint moment E B(2) B(1): Gaussian exponent vs MC."""
    def draw(rng, m):
        b1 = rng.normal(0.0, 1.0, m)
        return b1, b1 + rng.normal(0.0, 1.0, m)

    b1, b2 = ctx.mc(draw, ctx.n(1_000_000))
    m, se = mean_and_se(np.cos(b1 + b2))
    ref = cbm_joint_moment(1.0, 1.0, 2.0, 1.0)
    alt = cbm_joint_moment(1.0, 1.0, 2.0, 1.0, form="squared")
    return ctx.report(ref, m, "s.e. multiple", se_multiple(m, ref, se), DEFAULT_SE_GATE, b1.size,
                      note=f"(omega(t-t'))^2 exponent gives {alt:.6f}")
