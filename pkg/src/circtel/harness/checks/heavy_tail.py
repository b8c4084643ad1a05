import math

import numpy as np
from scipy import stats

from ...heavy_tail import (
    HeavyTailParams,
    circular_stable_bin_masses,
    inverse_subordinator_paths,
    joint_limit_moment,
    limit_moment_subdiffusive,
    limit_moment_superdiffusive,
    sample_inverse_subordinator,
    sample_one_sided_stable,
    sample_subordinated_brownian,
    sample_subordinated_stable,
    sample_symmetric_stable,
    scaling_limit_check,
    stable_fourier_coefficient,
)
from ...numerics import mittag_leffler
from ...renewal import pareto_gaps
from ..core import DEFAULT_SE_GATE, ladder_score, mean_and_se, register, se_multiple
from ..stats import binned_tv, two_sample_circular_tv

S = "heavy-tail"
LADDER = (100, 1000, 10_000)
BINS = 32


def _pareto(ctx, alpha, nominal):
    sampler = pareto_gaps(alpha)
    return ctx.mc(lambda rng, m: sampler(np.ones(m), rng), ctx.n(nominal))


@register("heavy.pareto.tail_ratio", S, derived="sample_heavy_path:tail-ratio")
def tail_ratio(ctx):
    """P(D > x) x^alpha stays at the Pareto constant for x in {10, 1e2, 1e3}."""
    alpha = 1.5
    d = _pareto(ctx, alpha, 1_000_000)
    ratios, score = [], 0.0
    for x in (10.0, 100.0, 1000.0):
        p = x ** (-alpha)
        p_hat = float(np.mean(d > x))
        ratios.append(p_hat * x**alpha)
        score = max(score, se_multiple(p_hat, p, math.sqrt(p * (1 - p) / d.size)))
    return ctx.report(ratios, 1.0, "s.e. multiple", score, DEFAULT_SE_GATE, d.size)


@register("heavy.pareto.mean", S, derived="sample_heavy_path:mean")
def pareto_mean(ctx):
    """alpha = 1.5: mean holding time alpha/(alpha - 1) within 3 s.e."""
    d = _pareto(ctx, 1.5, 1_000_000)
    m, se = mean_and_se(d)
    ref = HeavyTailParams(1.5).mean_gap
    return ctx.report(ref, m, "s.e. multiple", se_multiple(m, ref, se), 3.0, d.size,
                      note="infinite variance: the sample s.e. is itself heavy-tailed")


@register("heavy.one_sided.cf", S, derived="sample_one_sided_stable:cf")
def one_sided_cf(ctx):
    """Empirical CF of skewed stable draws vs exp(-|u|^a (1 - i sgn u tan(pi a/2)))."""
    score, out = 0.0, []
    for alpha in (0.7, 1.5):
        x = ctx.mc(lambda rng, m, a=alpha: sample_one_sided_stable(a, 1.0, m, rng), ctx.n(1_000_000))
        for u in (0.5, 1.0, 2.0):
            m, se = mean_and_se(np.exp(1j * u * x))
            ref = np.exp(-abs(u) ** alpha * (1 - 1j * np.sign(u) * math.tan(math.pi * alpha / 2)))
            out.append(m)
            score = max(score, se_multiple(m, ref, se))
    return ctx.report(out, "displayed CF", "s.e. multiple", score, DEFAULT_SE_GATE, 2 * ctx.n(1_000_000))


@register("heavy.one_sided.support", S, derived="sample_one_sided_stable:support")
def one_sided_support(ctx):
    """alpha = 0.5 totally skewed draws are never negative."""
    x = ctx.mc(lambda rng, m: sample_one_sided_stable(0.5, 1.0, m, rng), ctx.n(1_000_000))
    neg = int(np.sum(x < 0))
    return ctx.report(neg, 0, "negative draws", neg, 0, x.size)


@register("heavy.symmetric.cf", S, derived="sample_symmetric_stable:cf")
def symmetric_cf(ctx):
    """Empirical CF of S(1) at u = 1 equals e^{-1} (alpha in {0.7, 1.5})."""
    score, out = 0.0, []
    for alpha in (0.7, 1.5):
        x = ctx.mc(lambda rng, m, a=alpha: sample_symmetric_stable(a, 1.0, m, rng), ctx.n(1_000_000))
        m, se = mean_and_se(np.cos(x))
        out.append(m)
        score = max(score, se_multiple(m, math.exp(-1.0), se))
    return ctx.report(math.exp(-1.0), out, "s.e. multiple", score, DEFAULT_SE_GATE, 2 * ctx.n(1_000_000))


@register("heavy.symmetric.near_gaussian", S, derived="sample_symmetric_stable:qq")
def near_gaussian(ctx):
    """alpha = 1.95: central QQ plot against N(0, 2) is close to linear."""
    x = ctx.mc(lambda rng, m: sample_symmetric_stable(1.95, 1.0, m, rng), ctx.n(100_000))
    probs = np.linspace(0.01, 0.99, 99)
    emp = np.quantile(x, probs)
    ref = stats.norm.ppf(probs, scale=math.sqrt(2.0))
    r = float(np.corrcoef(emp, ref)[0, 1])
    return ctx.report(r, 1.0, "1 - QQ correlation", 1.0 - r, 5e-3, x.size)


@register("heavy.inverse.mittag_leffler", S, derived="sample_inverse_subordinator:ml")
def inverse_ml(ctx):
    """E exp(-q L(t)) = E_alpha(-q t^alpha) at alpha = 0.7, q = t = 1."""
    L = ctx.mc(lambda rng, m: sample_inverse_subordinator(0.7, 1.0, m, rng), ctx.n(1_000_000))
    m, se = mean_and_se(np.exp(-L))
    ref = float(mittag_leffler(0.7, -1.0))
    cf_L = ctx.mc(lambda rng, m: sample_inverse_subordinator(0.7, 1.0, m, rng, normalization="cf"),
                  ctx.n(100_000))
    alt = float(np.mean(np.exp(-cf_L)))
    return ctx.report(ref, m, "s.e. multiple", se_multiple(m, ref, se), DEFAULT_SE_GATE, L.size,
                      note=f"CF-normalised subordinator gives {alt:.4f}")


@register("heavy.circular_stable.mc", S, derived="circular_stable_density:mc")
def circular_stable_mc(ctx):
    """Wrapped symmetric stable draws vs the Fourier-series density (alpha = 0.7, t = 1)."""
    x = ctx.mc(lambda rng, m: sample_symmetric_stable(0.7, 1.0, m, rng), ctx.n(100_000))
    edges = np.linspace(0, 2 * math.pi, BINS + 1)
    tv = binned_tv(x, circular_stable_bin_masses(edges, 1.0, 0.7))
    return ctx.report(tv, 0.0, "TV", tv, 0.02, x.size)


@register("heavy.limit.subdiffusive", S, derived="limit_moment_subdiffusive:mc")
def limit_sub(ctx):
    """Mean of cos S(L(1)) over nested draws vs E_alpha(-1), alpha = 0.7."""
    def draw(rng, m):
        return sample_subordinated_stable(0.7, sample_inverse_subordinator(0.7, 1.0, m, rng), rng)

    y = ctx.mc(draw, ctx.n(100_000))
    m, se = mean_and_se(np.cos(y))
    ref = limit_moment_subdiffusive(1.0, 1.0, 0.7)
    return ctx.report(ref, m, "s.e. multiple", se_multiple(m, ref, se), DEFAULT_SE_GATE, y.size)


@register("heavy.limit.superdiffusive", S, derived="limit_moment_superdiffusive:mc")
def limit_super(ctx):
    """Mean of cos S(2) vs e^{-2}, alpha = 1.5."""
    y = ctx.mc(lambda rng, m: sample_symmetric_stable(1.5, 2.0, m, rng), ctx.n(1_000_000))
    m, se = mean_and_se(np.cos(y))
    ref = limit_moment_superdiffusive(1.0, 2.0, 1.5)
    return ctx.report(ref, m, "s.e. multiple", se_multiple(m, ref, se), DEFAULT_SE_GATE, y.size)


@register("heavy.joint.two_estimators", S, derived="joint_limit_moment:two-estimators")
def joint_two(ctx):
    """Nested MC of cos(S(L(2)) + S(L(1))) vs the conditional closed form averaged over L."""
    alpha, n = 0.7, ctx.n(100_000)
    La = inverse_subordinator_paths(alpha, [2.0, 1.0], n, seed=ctx.seed())
    est_b, se_b = joint_limit_moment(1.0, 1.0, 2.0, 1.0, alpha, (La[:, 0], La[:, 1]))
    rng = ctx.rng()
    Lb = inverse_subordinator_paths(alpha, [2.0, 1.0], n, seed=rng)
    s1 = sample_subordinated_stable(alpha, Lb[:, 1], rng)
    s2 = s1 + sample_subordinated_stable(alpha, Lb[:, 0] - Lb[:, 1], rng)
    est_a, se_a = mean_and_se(np.cos(s1 + s2))
    se = math.hypot(se_a, se_b)
    return ctx.report(est_b, est_a, "s.e. multiple", se_multiple(est_a, est_b, se), DEFAULT_SE_GATE,
                      2 * n, note="L on a lattice of step 1e-2 for both estimators")


@register("heavy.scaling.alpha15", S, derived="scaling_limit_check:alpha15")
def scaling_15(ctx):
    """X(nt)/a_n wrapped vs circular stable at t/mu: descending ladder, final below 0.05."""
    rows = scaling_limit_check(1.5, LADDER, 1.0, ctx.n(100_000), seed=ctx.seed())
    d = [r["tv"] for r in rows]
    alt = scaling_limit_check(1.5, (LADDER[-1],), 1.0, ctx.n(20_000), seed=ctx.seed(),
                              convention="alternate")[0]["tv"]
    return ctx.report(d, 0.0, "ladder score", ladder_score(d, 0.05, strict=True), 1.0,
                      3 * ctx.n(100_000), note=f"a_n from n h / a_n^alpha = C gives TV {alt:.3f} at n=1e4")


@register("heavy.scaling.alpha06", S, derived="scaling_limit_check:alpha06")
def scaling_06(ctx):
    """X(nt)/n wrapped vs nested-MC S(L(t)): descending ladder, final below 0.07."""
    rows = scaling_limit_check(0.6, LADDER, 1.0, ctx.n(100_000), seed=ctx.seed())
    d = [r["tv"] for r in rows]
    return ctx.report(d, 0.0, "ladder score", ladder_score(d, 0.07, strict=True), 1.0,
                      3 * ctx.n(100_000), note="|X(nt)/n| <= c t, so the rescaled angle cannot spread")


# ---------------------------------------------------------------- invariants


@register("heavy.fourier_ode", S, invariant="heavy:fourier-ode")
def fourier_ode(ctx):
    """d/dt exp(-k^alpha t) = -k^alpha exp(-k^alpha t) by central differences."""
    worst = 0.0
    h = 1e-5
    for alpha in (0.5, 1.2, 1.8):
        k = np.arange(0, 20)
        for t in (0.3, 1.0, 2.5):
            fd = (stable_fourier_coefficient(k, t + h, alpha) - stable_fourier_coefficient(k, t - h, alpha)) / (2 * h)
            rhs = -np.abs(k) ** alpha * stable_fourier_coefficient(k, t, alpha)
            worst = max(worst, float(np.abs(fd - rhs).max()))
    return ctx.report(worst, 0.0, "abs", worst, 1e-6)


@register("heavy.subordination_identity", S, invariant="heavy:subordination")
def subordination(ctx):
    """Symmetric stable angles vs Brownian motion at 2 x (alpha/2)-subordinator, alpha = 1.2."""
    a = ctx.mc(lambda rng, m: sample_symmetric_stable(1.2, 1.0, m, rng), ctx.n(100_000))
    b = ctx.mc(lambda rng, m: sample_subordinated_brownian(1.2, 1.0, m, rng), ctx.n(100_000))
    tv = two_sample_circular_tv(a, b, BINS)
    return ctx.report(tv, 0.0, "two-sample TV", tv, 0.02, 2 * a.size)


@register("heavy.duality", S, invariant="heavy:duality")
def duality(ctx):
    """P(L(t) > s) = P(U(s) < t) on an (s, t) grid from independent draws."""
    alpha = 0.7
    n = ctx.n(100_000)
    score = 0.0
    for s in (0.5, 1.0, 2.0):
        U = ctx.mc(lambda rng, m, s=s: sample_one_sided_stable(alpha, s, m, rng, "laplace"), n)
        for t in (0.5, 1.0, 2.0):
            L = ctx.mc(lambda rng, m, t=t: sample_inverse_subordinator(alpha, t, m, rng), n)
            p1, p2 = float(np.mean(L > s)), float(np.mean(U < t))
            se = math.sqrt((p1 * (1 - p1) + p2 * (1 - p2)) / n)
            score = max(score, se_multiple(p1, p2, se))
    return ctx.report(score, 0.0, "s.e. multiple", score, DEFAULT_SE_GATE, 12 * n)
