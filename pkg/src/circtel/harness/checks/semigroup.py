import cmath
import math

import numpy as np

from ...semigroup import (
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
from ...telegraph_core import TelegraphParams, sample_marginal
from ..core import DEFAULT_SE_GATE, mean_and_se, register, se_multiple

S = "semigroup"
UNIT = TelegraphParams(1.0, 1.0)


def mc_expectation(ctx, f: AnalyticPair, z, v, t, params, nominal=1_000_000):
    """``E_{z,v} f(Z(t), V(t))`` from exact draws of ``(X(t), V(t))``."""
    def draw(rng, m):
        x, vf, _ = sample_marginal(params, t, m, rng, initial=v)
        return x, vf

    x, vf = ctx.mc(draw, ctx.n(nominal))
    w = z * np.exp(1j * x)
    vals = np.where(vf > 0, np.polynomial.polynomial.polyval(w, f.coeffs_plus),
                    np.polynomial.polynomial.polyval(w, f.coeffs_minus))
    return mean_and_se(vals)


@register("semigroup.apply.mc", S, derived="semigroup_apply:mc")
def apply_mc(ctx):
    """T_t f for f = z^2 + (3+i) 1{v=+}, z = 0.5 e^{i pi/4}, t = 0.7 vs MC, both starts."""
    f = AnalyticPair((3 + 1j, 0, 1), (0, 0, 1))
    z = 0.5 * cmath.exp(1j * math.pi / 4)
    est, ref, score = [], [], 0.0
    for v in (1, -1):
        m, se = mc_expectation(ctx, f, z, v, 0.7, UNIT)
        target = semigroup_apply(f, z, v, 0.7, UNIT)
        est.append(m)
        ref.append(target)
        score = max(score, se_multiple(m, target, se))
    return ctx.report(ref, est, "s.e. multiple", score, DEFAULT_SE_GATE, ctx.n(1_000_000))


@register("semigroup.quadrature.vs_series", S, derived="semigroup_quadrature:z3")
def quad_vs_series(ctx):
    """Quadrature path vs velocity-averaged series for f = z^3 at z = 0.3."""
    f = AnalyticPair.same((0, 0, 0, 1))
    q = semigroup_quadrature(f, 0.3, 1.0, UNIT)
    s = 0.5 * (semigroup_apply(f, 0.3, 1, 1.0, UNIT) + semigroup_apply(f, 0.3, -1, 1.0, UNIT))
    return ctx.report(s, q, "abs", abs(q - s), 1e-6)


@register("semigroup.generator.richardson", S, derived="generator_apply:richardson")
def generator_fd(ctx):
    """Forward differences of T_h f at h = 1e-3, 1e-4 converge to L f at first order."""
    f = AnalyticPair((0.2, 1.0, 0.5j, -0.3), (0.1j, -0.4, 0.0, 0.7))
    z = 0.4 * cmath.exp(0.3j)
    orders, errs = [], []
    for v in (1, -1):
        g = generator_apply(f, z, v, UNIT)
        e = [abs((semigroup_apply(f, z, v, h, UNIT) - f(z, v)) / h - g) for h in (1e-3, 1e-4)]
        errs.append(e)
        orders.append(math.log10(e[0] / e[1]))
    score = max(abs(o - 1.0) for o in orders) / 0.2
    return ctx.report(orders, 1.0, "|order - 1| / 0.2", score, 1.0, note=f"errors {errs}")


@register("semigroup.resolvent.laplace", S, derived="resolvent_apply:laplace")
def resolvent_laplace(ctx):
    """R_2 f vs numerical Laplace transform of T_t f for f = z^2 at z = 0.4."""
    f = AnalyticPair.same((0, 0, 1))
    vals = [(resolvent_apply(f, 0.4, v, 2.0, UNIT), laplace_transform_semigroup(f, 0.4, v, 2.0, UNIT))
            for v in (1, -1)]
    err = max(abs(a - b) for a, b in vals)
    return ctx.report([a for a, _ in vals], [b for _, b in vals], "abs", err, 1e-4)


@register("semigroup.integral_equation", S, derived="integral_equation_residual:z")
def integral_eq(ctx):
    """Renewal-equation residual for f = z at z = 0.5, t = 0.5, both starts."""
    f = AnalyticPair.same((0, 1))
    res = max(integral_equation_residual(f, 0.5, v, 0.5, UNIT) for v in (1, -1))
    alt = max(integral_equation_residual(f, 0.5, v, 0.5, UNIT, form="alternate") for v in (1, -1))
    return ctx.report(res, 0.0, "abs", res, 1e-6, note=f"alternate kernel residual {alt:.3g}")


@register("semigroup.telegraph_equation.residual", S, derived="complex_telegraph_residual:z2")
def cte_residual(ctx):
    """Telegraph equation on the disc for f = z^2 at z = 0.5, t = 1, h_t = 1e-3."""
    f = AnalyticPair.same((0, 0, 1))
    r1 = complex_telegraph_residual(f, 0.5, 1.0, UNIT, h_t=1e-3)
    r2 = complex_telegraph_residual(f, 0.5, 1.0, UNIT, h_t=5e-4)
    order = math.log2(r1 / r2)
    alt = complex_telegraph_residual(f, 0.5, 1.0, UNIT, h_t=1e-3, equation="alternate")
    score = max(r1 / 1e-4, abs(order - 2.0) / 0.2)
    return ctx.report([r1, r2], order, "max(res/1e-4, |order-2|/0.2)", score, 1.0,
                      note=f"z^2(p''+p') variant residual {alt:.3g}")


@register("semigroup.heat.kac", S, derived="complex_telegraph_residual:heat")
def heat_kac(ctx):
    """Under c^2 = lambda = 1e3 the heat residual is small against |p_t|."""
    f = AnalyticPair.same((0, 0.5, 0.3, 0.2))
    p = TelegraphParams(1000.0, math.sqrt(1000.0))
    res, scale = heat_residual(f, 0.5, 1.0, p)
    return ctx.report(res, scale, "residual / |p_t|", res / scale, 1e-2)


# ---------------------------------------------------------------- invariants


def _random_pair(rng, degree):
    cp = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    cm = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return AnalyticPair(tuple(cp), tuple(cm))


@register("semigroup.contraction", S, invariant="semigroup:contraction")
def contraction(ctx):
    """|T_t f(z, v)| <= sum |a_k| over random f, z, v, t."""
    rng = ctx.rng()
    worst = -math.inf
    for _ in range(500):
        f = _random_pair(rng, int(rng.integers(0, 6)))
        z = rng.uniform(0, 0.99) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        p = TelegraphParams(rng.uniform(0.1, 5), rng.uniform(0.1, 5))
        v = int(rng.choice([1, -1]))
        worst = max(worst, abs(semigroup_apply(f, z, v, rng.uniform(0, 5), p)) - f.sup_bound())
    return ctx.report(worst, 0.0, "max(|Tf| - bound)", worst, 1e-12, 500)


@register("semigroup.semigroup_law", S, invariant="semigroup:semigroup-law")
def semigroup_law(ctx):
    """T_s T_t f = T_{s+t} f coefficient-wise for degree <= 3."""
    rng = ctx.rng()
    worst = 0.0
    for deg in range(4):
        f = _random_pair(rng, deg)
        for s, t in ((0.3, 0.9), (1.2, 0.4), (2.0, 2.5)):
            a = transition_pair(transition_pair(f, t, UNIT), s, UNIT)
            b = transition_pair(f, s + t, UNIT)
            worst = max(worst, float(np.abs(np.subtract(a.coeffs_plus, b.coeffs_plus)).max()),
                        float(np.abs(np.subtract(a.coeffs_minus, b.coeffs_minus)).max()))
    return ctx.report(worst, 0.0, "abs", worst, 1e-12)


@register("semigroup.degeneracy", S, invariant="semigroup:degeneracy")
def degeneracy(ctx):
    """Kernels at c k = lambda are finite and continuous under lambda -> lambda +- 1e-6."""
    worst = 0.0
    for lam, c, k in ((2.0, 1.0, 2), (3.0, 1.5, 2), (1.0, 1.0, 1)):
        for v in (1, -1):
            base = series_coefficients(k, 0.8, v, TelegraphParams(lam, c))
            for d in (1e-6, -1e-6):
                pert = series_coefficients(k, 0.8, v, TelegraphParams(lam + d, c))
                worst = max(worst, abs(pert.d_k[k] - base.d_k[k]), abs(pert.e_k[k] - base.e_k[k]))
            if not (np.all(np.isfinite(base.d_k)) and np.all(np.isfinite(base.e_k))):
                worst = math.inf
    # first-order change of size ~1e-6 is the smooth response
    return ctx.report(worst, 0.0, "abs", worst, 1e-5)


@register("semigroup.three_faces", S, invariant="semigroup:three-faces")
def three_faces(ctx):
    """Series vs joint-law quadrature (< 1e-6) vs MC (4 s.e.), degrees 0-3, each start sign."""
    rng = ctx.rng()
    z = 0.6 * cmath.exp(0.7j)
    quad_err, mc_score = 0.0, 0.0
    for deg in range(4):
        f = _random_pair(rng, deg)
        for v in (1, -1):
            s = semigroup_apply(f, z, v, 0.8, UNIT)
            q = semigroup_quadrature(f, z, 0.8, UNIT, v=v)
            m, se = mc_expectation(ctx, f, z, v, 0.8, UNIT, nominal=250_000)
            quad_err = max(quad_err, abs(s - q))
            mc_score = max(mc_score, se_multiple(m, s, se))
    score = max(quad_err / 1e-6, mc_score / DEFAULT_SE_GATE)
    return ctx.report(quad_err, mc_score, "max(quad/1e-6, se/4)", score, 1.0, 8 * ctx.n(250_000))


@register("semigroup.resolvent.identity", S, invariant="semigroup:resolvent-identity")
def resolvent_identity(ctx):
    """(mu - L) R_mu f = f and R_mu 1 = 1/mu."""
    f = AnalyticPair((0, 1, 0, 1), (0, 1, 0, 1))
    worst = 0.0
    for mu in (0.5, 2.0, 7.0):
        r = resolvent_pair(f, mu, UNIT)
        lr = generator_pair(r, UNIT)
        for a, b, c in ((r.coeffs_plus, lr.coeffs_plus, f.coeffs_plus),
                        (r.coeffs_minus, lr.coeffs_minus, f.coeffs_minus)):
            worst = max(worst, float(np.abs(mu * np.array(a) - np.array(b) - np.array(c)).max()))
    one = AnalyticPair.same((1,))
    const = max(abs(resolvent_apply(one, 0.3, v, 2.0, UNIT) - 0.5) for v in (1, -1))
    alt = resolvent_apply(one, 0.3, 1, 2.0, UNIT, form="alternate")
    err = max(worst, const)
    return ctx.report(worst, const, "abs", err, 1e-12, note=f"alternate kernel gives R_2 1 = {alt.real:.4f}")


@register("semigroup.telegraph_equation.slope", S, invariant="semigroup:cte-slope")
def cte_slope(ctx):
    """Residual of the disc telegraph equation is O(h_t^2): fitted slope 2 +- 0.2."""
    f = AnalyticPair.same((0.1, 0.5, 0.3, 0.2))
    hs = np.array([8e-3, 4e-3, 2e-3, 1e-3])
    res = np.array([complex_telegraph_residual(f, 0.5 * cmath.exp(0.4j), 1.0, UNIT, h_t=h) for h in hs])
    slope = float(np.polyfit(np.log(hs), np.log(res), 1)[0])
    alt = [complex_telegraph_residual(f, 0.5 * cmath.exp(0.4j), 1.0, UNIT, h_t=h, equation="alternate")
           for h in hs]
    return ctx.report(list(res), slope, "|slope - 2|", abs(slope - 2.0), 0.2,
                      note=f"z^2(p''+p') variant residuals {['%.3g' % a for a in alt]}")
