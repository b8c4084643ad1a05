"""Independent reference computations used by the checks.

Each oracle takes a different route from the production code path: plain
power series in ``math.fsum``, ``scipy`` weighted quadrature, or root
finding on the preimage set instead of the closed-form arcs.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, optimize, stats

from ..telegraph_core import TelegraphParams, conditional_density, density_ac


def bessel_series(x: float, order: int, eps: float = 1e-16) -> float:
    """``I_order(x)`` by its power series, summed until the term drops below ``eps`` (relative)."""
    terms = []
    k = 0
    term = (x / 2.0) ** order / math.factorial(order)
    while True:
        terms.append(term)
        k += 1
        term *= (x * x / 4.0) / (k * (k + order))
        if term < eps * math.fsum(terms):
            break
    return math.fsum(terms)


def erfc_quadrature(x: float) -> float:
    """``erfc(x) = 2/sqrt(pi) int_x^inf exp(-u^2) du``."""
    val, _ = integrate.quad(lambda u: math.exp(-u * u), x, math.inf, epsabs=1e-15, epsrel=1e-13)
    return 2.0 / math.sqrt(math.pi) * val


def poisson_mixture_density(x, t: float, params: TelegraphParams, tail: float = 1e-10):
    """``sum_{n >= 1} P(N = n) mu_n(x, t)`` truncated where the Poisson tail is below ``tail``."""
    lt = params.lam * t
    n_max = int(stats.poisson.isf(tail, lt)) + 1
    total = np.zeros_like(np.asarray(x, dtype=float))
    for n in range(1, n_max + 1):
        total = total + stats.poisson.pmf(n, lt) * np.asarray(conditional_density(x, t, n, params))
    return total, float(stats.poisson.sf(n_max, lt))


def cf_quadrature(xi: float, t: float, params: TelegraphParams) -> complex:
    """Characteristic function by cosine-weighted quadrature (the law is symmetric)."""
    ct = params.c * t
    val, _ = integrate.quad(lambda x: float(density_ac(x, t, params)), -ct, ct, weight="cos",
                            wvar=xi, limit=400, epsabs=1e-13)
    return complex(math.exp(-params.lam * t) * math.cos(xi * ct) + val, 0.0)


def pushforward_cdf(g, x: float, t: float, params: TelegraphParams, step: float = 0.05) -> float:
    """``P(g(X(t)) <= x)`` by locating the crossings of ``g = x`` on ``[-ct, ct]``."""
    ct = params.c * t
    grid = np.linspace(-ct, ct, max(3, int(math.ceil(2 * ct / step)) + 1))
    h = lambda y: g(y) - x
    vals = h(grid)
    cuts = [-ct]
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa == 0.0:
            cuts.append(a)
        elif fa * fb < 0:
            cuts.append(optimize.brentq(h, a, b, xtol=1e-15, rtol=1e-15))
    # tangencies change the set only on a null set, so sign changes suffice
    cuts.append(ct)
    cuts = sorted(set(cuts))
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        if b - a <= 0 or g(0.5 * (a + b)) > x:
            continue
        val, _ = integrate.quad(lambda y: float(density_ac(y, t, params)), a, b, limit=200,
                                epsabs=1e-14, epsrel=1e-12)
        total += val
    atom = 0.5 * math.exp(-params.lam * t)
    total += sum(atom for y in (-ct, ct) if g(y) <= x)
    return total
