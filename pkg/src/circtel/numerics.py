"""Special functions and branch-safe kernels shared by the law evaluators.

The modified Bessel functions are evaluated in-repo (power series for small
arguments, Hankel asymptotics for large ones) so that results do not depend on
the platform's special-function library.  Exponentially scaled variants are
provided because telegraph densities multiply ``I_nu`` by ``exp(-lambda t)``
and the unscaled values overflow long before the products do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "BesselOverflowError",
    "ConvergenceError",
    "bessel_i0",
    "bessel_i1",
    "bessel_i0e",
    "bessel_i1e",
    "bessel_i1_over_x_scaled",
    "mittag_leffler",
    "trig_pair",
    "damped_trig_pair",
    "wrapped_normal_density",
    "integrate_interval",
    "integrate_arc",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances shared by series truncation and quadrature."""

    series_abs_tol: float = 1e-16
    max_terms: int = 400
    quadrature_rel_tol: float = 1e-10

    def __post_init__(self):
        if not self.series_abs_tol > 0:
            raise ValueError("series_abs_tol must be > 0")
        if int(self.max_terms) != self.max_terms or self.max_terms < 8:
            raise ValueError("max_terms must be an integer >= 8")
        if not self.quadrature_rel_tol > 0:
            raise ValueError("quadrature_rel_tol must be > 0")


DEFAULT_TOL = ToleranceConfig()


class BesselOverflowError(OverflowError):
    """Raised when an unscaled Bessel value is not representable as a float."""


class ConvergenceError(RuntimeError):
    """Raised when a series fails to converge within ``max_terms``."""


# --------------------------------------------------------------------------
# Modified Bessel functions of order 0 and 1
# --------------------------------------------------------------------------

_SERIES_CUTOFF = 20.0
_SERIES_TERMS = 70
_ASYMPTOTIC_TERMS = 30
_LOG_MAX = math.log(np.finfo(float).max)


def _as_nonneg_array(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError("Bessel argument must be a nonnegative real")
    return arr


def _series(x, order):
    # sum_k (x/2)^(2k+order) / (k! (k+order)!); all terms positive
    half = 0.5 * x
    q = half * half
    term = np.ones_like(x) if order == 0 else half.copy()
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + order))
        total += term
        if np.all(term <= 1e-17 * total):
            break
    return total


def _asymptotic_scaled(x, order):
    # I_nu(x) e^{-x} ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(nu) / x^k
    mu = 4.0 * order * order
    term = np.ones_like(x)
    total = term.copy()
    for k in range(1, _ASYMPTOTIC_TERMS):
        term = -term * (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        total += term
    return total / np.sqrt(2.0 * np.pi * x)


def _scaled(x, order):
    x = _as_nonneg_array(x)
    out = np.empty_like(x)
    small = x < _SERIES_CUTOFF
    if np.any(small):
        out[small] = _series(x[small], order) * np.exp(-x[small])
    if np.any(~small):
        out[~small] = _asymptotic_scaled(x[~small], order)
    return out if out.ndim else float(out)


def bessel_i0e(x):
    """Exponentially scaled ``I_0(x) * exp(-x)`` for ``x >= 0``."""
    return _scaled(x, 0)


def bessel_i1e(x):
    """Exponentially scaled ``I_1(x) * exp(-x)`` for ``x >= 0``."""
    return _scaled(x, 1)


def _unscaled(x, order):
    x = _as_nonneg_array(x)
    if np.any(x > _LOG_MAX):
        raise BesselOverflowError(
            f"I_{order}(x) overflows float64 for x > {_LOG_MAX:.2f}; "
            "use the exponentially scaled variant"
        )
    out = np.empty_like(x)
    small = x < _SERIES_CUTOFF
    # summing the series directly avoids the exp(-x) exp(x) round trip
    if np.any(small):
        out[small] = _series(x[small], order)
    if np.any(~small):
        with np.errstate(over="raise"):
            out[~small] = _asymptotic_scaled(x[~small], order) * np.exp(x[~small])
    if np.any(np.isinf(out)):
        raise BesselOverflowError(f"I_{order}(x) overflows float64")
    return out if out.ndim else float(out)


def bessel_i0(x):
    """Modified Bessel function of the first kind, order 0.

    Raises :class:`BesselOverflowError` when the result exceeds the float64
    range (``x`` greater than about 713).
    """
    return _unscaled(x, 0)


def bessel_i1(x):
    """Modified Bessel function of the first kind, order 1."""
    return _unscaled(x, 1)


def bessel_i1_over_x_scaled(x):
    """``exp(-x) I_1(x) / x`` with the removable point ``x = 0`` filled by 1/2."""
    x = _as_nonneg_array(x)
    out = np.empty_like(x)
    tiny = x < 1e-8
    out[tiny] = 0.5
    if np.any(~tiny):
        out[~tiny] = np.asarray(bessel_i1e(x[~tiny])) / x[~tiny]
    return out if out.ndim else float(out)


# --------------------------------------------------------------------------
# Mittag-Leffler function E_{alpha,1} on the negative half-line
# --------------------------------------------------------------------------

_ML_SERIES_RADIUS = 1.0


def _ml_series(alpha, x, tol):
    total = 0.0
    for k in range(tol.max_terms):
        term = x**k / math.gamma(alpha * k + 1.0)
        total += term
        if k > 2 and abs(term) < tol.series_abs_tol * max(1.0, abs(total)):
            return total
    raise ConvergenceError(
        f"Mittag-Leffler series did not converge in {tol.max_terms} terms"
    )


def _ml_integral(alpha, y, tol):
    # E_a(-y) = int_0^inf exp(-r s) K_a(r) dr  (+ oscillatory pole term for a > 1),
    # s = y^(1/a); integrated in u = r s so the exponential has unit scale.
    s = y ** (1.0 / alpha)
    sa, ca = math.sin(alpha * math.pi), math.cos(alpha * math.pi)

    scale = sa / math.pi * s ** (-alpha)

    def smooth(u):
        # integrand without its u^(alpha-1) endpoint factor
        ra = (u / s) ** alpha
        return math.exp(-u) * scale / (ra * ra + 2.0 * ra * ca + 1.0)

    def integrand(u):
        return u ** (alpha - 1.0) * smooth(u)

    upper = 50.0
    cuts = [0.0, min(1.0, upper)]
    if ca < 0:
        peak = (-ca) ** (1.0 / alpha) * s
        if cuts[-1] < peak < upper:
            cuts.append(peak)
    cuts.append(upper)
    if alpha < 1.0:
        # smooth() depends on u^alpha, so w = u^alpha straightens the first panel
        total, _ = integrate.quad(
            lambda w: smooth(w ** (1.0 / alpha)) / alpha, 0.0, cuts[1] ** alpha,
            limit=400, epsabs=1e-15, epsrel=min(tol.quadrature_rel_tol, 1e-13),
        )
    else:
        total, _ = integrate.quad(
            smooth, cuts[0], cuts[1], weight="alg", wvar=(alpha - 1.0, 0.0),
            limit=400, epsabs=1e-15, epsrel=min(tol.quadrature_rel_tol, 1e-13),
        )
    for a, b in zip(cuts[1:-1], cuts[2:]):
        val, _ = integrate.quad(
            integrand, a, b, limit=400, epsabs=1e-15, epsrel=min(tol.quadrature_rel_tol, 1e-13)
        )
        total += val
    if alpha > 1.0:
        total += (2.0 / alpha) * math.exp(s * math.cos(math.pi / alpha)) * math.cos(
            s * math.sin(math.pi / alpha)
        )
    return total


def _ml_scalar(alpha, x, tol):
    if x > 0:
        raise ValueError("mittag_leffler is only implemented for x <= 0")
    if x == 0:
        return 1.0
    if alpha == 1.0:
        return math.exp(x)
    if -x <= _ML_SERIES_RADIUS:
        return _ml_series(alpha, x, tol)
    return _ml_integral(alpha, -x, tol)


def mittag_leffler(alpha: float, x, tol: ToleranceConfig = DEFAULT_TOL):
    """One-parameter Mittag-Leffler function ``E_alpha(x)`` for ``x <= 0``.

    Uses the power series for ``|x| <= 1`` and the Laplace-type integral
    representation (plus the residue term when ``alpha > 1``) beyond, where
    the alternating series loses all significant digits.

    Parameters
    ----------
    alpha : float
        Order, ``0 < alpha < 2``.
    x : float or array_like
        Nonpositive argument(s).
    """
    if not 0 < alpha < 2:
        raise ValueError("alpha must lie in (0, 2)")
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        return _ml_scalar(alpha, float(arr), tol)
    return np.array([_ml_scalar(alpha, float(v), tol) for v in arr.ravel()]).reshape(
        arr.shape
    )


# --------------------------------------------------------------------------
# cos / sinc pair continuous across omega = 0
# --------------------------------------------------------------------------


def trig_pair(omega2, t):
    """Return ``(cos(t w), sin(t w)/w)`` with ``w = sqrt(omega2)``.

    For negative ``omega2`` the hyperbolic continuation ``(cosh, sinh/w)`` is
    used, and ``omega2 == 0`` gives the limit ``(1, t)``.
    """
    omega2 = np.asarray(omega2, dtype=float)
    t = np.asarray(t, dtype=float)
    omega2, t = np.broadcast_arrays(omega2, t)
    w = np.sqrt(np.abs(omega2))
    pos = omega2 > 0
    neg = omega2 < 0
    safe_w = np.where(w > 0, w, 1.0)
    coslike = np.where(pos, np.cos(t * w), np.where(neg, np.cosh(t * w), 1.0))
    sinclike = np.where(
        pos, np.sin(t * w) / safe_w, np.where(neg, np.sinh(t * w) / safe_w, t)
    )
    if coslike.ndim == 0:
        return float(coslike), float(sinclike)
    return coslike, sinclike


def damped_trig_pair(omega2, t, damping):
    """``exp(-damping t) * trig_pair(omega2, t)`` without intermediate overflow.

    In the hyperbolic branch ``sqrt(-omega2)`` may be as large as ``damping``,
    so ``cosh`` alone overflows for ``damping * t > 710`` even though the
    damped product stays bounded.
    """
    omega2 = np.asarray(omega2, dtype=float)
    t = np.asarray(t, dtype=float)
    omega2, t = np.broadcast_arrays(omega2, t)
    w = np.sqrt(np.abs(omega2))
    safe_w = np.where(w > 0, w, 1.0)
    pos = omega2 > 0
    neg = omega2 < 0
    decay = np.exp(-damping * t)
    # only the hyperbolic branch uses these; mask w elsewhere so exp cannot overflow
    wh = np.where(neg, w, 0.0)
    grow = np.exp((wh - damping) * t)
    shrink = np.exp(-(wh + damping) * t)
    coslike = np.where(
        pos, decay * np.cos(t * w), np.where(neg, 0.5 * (grow + shrink), decay)
    )
    sinclike = np.where(
        pos,
        decay * np.sin(t * w) / safe_w,
        np.where(neg, 0.5 * (grow - shrink) / safe_w, decay * t),
    )
    # tiny |omega2| in the hyperbolic branch: (grow - shrink)/(2w) cancels
    small = neg & (w * t < 1e-6)
    if np.any(small):
        sinclike = np.where(small, decay * t * (1.0 + (w * t) ** 2 / 6.0), sinclike)
    if coslike.ndim == 0:
        return float(coslike), float(sinclike)
    return coslike, sinclike


# --------------------------------------------------------------------------
# Wrapped normal (circular Brownian motion) density
# --------------------------------------------------------------------------


def _wrapped_normal_images(theta, t, tol):
    theta = np.mod(np.asarray(theta, dtype=float), 2.0 * np.pi)
    total = np.exp(-(theta**2) / (2.0 * t))
    for k in range(1, tol.max_terms):
        plus = np.exp(-((theta + 2.0 * k * np.pi) ** 2) / (2.0 * t))
        minus = np.exp(-((theta - 2.0 * k * np.pi) ** 2) / (2.0 * t))
        total = total + plus + minus
        # theta in [0, 2pi): the farthest-from-origin image bounds both tails
        if np.exp(-((2.0 * (k - 1) * np.pi) ** 2) / (2.0 * t)) < tol.series_abs_tol:
            break
    return total / np.sqrt(2.0 * np.pi * t)


def _wrapped_normal_fourier(theta, t, tol):
    theta = np.asarray(theta, dtype=float)
    total = np.ones_like(theta)
    for k in range(1, tol.max_terms):
        weight = math.exp(-k * k * t / 2.0)
        if weight < tol.series_abs_tol:
            break
        total = total + 2.0 * weight * np.cos(k * theta)
    return total / (2.0 * np.pi)


def wrapped_normal_density(theta, t, method: str = "auto", tol: ToleranceConfig = DEFAULT_TOL):
    """Density of ``exp(i B(t))`` on ``[0, 2 pi)`` for standard Brownian motion.

    ``method`` selects the image sum, the Fourier series, or (``"auto"``)
    whichever converges faster: images for ``t < 2``, Fourier otherwise.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    if method == "auto":
        method = "images" if t < 2.0 else "fourier"
    if method == "images":
        out = _wrapped_normal_images(theta, t, tol)
    elif method == "fourier":
        out = _wrapped_normal_fourier(theta, t, tol)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out) if np.ndim(out) == 0 else out


# --------------------------------------------------------------------------
# Quadrature helpers
# --------------------------------------------------------------------------


def integrate_interval(f, a, b, rel_tol=DEFAULT_TOL.quadrature_rel_tol, points=None):
    """Adaptive Gauss-Kronrod integral of a real function over ``[a, b]``."""
    if b <= a:
        return 0.0
    val, _ = integrate.quad(
        f, a, b, limit=500, epsabs=1e-14, epsrel=rel_tol, points=points
    )
    return val


def integrate_arc(f, half_width, a=None, b=None, rel_tol=DEFAULT_TOL.quadrature_rel_tol):
    """Integrate ``f`` over ``[a, b]`` inside the support ``[-L, L]``.

    The substitution ``x = L sin(u)`` absorbs square-root behaviour at the
    support edges, which is how telegraph-type densities approach ``+-ct``.
    """
    L = float(half_width)
    a = -L if a is None else max(-L, a)
    b = L if b is None else min(L, b)
    if b <= a:
        return 0.0
    ua = math.asin(max(-1.0, min(1.0, a / L)))
    ub = math.asin(max(-1.0, min(1.0, b / L)))
    val, _ = integrate.quad(
        lambda u: f(L * math.sin(u)) * L * math.cos(u),
        ua,
        ub,
        limit=500,
        epsabs=1e-14,
        epsrel=rel_tol,
    )
    return val
