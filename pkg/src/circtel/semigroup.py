"""Transition semigroup, generator and resolvent of ``(Z(t), V(t))`` on the disc.

Test functions are pairs of power series ``f(z, v) = sum_k a_k(v) z^k``, one
per velocity state.  The semigroup acts on each power ``z^k`` separately
through a 2x2 matrix in the velocity index, so all operators here are
multipliers in ``k`` and map an :class:`AnalyticPair` of degree ``K`` to
another one of the same degree.

Kernel conventions (``form`` argument):

``"derived"``
    Kernels obtained by solving the forward system
    ``a' = (i k v - lam) a + lam b`` for each ``k``.  Default.
``"alternate"``
    The alternative closed form carrying the extra same-state term
    ``exp(i k v t) - (1 + sgn v) cos(k c t)``.  Its velocity average agrees
    with the derived kernel, but each sign separately does not.  Kept so the
    discrepancy can be measured.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .numerics import DEFAULT_TOL, ToleranceConfig, damped_trig_pair, integrate_arc
from .telegraph_core import TelegraphParams, VelocitySign, density_ac, joint_law

__all__ = [
    "AnalyticPair",
    "SeriesCoefficients",
    "ResolventCoefficients",
    "series_coefficients",
    "resolvent_coefficients",
    "transition_pair",
    "semigroup_apply",
    "semigroup_quadrature",
    "generator_pair",
    "generator_apply",
    "resolvent_pair",
    "resolvent_apply",
    "laplace_transform_semigroup",
    "integral_equation_residual",
    "velocity_average_series",
    "complex_telegraph_residual",
    "heat_residual",
]

FORMS = ("derived", "alternate")


def _as_z(z) -> complex:
    if hasattr(z, "z"):
        return complex(z.z)
    return complex(z)


@dataclass(frozen=True)
class AnalyticPair:
    """Coefficients ``a_k(+c)`` and ``a_k(-c)``, ``k = 0..K``."""

    coeffs_plus: tuple
    coeffs_minus: tuple

    def __post_init__(self):
        p = tuple(complex(a) for a in self.coeffs_plus)
        m = tuple(complex(a) for a in self.coeffs_minus)
        n = max(len(p), len(m), 1)
        p += (0j,) * (n - len(p))
        m += (0j,) * (n - len(m))
        object.__setattr__(self, "coeffs_plus", p)
        object.__setattr__(self, "coeffs_minus", m)

    @classmethod
    def same(cls, coeffs) -> "AnalyticPair":
        """Velocity-independent function ``f(z)``."""
        return cls(tuple(coeffs), tuple(coeffs))

    @property
    def truncation(self) -> int:
        return len(self.coeffs_plus) - 1

    def coeffs(self, v) -> np.ndarray:
        return np.array(self.coeffs_plus if int(VelocitySign.of(v)) > 0 else self.coeffs_minus)

    def __call__(self, z, v) -> complex:
        a = self.coeffs(v)
        return complex(np.polyval(a[::-1], _as_z(z)))

    def derivative(self, z, v, order: int = 1) -> complex:
        a = self.coeffs(v)
        k = np.arange(len(a))
        for j in range(order):
            a = a * (k - j)
        a = a[order:]
        return complex(np.polyval(a[::-1], _as_z(z))) if len(a) else 0j

    def sup_bound(self) -> float:
        """``max_v sum_k |a_k(v)|``, a bound for ``|f|`` on the closed disc."""
        return float(max(np.abs(self.coeffs_plus).sum(), np.abs(self.coeffs_minus).sum()))

    def to_json(self) -> str:
        pack = lambda cs: [[c.real, c.imag] for c in cs]
        return json.dumps(
            {"schema_version": 1, "coeffs_plus": pack(self.coeffs_plus),
             "coeffs_minus": pack(self.coeffs_minus)}
        )

    @classmethod
    def from_json(cls, text: str) -> "AnalyticPair":
        d = json.loads(text)
        unpack = lambda cs: tuple(complex(re, im) for re, im in cs)
        return cls(unpack(d["coeffs_plus"]), unpack(d["coeffs_minus"]))


@dataclass(frozen=True)
class SeriesCoefficients:
    """Same-state and cross-state kernels per power ``k`` (without ``a_k``)."""

    d_k: np.ndarray
    e_k: np.ndarray


@dataclass(frozen=True)
class ResolventCoefficients:
    d_tilde_k: np.ndarray
    e_tilde_k: np.ndarray
    mu: float


def _check_form(form):
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")


def series_coefficients(K: int, t: float, v, params: TelegraphParams,
                        form: str = "derived") -> SeriesCoefficients:
    """Kernels with ``T_t z^k(v) = d_k z^k`` on the same state, ``e_k`` across.

    Both include the ``exp(-lam t)`` factor.  ``c k = lam`` and the
    hyperbolic range ``c k < lam`` are handled by :func:`damped_trig_pair`.
    """
    _check_form(form)
    if t < 0:
        raise ValueError("t must be nonnegative")
    sgn = int(VelocitySign.of(v))
    lam, c = params.lam, params.c
    k = np.arange(K + 1, dtype=float)
    coslike, sinclike = damped_trig_pair((c * k) ** 2 - lam**2, t, lam)
    coslike, sinclike = np.atleast_1d(coslike), np.atleast_1d(sinclike)
    d = coslike + 1j * sgn * c * k * sinclike
    if form == "alternate":
        d = d + math.exp(-lam * t) * (np.exp(1j * k * sgn * c * t) - (1 + sgn) * np.cos(k * c * t))
    e = lam * sinclike + 0j
    return SeriesCoefficients(d, e)


def transition_pair(f: AnalyticPair, t: float, params: TelegraphParams,
                    form: str = "derived") -> AnalyticPair:
    """Coefficients of ``T_t f`` read off power by power."""
    K = f.truncation
    ap, am = np.array(f.coeffs_plus), np.array(f.coeffs_minus)
    sp = series_coefficients(K, t, +1, params, form)
    sm = series_coefficients(K, t, -1, params, form)
    return AnalyticPair(tuple(ap * sp.d_k + am * sp.e_k), tuple(am * sm.d_k + ap * sm.e_k))


def _check_inside(z, strict=True):
    r = abs(z)
    if (strict and r >= 1.0) or (not strict and r > 1.0):
        raise ValueError("series evaluation requires |z| < 1" if strict else "need |z| <= 1")


def semigroup_apply(f: AnalyticPair, z, v, t: float, params: TelegraphParams,
                    form: str = "derived") -> complex:
    """``T_t f(z, v) = E_{z,v} f(Z(t), V(t))`` from the power series."""
    z = _as_z(z)
    _check_inside(z)
    return transition_pair(f, t, params, form)(z, v)


def semigroup_quadrature(f: AnalyticPair, z, t: float, params: TelegraphParams, v=None,
                         tol: ToleranceConfig = DEFAULT_TOL) -> complex:
    """Expectation by quadrature against the law of ``X(t)``; valid for ``|z| <= 1``.

    With ``v=None`` the start velocity is averaged and ``f`` must not depend
    on the velocity (the two-atom plus density formula).  With ``v`` given the
    joint law of ``(X(t), V(t))`` from that start is used instead.
    """
    z = _as_z(z)
    _check_inside(z, strict=False)
    if not t > 0:
        raise ValueError("t must be positive")
    lam, c = params.lam, params.c
    ct = c * t
    rel = tol.quadrature_rel_tol

    def cquad(g):
        re = integrate_arc(lambda x: g(x).real, ct, rel_tol=rel)
        im = integrate_arc(lambda x: g(x).imag, ct, rel_tol=rel)
        return complex(re, im)

    if v is None:
        if f.coeffs_plus != f.coeffs_minus:
            raise ValueError("velocity-averaged quadrature needs a velocity-independent f")
        g = lambda w: f(w, +1)
        atoms = 0.5 * math.exp(-lam * t) * (g(z * np.exp(1j * ct)) + g(z * np.exp(-1j * ct)))
        return atoms + cquad(lambda x: density_ac(x, t, params) * g(z * np.exp(1j * x)))

    vi = VelocitySign.of(v)
    total = 0j
    for vf in (VelocitySign.PLUS, VelocitySign.MINUS):
        atom, _ = joint_law(0.0, t, vf, vi, params)
        if atom is not None:
            total += atom[1] * f(z * np.exp(1j * atom[0]), vf)
        total += cquad(lambda x, vf=vf: joint_law(x, t, vf, vi, params)[1] * f(z * np.exp(1j * x), vf))
    return total


def generator_pair(f: AnalyticPair, params: TelegraphParams) -> AnalyticPair:
    """Coefficients of ``L f = i z v f' + lam [f(z, -v) - f(z, v)]``."""
    lam, c = params.lam, params.c
    ap, am = np.array(f.coeffs_plus), np.array(f.coeffs_minus)
    k = np.arange(len(ap))
    lp = 1j * c * k * ap + lam * (am - ap)
    lm = -1j * c * k * am + lam * (ap - am)
    return AnalyticPair(tuple(lp), tuple(lm))


def generator_apply(f: AnalyticPair, z, v, params: TelegraphParams) -> complex:
    z = _as_z(z)
    _check_inside(z)
    return generator_pair(f, params)(z, v)


def resolvent_coefficients(K: int, mu: float, v, params: TelegraphParams,
                           form: str = "derived") -> ResolventCoefficients:
    """Laplace transforms of the series kernels at ``mu > 0``.

    ``form="alternate"`` adds ``-sgn(v)/(lam + mu + i k c)`` to the same-state
    kernel, the variant whose constant-function value is not ``1/mu``.
    """
    _check_form(form)
    if not mu > 0:
        raise ValueError("mu must be positive")
    sgn = int(VelocitySign.of(v))
    lam, c = params.lam, params.c
    k = np.arange(K + 1, dtype=float)
    den = mu * mu + 2 * lam * mu + (c * k) ** 2
    d = (lam + mu + 1j * k * sgn * c) / den
    if form == "alternate":
        d = d - sgn / (lam + mu + 1j * k * c)
    e = lam / den + 0j
    return ResolventCoefficients(d, e, mu)


def resolvent_pair(f: AnalyticPair, mu: float, params: TelegraphParams,
                   form: str = "derived") -> AnalyticPair:
    K = f.truncation
    ap, am = np.array(f.coeffs_plus), np.array(f.coeffs_minus)
    rp = resolvent_coefficients(K, mu, +1, params, form)
    rm = resolvent_coefficients(K, mu, -1, params, form)
    return AnalyticPair(
        tuple(ap * rp.d_tilde_k + am * rp.e_tilde_k), tuple(am * rm.d_tilde_k + ap * rm.e_tilde_k)
    )


def resolvent_apply(f: AnalyticPair, z, v, mu: float, params: TelegraphParams,
                    form: str = "derived") -> complex:
    """``R_mu f(z, v) = ((mu - L)^{-1} f)(z, v)`` for ``mu > 0``."""
    z = _as_z(z)
    _check_inside(z)
    return resolvent_pair(f, mu, params, form)(z, v)


def laplace_transform_semigroup(f: AnalyticPair, z, v, mu: float, params: TelegraphParams,
                                cutoff: float = 1e-10, form: str = "derived") -> complex:
    """``int_0^T exp(-mu t) T_t f(z, v) dt`` with ``exp(-mu T) = cutoff``."""
    T = -math.log(cutoff) / mu
    g = lambda t: math.exp(-mu * t) * semigroup_apply(f, z, v, t, params, form)
    re, _ = integrate.quad(lambda t: g(t).real, 0.0, T, limit=400, epsabs=1e-13, epsrel=1e-11)
    im, _ = integrate.quad(lambda t: g(t).imag, 0.0, T, limit=400, epsabs=1e-13, epsrel=1e-11)
    return complex(re, im)


def integral_equation_residual(f: AnalyticPair, z, v, t: float, params: TelegraphParams,
                               form: str = "derived", rel_tol: float = 1e-11) -> float:
    """Residual of the renewal equation at the first switch.

    ``u(z,v,t) = e^{-lam t} f(z e^{ivt}, v) + lam int_0^t e^{-lam s} u(z e^{ivs}, -v, t-s) ds``
    with ``u = T_t f`` from the series.
    """
    z = _as_z(z)
    _check_inside(z)
    if t < 0:
        raise ValueError("t must be nonnegative")
    vs = VelocitySign.of(v)
    vel = int(vs) * params.c
    lam = params.lam
    lhs = semigroup_apply(f, z, vs, t, params, form)
    first = math.exp(-lam * t) * f(z * np.exp(1j * vel * t), vs)
    if t == 0:
        return abs(lhs - first)
    other = VelocitySign(-int(vs))

    def g(s):
        return lam * math.exp(-lam * s) * semigroup_apply(
            f, z * np.exp(1j * vel * s), other, t - s, params, form
        )

    re, _ = integrate.quad(lambda s: g(s).real, 0.0, t, limit=200, epsabs=1e-14, epsrel=rel_tol)
    im, _ = integrate.quad(lambda s: g(s).imag, 0.0, t, limit=200, epsabs=1e-14, epsrel=rel_tol)
    return abs(lhs - first - complex(re, im))


def velocity_average_series(f: AnalyticPair, t: float, params: TelegraphParams,
                            form: str = "derived") -> np.ndarray:
    """Coefficients of ``p = (T_t f(., +c) + T_t f(., -c)) / 2``."""
    g = transition_pair(f, t, params, form)
    return 0.5 * (np.array(g.coeffs_plus) + np.array(g.coeffs_minus))


def _p_and_z_derivs(f, z, t, params, form):
    p = velocity_average_series(f, t, params, form)
    k = np.arange(len(p))
    val = np.polyval(p[::-1], z)
    d1 = np.polyval((k * p)[1:][::-1], z) if len(p) > 1 else 0j
    d2 = np.polyval((k * (k - 1) * p)[2:][::-1], z) if len(p) > 2 else 0j
    return val, d1, d2


def _t_derivs(f, z, t, params, h_t, form):
    pm = _p_and_z_derivs(f, z, t - h_t, params, form)[0]
    p0, d1, d2 = _p_and_z_derivs(f, z, t, params, form)
    pp = _p_and_z_derivs(f, z, t + h_t, params, form)[0]
    pt = (pp - pm) / (2 * h_t)
    ptt = (pp - 2 * p0 + pm) / (h_t * h_t)
    return pt, ptt, d1, d2


def complex_telegraph_residual(f: AnalyticPair, z, t: float, params: TelegraphParams,
                               h_t: float = 1e-3, equation: str = "angular",
                               form: str = "derived") -> float:
    """Residual of the telegraph equation on the disc for the velocity average.

    ``equation="angular"`` uses ``d^2/dtheta^2 = -(z d/dz)^2``, i.e.
    ``p_tt + 2 lam p_t + c^2 (z^2 p'' + z p') = 0``.  ``equation="alternate"``
    uses ``c^2 z^2 (p'' + p')`` in place of the angular term.  ``z``
    derivatives are exact; ``t`` derivatives are central differences.
    """
    z = _as_z(z)
    if z == 0:
        raise ValueError("z must be nonzero")
    _check_inside(z)
    if not t > h_t:
        raise ValueError("need t > h_t for central differences")
    pt, ptt, d1, d2 = _t_derivs(f, z, t, params, h_t, form)
    c2 = params.c**2
    if equation == "angular":
        space = c2 * (z * z * d2 + z * d1)
    elif equation == "alternate":
        space = c2 * z * z * (d2 + d1)
    else:
        raise ValueError(f"unknown equation {equation!r}")
    return abs(ptt + 2 * params.lam * pt + space)


def heat_residual(f: AnalyticPair, z, t: float, params: TelegraphParams,
                  h_t: float = 1e-4, form: str = "derived"):
    """Heat-equation residual ``|p_t - (1/2) p_thetatheta|`` and the scale ``|p_t|``.

    Under ``c^2 = lam`` the telegraph equation divided by ``2 lam`` differs
    from the heat equation by ``p_tt / (2 lam)``.
    """
    z = _as_z(z)
    if z == 0:
        raise ValueError("z must be nonzero")
    pt, _, d1, d2 = _t_derivs(f, z, t, params, h_t, form)
    return abs(pt + 0.5 * (z * z * d2 + z * d1)), abs(pt)
