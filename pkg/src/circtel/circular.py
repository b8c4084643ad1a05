"""Wrapped (circular) telegraph laws, moments and Fourier reconstruction.

The circular process is ``Z(t) = z exp(i X(t))``.  Every law here is computed
for the start ``z = 1``; a start angle ``theta0`` only shifts the angle.
Wrapping a law with bounded support needs finitely many images, so the
image sums below are exact rather than truncated tails.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .numerics import DEFAULT_TOL, ToleranceConfig, damped_trig_pair, wrapped_normal_density
from .telegraph_core import (
    TelegraphParams,
    char_fn,
    conditional_density,
    density_ac,
    sample_marginal,
)

TWO_PI = 2.0 * math.pi

__all__ = [
    "Angle",
    "CirclePoint",
    "WrappedLaw",
    "FourierCoefficient",
    "wrap_law",
    "wrap_conditional",
    "circular_moment",
    "joint_moment",
    "covariance",
    "fourier_coefficient",
    "reconstruct_probability",
    "wrapped_tv_to_normal",
    "cbm_conditional_factor",
    "cbm_joint_moment",
    "sample_angles",
]


@dataclass(frozen=True)
class Angle:
    theta: float

    def __post_init__(self):
        th = math.fmod(float(self.theta), TWO_PI)
        if th < 0:
            th += TWO_PI
        if th >= TWO_PI:  # fmod of a tiny negative can round up to 2 pi
            th = 0.0
        object.__setattr__(self, "theta", th)


@dataclass(frozen=True)
class CirclePoint:
    radius: float
    angle: Angle

    def __post_init__(self):
        if not 0 < self.radius <= 1:
            raise ValueError("radius must lie in (0, 1]")
        if not isinstance(self.angle, Angle):
            object.__setattr__(self, "angle", Angle(self.angle))

    @property
    def z(self) -> complex:
        return self.radius * complex(math.cos(self.angle.theta), math.sin(self.angle.theta))


def _support_integral(f, lo, hi, a, b, rel_tol):
    """Integrate ``f`` over ``[a, b] & [lo, hi]`` with ``x = m + h sin u``."""
    a, b = max(a, lo), min(b, hi)
    if b <= a:
        return 0.0
    m, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
    ua = math.asin(max(-1.0, min(1.0, (a - m) / h)))
    ub = math.asin(max(-1.0, min(1.0, (b - m) / h)))
    val, _ = integrate.quad(
        lambda u: f(m + h * math.sin(u)) * h * math.cos(u), ua, ub,
        limit=500, epsabs=1e-14, epsrel=rel_tol,
    )
    return val


@dataclass
class WrappedLaw:
    """Atoms on the circle plus a finite image sum of a line density.

    ``line_density`` is the absolutely continuous part on the line with
    support ``[support[0], support[1]]``; ``wrap_terms`` images on each side
    cover the support completely.
    """

    atoms: tuple
    line_density: Callable
    support: tuple
    wrap_terms: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.atoms = tuple((Angle(a).theta, float(m)) for a, m in self.atoms)
        lo, hi = self.support
        if TWO_PI * self.wrap_terms < max(abs(lo), abs(hi)):
            raise ValueError("wrap_terms too small to cover the support")

    def _shifts(self):
        lo, hi = self.support
        kmin = math.floor(lo / TWO_PI) - 1
        kmax = math.ceil(hi / TWO_PI) + 1
        return range(kmin, kmax + 1)

    def density(self, theta):
        th = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        lo, hi = self.support
        total = np.zeros_like(th)
        for k in self._shifts():
            y = th + TWO_PI * k
            inside = (y > lo) & (y < hi)
            if np.any(inside):
                total = total + np.where(inside, self.line_density(np.where(inside, y, 0.0)), 0.0)
        return float(total) if total.ndim == 0 else total

    def ac_mass(self, a: float, b: float, tol: ToleranceConfig = DEFAULT_TOL) -> float:
        """Density mass of the arc ``[a, b]`` with ``0 <= a <= b <= 2 pi``."""
        lo, hi = self.support
        f = lambda y: float(self.line_density(y))
        return sum(
            _support_integral(f, lo, hi, a + TWO_PI * k, b + TWO_PI * k, tol.quadrature_rel_tol)
            for k in self._shifts()
        )

    def interval_probability(self, a: float, b: float, tol: ToleranceConfig = DEFAULT_TOL) -> float:
        """``P(angle in [a, b])`` for ``0 <= a <= b <= 2 pi``, atoms included."""
        atom_mass = sum(m for th, m in self.atoms if a <= th <= b)
        return atom_mass + self.ac_mass(a, b, tol)

    def total_mass(self, tol: ToleranceConfig = DEFAULT_TOL) -> float:
        return self.interval_probability(0.0, TWO_PI, tol)

    def to_json(self, grid: int = 256) -> str:
        theta = np.arange(grid) * (TWO_PI / grid)
        return json.dumps(
            {
                "schema_version": 1,
                "atoms": [[a, m] for a, m in self.atoms],
                "wrap_terms": self.wrap_terms,
                "support": list(self.support),
                "theta": theta.tolist(),
                "density": np.asarray(self.density(theta)).tolist(),
                "meta": self.meta,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "WrappedLaw":
        """Rebuild a law whose density is the stored table (periodic linear interpolation)."""
        d = json.loads(text)
        theta = np.asarray(d["theta"])
        dens = np.asarray(d["density"])
        lo, hi = d["support"]

        def table(y):
            # one period of line support starting at lo reproduces the table once
            y = np.asarray(y, dtype=float)
            vals = np.interp(np.mod(y, TWO_PI), theta, dens, period=TWO_PI)
            return np.where((y >= lo) & (y < lo + TWO_PI), vals, 0.0)

        return cls(tuple(map(tuple, d["atoms"])), table, (lo, hi), d["wrap_terms"],
                   dict(d.get("meta", {})))


@dataclass(frozen=True)
class FourierCoefficient:
    k: int
    value: complex


def _merge_atoms(atoms, tol=1e-12):
    merged = []
    for th, m in atoms:
        th = Angle(th).theta
        for i, (th2, m2) in enumerate(merged):
            d = abs(th - th2)
            if min(d, TWO_PI - d) < tol:
                merged[i] = (th2, m2 + m)
                break
        else:
            merged.append((th, m))
    return tuple(merged)


def wrap_law(t: float, params: TelegraphParams, theta0: float = 0.0) -> WrappedLaw:
    """Law of the angle of ``Z(t)`` started at angle ``theta0``."""
    if not t > 0:
        raise ValueError("t must be positive")
    ct = params.c * t
    mass = 0.5 * math.exp(-params.lam * t)
    atoms = _merge_atoms([(theta0 + ct, mass), (theta0 - ct, mass)])
    K = math.ceil(ct / TWO_PI) + 1
    line = lambda y: density_ac(np.asarray(y) - theta0, t, params)
    return WrappedLaw(atoms, line, (theta0 - ct, theta0 + ct), K,
                      {"t": t, "lambda": params.lam, "c": params.c, "theta0": theta0})


def wrap_conditional(n: int, t: float, params: TelegraphParams):
    """Wrapped density of the angle given ``n >= 1`` switches."""
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    ct = params.c * t
    K = math.ceil(ct / TWO_PI) + 1

    def dens(theta):
        th = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        total = sum(conditional_density(th + TWO_PI * k, t, n, params) for k in range(-K, K + 1))
        return total

    return dens


def circular_moment(alpha, t: float, params: TelegraphParams):
    """``E[Z(t)^alpha]`` for ``Z(0) = 1``; the characteristic function at ``alpha``."""
    return char_fn(alpha, t, params)


def _same_and_cross(k, t, params):
    # E_v[e^{ikX(t)} 1{V(t)=v}] = e^{-lam t}[cos(wt) + i sgn(v) c k sinc], and the
    # cross-state weight e^{-lam t} lam sinc, both real-analytic in k
    coslike, sinclike = damped_trig_pair(k * k * params.c**2 - params.lam**2, t, params.lam)
    return coslike, params.c * k * sinclike, params.lam * sinclike


def joint_moment(alpha, beta, t, t_prime, params: TelegraphParams, form: str = "exact"):
    """``E[Z(t)^alpha Z(t')^beta]`` for ``Z(0) = 1``.

    ``form="product"`` is the factorised expression that multiplies the
    moment of order ``alpha + beta`` at ``min(t, t')`` by the moment of order
    ``omega`` over ``|t - t'|``.  It ignores that the velocity at the earlier
    time is correlated with the position there.  ``form="exact"`` conditions
    on that velocity through the per-state transition kernels.
    """
    if t < 0 or t_prime < 0:
        raise ValueError("times must be nonnegative")
    omega = alpha if t > t_prime else beta
    early, gap = min(t, t_prime), abs(t - t_prime)
    prod = char_fn(alpha + beta, early, params) * char_fn(omega, gap, params)
    if form == "product":
        return prod
    if form != "exact":
        raise ValueError(f"unknown form {form!r}")
    # sum over the velocity at the earlier time: 2 Re(A g) with
    # A = E[e^{i kappa X}; V = +] and g = E_+[e^{i omega X}]; the real parts give prod
    _, im_a2, _ = _same_and_cross(alpha + beta, early, params)
    _, im_g, _ = _same_and_cross(omega, gap, params)
    return prod - im_a2 * im_g


def covariance(t, t_prime, params: TelegraphParams, form: str = "exact"):
    """``E[Z(t) Z(t')] - E[Z(t)] E[Z(t')]``."""
    return joint_moment(1.0, 1.0, t, t_prime, params, form) - char_fn(1.0, t, params) * char_fn(
        1.0, t_prime, params
    )


def fourier_coefficient(k: int, t: float, params: TelegraphParams) -> FourierCoefficient:
    if int(k) != k:
        raise ValueError("k must be an integer")
    return FourierCoefficient(int(k), complex(circular_moment(float(k), t, params)))


def reconstruct_probability(a: float, b: float, r: float, K: int, t: float,
                            params: TelegraphParams, atom_tol: float = 1e-9) -> float:
    """Abel-summed Fourier estimate of ``P(angle in [a, b])``.

    The integral over ``[a, b]`` of ``(1 + 2 sum_k phi_k r^k cos k theta)/2 pi``
    is taken in closed form.  Arcs whose endpoints hit an atom are rejected
    because the limit ``r -> 1`` does not recover their probability.
    """
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    if not 0 <= a <= b <= TWO_PI:
        raise ValueError("need 0 <= a <= b <= 2 pi")
    if int(K) != K or K < 1:
        raise ValueError("K must be a positive integer")
    ct = params.c * t
    for atom in (Angle(ct).theta, Angle(-ct).theta):
        for end in (a, b):
            d = abs(end - atom)
            if min(d, TWO_PI - d) < atom_tol:
                raise ValueError("interval endpoint coincides with an atom")
    k = np.arange(1, int(K) + 1, dtype=float)
    phi = np.asarray(char_fn(k, t, params))
    terms = phi * r**k * (np.sin(k * b) - np.sin(k * a)) / k
    return float(((b - a) + 2.0 * np.sum(terms)) / TWO_PI)


def wrapped_tv_to_normal(t: float, params: TelegraphParams, variance_rate: float = 1.0,
                         tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Total variation between the wrapped telegraph law and the wrapped normal.

    The normal has variance ``variance_rate * t``; atoms count fully.
    """
    law = wrap_law(t, params)
    s2 = variance_rate * t
    ct = params.c * t
    breaks = sorted({Angle(ct).theta, Angle(-ct).theta} - {0.0})

    def gap(th):
        return abs(float(law.density(th)) - float(wrapped_normal_density(th, s2)))

    edges = [0.0] + breaks + [TWO_PI]
    total = 0.0
    for lo, hi in zip(edges, edges[1:]):
        val, _ = integrate.quad(gap, lo, hi, limit=400, epsabs=1e-12,
                                epsrel=max(tol.quadrature_rel_tol, 1e-9))
        total += val
    atoms = sum(m for _, m in law.atoms)
    return 0.5 * (total + atoms)


# --------------------------------------------------------------------------
# Circular Brownian motion
# --------------------------------------------------------------------------


def cbm_conditional_factor(t: float, s: float, form: str = "gaussian") -> float:
    """Factor ``E[B(t) | G_s] / B(s)`` for circular Brownian motion, ``t >= s``.

    ``"gaussian"`` is ``exp(-(t-s)/2)`` from the Gaussian characteristic
    function; ``"squared"`` is the alternative ``exp(-(t-s)^2/2)``.
    """
    if t < s:
        raise ValueError("need t >= s")
    if form == "gaussian":
        return math.exp(-(t - s) / 2.0)
    if form == "squared":
        return math.exp(-((t - s) ** 2) / 2.0)
    raise ValueError(f"unknown form {form!r}")


def cbm_joint_moment(alpha, beta, t, t_prime, form: str = "gaussian") -> float:
    """``E[B(t)^alpha B(t')^beta]`` for circular Brownian motion from 1."""
    omega = alpha if t > t_prime else beta
    gap = abs(t - t_prime)
    lead = omega * omega * gap if form == "gaussian" else (omega * gap) ** 2
    if form not in ("gaussian", "squared"):
        raise ValueError(f"unknown form {form!r}")
    return math.exp(-(lead + (alpha + beta) ** 2 * min(t, t_prime)) / 2.0)


def sample_angles(params: TelegraphParams, t: float, size: int, seed=None, theta0: float = 0.0):
    """Angles of ``Z(t)`` in ``[0, 2 pi)`` plus a flag marking no-switch (atom) draws."""
    x, _, n = sample_marginal(params, t, size, seed)
    return np.mod(theta0 + x, TWO_PI), n == 0
