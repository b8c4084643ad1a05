"""Symmetric telegraph process on the line: exact sampling and closed-form law.

The particle starts at the origin with velocity ``V(0) = +-c`` and reverses
direction at the epochs of a Poisson process of rate ``lambda``.  Its law at
time ``t`` has two atoms of mass ``exp(-lambda t)/2`` at ``+-ct`` and a
Bessel-type density on the open interval between them.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    bessel_i0e,
    bessel_i1_over_x_scaled,
    bessel_i1e,
    damped_trig_pair,
    integrate_arc,
)

__all__ = [
    "TelegraphParams",
    "VelocitySign",
    "PathSample",
    "LineLaw",
    "sample_path",
    "position",
    "velocity_at",
    "density_ac",
    "line_law",
    "line_cdf",
    "char_fn",
    "conditional_density",
    "joint_law",
    "sample_marginal",
    "sample_conditional",
]


@dataclass(frozen=True)
class TelegraphParams:
    """Switching rate ``lam`` and speed ``c`` of the symmetric process."""

    lam: float
    c: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lambda must be > 0, got {self.lam}")
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError(f"c must be > 0, got {self.c}")


class VelocitySign(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def of(cls, value) -> "VelocitySign":
        v = int(value)
        if v not in (1, -1):
            raise ValueError(f"velocity sign must be +1 or -1, got {value!r}")
        return cls(v)


@dataclass(frozen=True)
class PathSample:
    """One trajectory stored exactly as its switching epochs.

    ``speeds`` holds the speed in the ``+`` and ``-`` states; both equal ``c``
    for the symmetric process and may differ for the asymmetric one.
    """

    initial_sign: VelocitySign
    event_times: tuple
    horizon: float
    speeds: tuple = field(default=(1.0, 1.0))

    def __post_init__(self):
        object.__setattr__(self, "initial_sign", VelocitySign.of(self.initial_sign))
        times = tuple(float(s) for s in self.event_times)
        object.__setattr__(self, "event_times", times)
        object.__setattr__(self, "speeds", tuple(float(s) for s in self.speeds))
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")
        if times and (times[0] <= 0 or times[-1] >= self.horizon):
            raise ValueError("event times must lie in (0, horizon)")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("event times must be strictly increasing")
        if len(self.speeds) != 2 or min(self.speeds) <= 0:
            raise ValueError("speeds must be two positive reals")

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": 1,
                "initial_sign": int(self.initial_sign),
                "event_times": list(self.event_times),
                "horizon": self.horizon,
                "speeds": list(self.speeds),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "PathSample":
        d = json.loads(text)
        return cls(
            d["initial_sign"], tuple(d["event_times"]), d["horizon"],
            tuple(d.get("speeds", (1.0, 1.0))),
        )


@dataclass(frozen=True)
class LineLaw:
    """Law of ``X(t)``: two atoms plus a density on ``(-ct, ct)``."""

    t: float
    params: TelegraphParams
    atom_plus: tuple
    atom_minus: tuple

    def density(self, x):
        return density_ac(x, self.t, self.params)

    def total_mass(self, tol: ToleranceConfig = DEFAULT_TOL) -> float:
        ct = self.params.c * self.t
        ac = integrate_arc(lambda x: float(self.density(x)), ct, rel_tol=tol.quadrature_rel_tol)
        return self.atom_plus[1] + self.atom_minus[1] + ac


# --------------------------------------------------------------------------
# Paths
# --------------------------------------------------------------------------


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def sample_path(params: TelegraphParams, horizon: float, initial=None, seed=None) -> PathSample:
    """Exact trajectory on ``[0, horizon]`` from exponential inter-arrival times."""
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    rng = _rng(seed)
    if initial is None:
        initial = 1 if rng.random() < 0.5 else -1
    events = []
    s = rng.exponential(1.0 / params.lam)
    while s < horizon:
        events.append(s)
        s += rng.exponential(1.0 / params.lam)
    return PathSample(initial, tuple(events), horizon, (params.c, params.c))


def _check_time(path: PathSample, t: float):
    if not 0 <= t <= path.horizon:
        raise ValueError(f"t={t} outside [0, {path.horizon}]")


def velocity_at(path: PathSample, t: float) -> VelocitySign:
    """Right-continuous velocity sign ``V(0) (-1)^{N(t)}``."""
    _check_time(path, t)
    n = int(np.searchsorted(path.event_times, t, side="right"))
    return VelocitySign(int(path.initial_sign) * (-1) ** n)


def position(path: PathSample, t: float, c: float | None = None) -> float:
    """Integral of the velocity path up to ``t``.

    ``c`` overrides the stored speeds with a common speed, which is how a path
    sampled at unit speed is evaluated at another ``c``.
    """
    _check_time(path, t)
    up, down = (c, c) if c is not None else path.speeds
    knots = [0.0] + [s for s in path.event_times if s < t] + [t]
    sign = int(path.initial_sign)
    x = 0.0
    for a, b in zip(knots, knots[1:]):
        x += (up if sign > 0 else -down) * (b - a)
        sign = -sign
    return x


# --------------------------------------------------------------------------
# Analytic law
# --------------------------------------------------------------------------


def density_ac(x, t: float, params: TelegraphParams):
    """Absolutely continuous part ``mu(x, t)`` of the law of ``X(t)``.

    Zero on and outside ``|x| = ct``; the exponentially scaled Bessel
    functions keep ``exp(-lambda t) I_nu`` finite for large ``lambda t``.
    """
    lam, c = params.lam, params.c
    x = np.asarray(x, dtype=float)
    ct = c * t
    inside = np.abs(x) < ct
    s = np.sqrt(np.where(inside, ct * ct - x * x, 0.0))
    w = lam * s / c
    damp = np.exp(w - lam * t)
    val = 0.5 * lam * damp * (
        np.asarray(bessel_i0e(w)) / c + t * (lam / c) * np.asarray(bessel_i1_over_x_scaled(w))
    )
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def line_law(t: float, params: TelegraphParams) -> LineLaw:
    mass = 0.5 * math.exp(-params.lam * t)
    ct = params.c * t
    return LineLaw(t, params, (ct, mass), (-ct, mass))


def line_cdf(x, t: float, params: TelegraphParams, left: bool = False,
             tol: ToleranceConfig = DEFAULT_TOL):
    """``F_X(x) = P(X(t) <= x)``, or the left limit ``P(X(t) < x)``."""
    ct = params.c * t
    mass = 0.5 * math.exp(-params.lam * t)

    def one(xv):
        if xv < -ct or (left and xv == -ct):
            return 0.0
        if xv > ct or (not left and xv == ct):
            return 1.0
        ac = integrate_arc(lambda y: float(density_ac(y, t, params)), ct, -ct, xv,
                           rel_tol=tol.quadrature_rel_tol)
        return mass + ac

    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        return one(float(arr))
    return np.array([one(float(v)) for v in arr.ravel()]).reshape(arr.shape)


def char_fn(xi, t: float, params: TelegraphParams):
    """``E exp(i xi X(t))``, real by symmetry of the law."""
    xi = np.asarray(xi, dtype=float)
    omega2 = xi * xi * params.c**2 - params.lam**2
    coslike, sinclike = damped_trig_pair(omega2, t, params.lam)
    out = np.asarray(coslike) + params.lam * np.asarray(sinclike)
    return float(out) if out.ndim == 0 else out


def conditional_density(x, t: float, n: int, params: TelegraphParams):
    """Density of ``X(t)`` given ``N(t) = n`` switches, ``n >= 1``."""
    if int(n) != n or n < 1:
        raise ValueError("conditional density requires n >= 1 (n = 0 is atomic)")
    n = int(n)
    ct = params.c * t
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < ct
    u = np.where(inside, 1.0 - (x / ct) ** 2, 0.0)
    if n % 2:
        log_const = gammaln(n + 1) - 2 * gammaln((n + 1) / 2) - n * math.log(2) - math.log(ct)
        power = (n - 1) / 2
    else:
        log_const = (gammaln(n + 1) - gammaln(n / 2 + 1) - gammaln(n / 2)
                     - n * math.log(2) - math.log(ct))
        power = n / 2 - 1
    with np.errstate(divide="ignore"):
        val = np.exp(log_const) * np.where(inside, u, 1.0) ** power
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def joint_law(x, t: float, v_final, v_init, params: TelegraphParams):
    """Sub-probability law of ``(X(t), V(t) = v_final)`` given ``V(0) = v_init``.

    Returns ``(atom, density)`` where ``atom`` is ``(location, mass)`` or
    ``None``.  Equal signs carry the no-switch atom at ``v_init c t``.
    """
    vf, vi = VelocitySign.of(v_final), VelocitySign.of(v_init)
    lam, c = params.lam, params.c
    ct = c * t
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < ct
    s = np.sqrt(np.where(inside, ct * ct - x * x, 0.0))
    w = lam * s / c
    damp = np.exp(w - lam * t)
    pref = lam / (2.0 * c)
    if vf == vi:
        # I_1(w)/s = (lam/c) e^w [e^{-w} I_1(w)/w]
        dens = pref * (ct + x * int(vi)) * (lam / c) * damp * np.asarray(
            bessel_i1_over_x_scaled(w)
        )
        atom = (int(vi) * ct, math.exp(-lam * t))
    else:
        dens = pref * damp * np.asarray(bessel_i0e(w))
        atom = None
    dens = np.where(inside, dens, 0.0)
    return atom, (float(dens) if dens.ndim == 0 else dens)


# --------------------------------------------------------------------------
# Exact marginal sampling
# --------------------------------------------------------------------------


def sample_marginal(params: TelegraphParams, t: float, size: int, seed=None, initial=None):
    """Draw ``(X(t), V(t), N(t))`` exactly without building paths.

    Given ``N(t) = n`` the switching epochs are uniform order statistics, so
    the time spent in the initial direction is ``Beta(n//2 + 1, n - n//2)``
    times ``t``.  ``initial`` fixes ``V(0)``; otherwise it is uniform.
    """
    rng = _rng(seed)
    n = rng.poisson(params.lam * t, size=size)
    if initial is None:
        v0 = np.where(rng.random(size) < 0.5, 1, -1)
    else:
        v0 = np.full(size, int(VelocitySign.of(initial)))
    frac = _occupation_fraction(n, rng)
    x = params.c * t * v0 * (2.0 * frac - 1.0)
    v = v0 * np.where(n % 2 == 0, 1, -1)
    return x, v, n


def _occupation_fraction(n, rng):
    a = n // 2 + 1
    b = n - n // 2
    frac = np.ones(n.shape)
    pos = b > 0
    if np.any(pos):
        frac[pos] = rng.beta(a[pos], b[pos])
    return frac


def sample_conditional(params: TelegraphParams, t: float, n: int, size: int, seed=None):
    """``X(t)`` given ``N(t) = n`` from explicit uniform order statistics."""
    rng = _rng(seed)
    v0 = np.where(rng.random(size) < 0.5, 1, -1)
    if n == 0:
        return params.c * t * v0
    epochs = np.sort(rng.random((size, n)) * t, axis=1)
    knots = np.concatenate([np.zeros((size, 1)), epochs, np.full((size, 1), t)], axis=1)
    gaps = np.diff(knots, axis=1)
    signs = (-1.0) ** np.arange(n + 1)
    return params.c * v0 * (gaps @ signs)
