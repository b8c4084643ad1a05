"""Asymmetric telegraph process: speeds ``c1`` (forward) and ``c2`` (backward),
switching rates ``lam1`` out of the forward state and ``lam2`` out of the
backward one.

Conventions fixed by Monte Carlo (see the harness checks
``asymmetric.atom_pairing`` and ``asymmetric.generator_sign``):

* a path that never switches ends at ``+c1 t`` with probability
  ``exp(-lam1 t)/2`` and at ``-c2 t`` with probability ``exp(-lam2 t)/2``
  (``pairing="physical"``); the swapped assignment is ``pairing="alternate"``;
* the transport term of the generator in the backward state is
  ``-i z c2 f'`` (``sign="derived"``); ``sign="alternate"`` flips it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .circular import TWO_PI, WrappedLaw, _merge_atoms
from .numerics import bessel_i0e, bessel_i1_over_x_scaled, wrapped_normal_density
from .renewal import exponential_gaps, simulate_renewal
from .semigroup import AnalyticPair, _as_z, _check_inside
from .telegraph_core import PathSample, TelegraphParams, VelocitySign, _rng

__all__ = [
    "AsymmetricParams",
    "KacLimitParams",
    "sample_asym_path",
    "sample_asym",
    "asym_density",
    "asym_atoms",
    "asym_wrap",
    "asym_generator_apply",
    "asym_pde_residual",
    "asym_kac_limit_check",
]

PAIRINGS = ("physical", "alternate")


@dataclass(frozen=True)
class AsymmetricParams:
    c1: float
    c2: float
    lam1: float
    lam2: float

    def __post_init__(self):
        for name in ("c1", "c2", "lam1", "lam2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be > 0, got {v}")

    @classmethod
    def symmetric(cls, params: TelegraphParams) -> "AsymmetricParams":
        return cls(params.c, params.c, params.lam, params.lam)

    @property
    def is_symmetric(self) -> bool:
        return self.c1 == self.c2 and self.lam1 == self.lam2


@dataclass(frozen=True)
class KacLimitParams:
    """Scaling family ``lam1 = s nu2``, ``lam2 = s`` with a drift ``delta``.

    Speeds are ``c2 = sigma2 sqrt(lam2)`` and
    ``c1 = sigma1 sqrt(lam1) + delta (1 + nu2)``, which makes
    ``(lam2 c1 - lam1 c2)/(lam1 + lam2) = delta`` for every ``s``.  That
    requires ``sigma1 = sqrt(nu2) sigma2``; otherwise the drift grows like
    ``sqrt(s)``.
    """

    nu2: float
    sigma1: float
    sigma2: float
    delta: float = 0.0

    def __post_init__(self):
        if not (self.nu2 > 0 and self.sigma1 > 0 and self.sigma2 > 0):
            raise ValueError("nu2, sigma1, sigma2 must be positive")
        if not math.isclose(self.sigma1, math.sqrt(self.nu2) * self.sigma2, rel_tol=1e-12):
            raise ValueError("finite drift needs sigma1 = sqrt(nu2) * sigma2")

    @property
    def sigma(self) -> float:
        s1, s2 = self.sigma1, self.sigma2
        return s1 * s2 / math.sqrt(0.5 * (s1 * s1 + s2 * s2))

    def family(self, s: float) -> AsymmetricParams:
        lam1, lam2 = s * self.nu2, s
        c1 = self.sigma1 * math.sqrt(lam1) + self.delta * (1.0 + self.nu2)
        c2 = self.sigma2 * math.sqrt(lam2)
        return AsymmetricParams(c1, c2, lam1, lam2)


def sample_asym_path(params: AsymmetricParams, horizon: float, initial=None, seed=None) -> PathSample:
    """Exact path with state-dependent exponential holding times."""
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    rng = _rng(seed)
    if initial is None:
        initial = 1 if rng.random() < 0.5 else -1
    state = int(VelocitySign.of(initial))
    events = []
    s = 0.0
    while True:
        s += rng.exponential(1.0 / (params.lam1 if state > 0 else params.lam2))
        if s >= horizon:
            break
        events.append(s)
        state = -state
    return PathSample(initial, tuple(events), horizon, (params.c1, params.c2))


def sample_asym(params: AsymmetricParams, times, size: int, seed=None, initial=None):
    """``(X, state, N)`` at ``times`` for ``size`` paths, arrays ``(size, len(times))``."""
    return simulate_renewal(
        times, size, exponential_gaps(params.lam1, params.lam2), (params.c1, params.c2),
        rng=_rng(seed), initial=initial,
    )


def _pieces(x, t, params: AsymmetricParams):
    c1, c2, l1, l2 = params.c1, params.c2, params.lam1, params.lam2
    x = np.asarray(x, dtype=float)
    inside = (x > -c2 * t) & (x < c1 * t)
    g = np.where(inside, (x + c2 * t) * (c1 * t - x), 0.0)
    A = 2.0 * math.sqrt(l1 * l2) / (c1 + c2)
    w = A * np.sqrt(g)
    E = -0.5 * (l1 + l2) * t + (l2 - l1) * x / (c1 + c2) + (l2 - l1) * (c2 - c1) * t / (2 * (c1 + c2))
    return x, inside, g, A, w, E


def asym_density(x, t: float, params: AsymmetricParams):
    """Absolutely continuous part on ``-c2 t < x < c1 t``.

    The time and space derivatives of ``I0(w)`` are expanded through
    ``I0' = I1`` and ``I1(w) A/(2 sqrt g) = (A^2/2) I1(w)/w``, so the whole
    expression stays in exponentially scaled Bessel form.
    """
    c1, c2, l1, l2 = params.c1, params.c2, params.lam1, params.lam2
    x, inside, g, A, w, E = _pieces(x, t, params)
    dg_t = 2.0 * c1 * c2 * t + (c1 - c2) * x
    dg_x = (c1 - c2) * t - 2.0 * x
    bracket = 0.5 * (l1 + l2) * np.asarray(bessel_i0e(w)) + 0.5 * A * A * np.asarray(
        bessel_i1_over_x_scaled(w)
    ) * (dg_t - 0.5 * (c2 - c1) * dg_x)
    val = np.exp(np.where(inside, E + w, -np.inf)) * bracket / (c1 + c2)
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def asym_atoms(t: float, params: AsymmetricParams, pairing: str = "physical"):
    """No-switch atoms as ``((location, mass), (location, mass))``."""
    if pairing not in PAIRINGS:
        raise ValueError(f"pairing must be one of {PAIRINGS}")
    m1 = 0.5 * math.exp(-params.lam1 * t)
    m2 = 0.5 * math.exp(-params.lam2 * t)
    if pairing == "physical":
        return ((params.c1 * t, m1), (-params.c2 * t, m2))
    return ((params.c1 * t, m2), (-params.c2 * t, m1))


def asym_wrap(t: float, params: AsymmetricParams, pairing: str = "physical") -> WrappedLaw:
    if not t > 0:
        raise ValueError("t must be positive")
    atoms = _merge_atoms(list(asym_atoms(t, params, pairing)))
    reach = max(params.c1, params.c2) * t
    K = math.ceil(reach / TWO_PI) + 1
    return WrappedLaw(atoms, lambda y: asym_density(y, t, params), (-params.c2 * t, params.c1 * t), K,
                      {"t": t, "c1": params.c1, "c2": params.c2, "lambda1": params.lam1,
                       "lambda2": params.lam2, "pairing": pairing})


def asym_generator_apply(f: AnalyticPair, z, state, params: AsymmetricParams,
                         sign: str = "derived") -> complex:
    """Generator on ``f(z, +)`` (speed ``c1``) and ``f(z, -)`` (speed ``-c2``)."""
    z = _as_z(z)
    _check_inside(z)
    st = int(VelocitySign.of(state))
    fp, fm = f(z, +1), f(z, -1)
    if st > 0:
        return 1j * z * params.c1 * f.derivative(z, +1) + params.lam1 * (fm - fp)
    if sign == "derived":
        transport = -1j * z * params.c2 * f.derivative(z, -1)
    elif sign == "alternate":
        transport = 1j * z * params.c2 * f.derivative(z, -1)
    else:
        raise ValueError("sign must be 'derived' or 'alternate'")
    return transport + params.lam2 * (fp - fm)


def asym_pde_residual(t: float, xs, params: AsymmetricParams, h: float = 1e-3):
    """Second-order finite-difference residual of the hyperbolic equation.

    ``mu_tt - c1 c2 mu_xx - (c2 - c1) mu_tx + (lam1 + lam2) mu_t
    - [(c2 - c1)(lam1 + lam2) - (lam2 - lam1)(c1 + c2)]/2 mu_x``
    evaluated at interior points ``xs``.
    """
    xs = np.asarray(xs, dtype=float)
    lo, hi = -params.c2 * (t - h), params.c1 * (t - h)
    if np.any(xs - h <= lo) or np.any(xs + h >= hi):
        raise ValueError("grid points must stay inside the support by more than h")
    return _pde_stencil(t, xs, params, h)


def _pde_stencil(t, xs, params: AsymmetricParams, h):
    # no support guard: a stencil reaching past -c2 t or c1 t sees the jump to 0
    c1, c2, l1, l2 = params.c1, params.c2, params.lam1, params.lam2
    xs = np.asarray(xs, dtype=float)
    mu = lambda x, s: np.asarray(asym_density(x, s, params))
    m0 = mu(xs, t)
    mt_p, mt_m = mu(xs, t + h), mu(xs, t - h)
    mx_p, mx_m = mu(xs + h, t), mu(xs - h, t)
    mu_t = (mt_p - mt_m) / (2 * h)
    mu_x = (mx_p - mx_m) / (2 * h)
    mu_tt = (mt_p - 2 * m0 + mt_m) / h**2
    mu_xx = (mx_p - 2 * m0 + mx_m) / h**2
    mu_tx = (mu(xs + h, t + h) - mu(xs - h, t + h) - mu(xs + h, t - h) + mu(xs - h, t - h)) / (4 * h * h)
    drift = 0.5 * ((c2 - c1) * (l1 + l2) - (l2 - l1) * (c1 + c2))
    return mu_tt - (c1 * c2 * mu_xx + (c2 - c1) * mu_tx - (l1 + l2) * mu_t + drift * mu_x)


def asym_kac_limit_check(kac: KacLimitParams, scales, t: float, samples: int, seed=None,
                         bins: int = 32):
    """Per scale: KS to ``N(delta t, sigma^2 t)``, wrapped TV, and the mean of ``X(t)/t``."""
    rng = _rng(seed)
    sigma, delta = kac.sigma, kac.delta
    edges = np.linspace(0.0, TWO_PI, bins + 1)
    # wrapped drifted normal, integrated per bin
    fine = np.linspace(0.0, TWO_PI, 64 * bins + 1)
    dens = wrapped_normal_density(np.mod(fine - delta * t, TWO_PI), sigma * sigma * t)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(fine))])
    bin_mass = np.diff(cum[:: 64])
    out = []
    for s in scales:
        p = kac.family(s)
        x = sample_asym(p, [t], samples, rng)[0][:, 0]
        ks = stats.kstest(x, "norm", args=(delta * t, sigma * math.sqrt(t))).statistic
        hist = np.histogram(np.mod(x, TWO_PI), bins=edges)[0] / samples
        tv = 0.5 * float(np.abs(hist - bin_mass).sum())
        m = x / t
        out.append({
            "scale": s, "ks": float(ks), "wrapped_tv": tv, "mean_rate": float(m.mean()),
            "mean_se": float(m.std(ddof=1) / math.sqrt(samples)), "samples": samples,
        })
    return out
