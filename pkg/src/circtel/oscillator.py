"""Harmonic components ``Z1 = cos X(t)`` and ``Z2 = sin X(t)``.

Their laws are push-forwards of the line law under ``cos`` and ``sin``:
CDFs are finite sums of line-CDF increments over the preimage arcs, and the
densities carry the ``1/sqrt(1 - x^2)`` Jacobian.  The module also holds an
Euler-Maruyama integrator for the limiting pair ``(sin B, cos B)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, stats

from .numerics import DEFAULT_TOL, ToleranceConfig
from .telegraph_core import TelegraphParams, density_ac, line_cdf, sample_marginal

TWO_PI = 2.0 * math.pi

__all__ = [
    "OscillatorLaw",
    "SDEState",
    "DiffusionPath",
    "z1_cdf",
    "z2_cdf",
    "z1_law",
    "z2_law",
    "simulate_diffusion",
    "em_strong_errors",
    "oscillator_convergence_check",
]


@dataclass(frozen=True)
class OscillatorLaw:
    atoms: tuple
    density: Callable
    component: str
    t: float

    def total_mass(self, tol: ToleranceConfig = DEFAULT_TOL) -> float:
        # x = cos u (or sin u) cancels the Jacobian singularity at +-1
        if self.component == "Z1":
            g = lambda u: float(self.density(math.cos(u))) * math.sin(u)
            lo, hi = 0.0, math.pi
        else:
            g = lambda u: float(self.density(math.sin(u))) * math.cos(u)
            lo, hi = -0.5 * math.pi, 0.5 * math.pi
        val, _ = integrate.quad(g, lo, hi, limit=400, epsabs=1e-13,
                                epsrel=tol.quadrature_rel_tol)
        return val + sum(m for _, m in self.atoms)


@dataclass(frozen=True)
class SDEState:
    y: float
    v: float
    time: float


def _k_range(ct):
    return range(math.floor((-ct - TWO_PI) / TWO_PI) - 1, math.ceil(ct / TWO_PI) + 2)


def _closed_mass(a, b, t, params, tol):
    """``P(a <= X(t) <= b)`` from the line CDF and its left limit."""
    ct = params.c * t
    # arc endpoints are computed through arcsin/arccos; snap rounding-level
    # misses onto the atom locations so closed arcs keep their atoms
    eps = 64 * np.finfo(float).eps * max(1.0, ct)
    a = next((e for e in (-ct, ct) if abs(a - e) < eps), a)
    b = next((e for e in (-ct, ct) if abs(b - e) < eps), b)
    if b < -ct or a > ct or b < a:
        return 0.0
    return float(line_cdf(b, t, params, tol=tol)) - float(line_cdf(a, t, params, left=True, tol=tol))


def _check_unit(x):
    if not -1.0 <= x <= 1.0:
        raise ValueError("x must lie in [-1, 1]")


def z1_cdf(x: float, t: float, params: TelegraphParams, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """``P(cos X(t) <= x)``: line mass of the arcs ``[arccos x + 2k pi, (2k+2) pi - arccos x]``."""
    _check_unit(x)
    if not t > 0:
        raise ValueError("t must be positive")
    if x == 1.0:
        return 1.0
    a = math.acos(x)
    return sum(
        _closed_mass(a + TWO_PI * k, TWO_PI * (k + 1) - a, t, params, tol)
        for k in _k_range(params.c * t)
    )


def z2_cdf(x: float, t: float, params: TelegraphParams, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """``P(sin X(t) <= x)``: line mass of ``[(2k+1) pi - arcsin x, (2k+2) pi + arcsin x]``."""
    _check_unit(x)
    if not t > 0:
        raise ValueError("t must be positive")
    if x == 1.0:
        return 1.0
    b = math.asin(x)
    return sum(
        _closed_mass(math.pi * (2 * k + 1) - b, TWO_PI * (k + 1) + b, t, params, tol)
        for k in _k_range(params.c * t)
    )


def _merge(atoms, tol=1e-12):
    out = []
    for loc, m in atoms:
        for i, (l2, m2) in enumerate(out):
            if abs(loc - l2) < tol:
                out[i] = (l2, m2 + m)
                break
        else:
            out.append((loc, m))
    return tuple(out)


def z1_law(t: float, params: TelegraphParams) -> OscillatorLaw:
    """Atom ``exp(-lam t)`` at ``cos(ct)`` plus the wrapped density with Jacobian."""
    if not t > 0:
        raise ValueError("t must be positive")
    ct = params.c * t
    ks = _k_range(ct)

    def density(x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < 1
        xs = np.where(inside, x, 0.0)
        a = np.arccos(xs)
        total = sum(density_ac(TWO_PI * (k + 1) - a, t, params) + density_ac(a + TWO_PI * k, t, params)
                    for k in ks)
        out = np.where(inside, total / np.sqrt(1.0 - xs * xs), 0.0)
        return float(out) if out.ndim == 0 else out

    return OscillatorLaw(((math.cos(ct), math.exp(-params.lam * t)),), density, "Z1", t)


def z2_law(t: float, params: TelegraphParams) -> OscillatorLaw:
    """Atoms ``exp(-lam t)/2`` at ``+-sin(ct)`` plus the density with Jacobian."""
    if not t > 0:
        raise ValueError("t must be positive")
    ct = params.c * t
    ks = _k_range(ct)

    def density(x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < 1
        xs = np.where(inside, x, 0.0)
        b = np.arcsin(xs)
        total = sum(density_ac(b + TWO_PI * k, t, params)
                    + density_ac(math.pi * (2 * k + 1) - b, t, params) for k in ks)
        out = np.where(inside, total / np.sqrt(1.0 - xs * xs), 0.0)
        return float(out) if out.ndim == 0 else out

    half = 0.5 * math.exp(-params.lam * t)
    atoms = _merge([(math.sin(ct), half), (-math.sin(ct), half)])
    return OscillatorLaw(atoms, density, "Z2", t)


# --------------------------------------------------------------------------
# Diffusion approximation
# --------------------------------------------------------------------------


@dataclass
class DiffusionPath:
    """Euler-Maruyama path and the exact ``(sin B, cos B)`` driven by the same noise."""

    time: np.ndarray
    y_em: np.ndarray
    v_em: np.ndarray
    y_exact: np.ndarray
    v_exact: np.ndarray

    def state(self, k: int) -> SDEState:
        return SDEState(float(self.y_em[k]), float(self.v_em[k]), float(self.time[k]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["time", "y_em", "v_em", "y_exact", "v_exact"])
        for row in zip(self.time, self.y_em, self.v_em, self.y_exact, self.v_exact):
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def _em_from_increments(dB, h):
    # dB has shape (paths, steps)
    m, n = dB.shape
    y = np.zeros((m, n + 1))
    v = np.ones((m, n + 1))
    for k in range(n):
        y[:, k + 1] = y[:, k] - 0.5 * y[:, k] * h + v[:, k] * dB[:, k]
        v[:, k + 1] = v[:, k] - 0.5 * v[:, k] * h - y[:, k] * dB[:, k]
    B = np.concatenate([np.zeros((m, 1)), np.cumsum(dB, axis=1)], axis=1)
    return y, v, np.sin(B), np.cos(B)


def simulate_diffusion(horizon: float, h: float, seed=None, increments=None) -> DiffusionPath:
    """Euler-Maruyama for ``dY = -Y/2 dt + V dB``, ``dV = -V/2 dt - Y dB`` from ``(0, 1)``."""
    if not h > 0:
        raise ValueError("h must be positive")
    n = int(round(horizon / h))
    if increments is None:
        rng = np.random.default_rng(seed)
        increments = rng.normal(0.0, math.sqrt(h), n)
    dB = np.asarray(increments, dtype=float)[None, :]
    y, v, ye, ve = _em_from_increments(dB, h)
    return DiffusionPath(np.arange(dB.shape[1] + 1) * h, y[0], v[0], ye[0], ve[0])


def em_strong_errors(horizon: float, steps, paths: int, seed=None):
    """Mean over paths of ``max_k |EM - exact|`` for each step size.

    ``steps`` are step sizes whose ratios to the finest are integers; the
    coarse increments are sums of the finest ones, so every level sees the
    same Brownian path.
    """
    steps = sorted(steps)
    fine = steps[0]
    n_fine = int(round(horizon / fine))
    rng = np.random.default_rng(seed)
    dB = rng.normal(0.0, math.sqrt(fine), (paths, n_fine))
    errors = {}
    for h in steps:
        r = int(round(h / fine))
        coarse = dB.reshape(paths, n_fine // r, r).sum(axis=2)
        y, v, ye, ve = _em_from_increments(coarse, h)
        err = np.sqrt((y - ye) ** 2 + (v - ve) ** 2).max(axis=1)
        errors[h] = (float(err.mean()), float(err.std(ddof=1) / math.sqrt(paths)))
    return errors


def oscillator_convergence_check(n_ladder, t: float, params: TelegraphParams, samples: int,
                                 seed=None):
    """Two-sample KS distances of ``cos``/``sin`` of the rescaled process vs ``B(t)``.

    The process is ``sigma_n X(n t)`` with ``sigma_n = sqrt(lam/n)/c``; the
    reference ``B(t)`` is sampled as a Gaussian.
    """
    rng = np.random.default_rng(seed)
    out = []
    for n in n_ladder:
        if t == 0:
            out.append({"n": n, "ks_cos": 0.0, "ks_sin": 0.0, "samples": samples})
            continue
        sigma = math.sqrt(params.lam / n) / params.c
        x, _, _ = sample_marginal(params, n * t, samples, rng)
        b = rng.normal(0.0, math.sqrt(t), samples)
        ks_cos = stats.ks_2samp(np.cos(sigma * x), np.cos(b)).statistic
        ks_sin = stats.ks_2samp(np.sin(sigma * x), np.sin(b)).statistic
        out.append({"n": n, "ks_cos": float(ks_cos), "ks_sin": float(ks_sin), "samples": samples})
    return out
