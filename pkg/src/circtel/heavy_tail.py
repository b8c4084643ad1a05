"""Telegraph motion with Pareto holding times, stable samplers and the
circular stable limits.

Two normalisations of the totally skewed stable law appear:

``"cf"``
    characteristic function ``exp(-t |u|^a (1 - i sgn(u) tan(pi a / 2)))``;
``"laplace"`` (``0 < a < 1`` only)
    Laplace transform ``E exp(-s U(t)) = exp(-t s^a)``.

They differ by the factor ``cos(pi a / 2)^(1/a)`` in scale.  The
Mittag-Leffler identity for the inverse subordinator and the Brownian
subordination identity for the circular stable law both hold in the Laplace
normalisation, which is therefore the default for subordinators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn

from .circular import TWO_PI
from .numerics import DEFAULT_TOL, ConvergenceError, ToleranceConfig, mittag_leffler
from .renewal import pareto_gaps, simulate_renewal
from .telegraph_core import PathSample, _rng

__all__ = [
    "HeavyTailParams",
    "StablePath",
    "sample_stable_path",
    "sample_heavy_path",
    "sample_heavy",
    "sample_one_sided_stable",
    "sample_symmetric_stable",
    "sample_inverse_subordinator",
    "inverse_subordinator_paths",
    "circular_stable_density",
    "circular_stable_bin_masses",
    "stable_fourier_coefficient",
    "limit_moment_subdiffusive",
    "limit_moment_superdiffusive",
    "joint_limit_moment",
    "sample_subordinated_stable",
    "sample_subordinated_brownian",
    "scaling_limit_check",
]

A_N_CONVENTIONS = ("derived", "alternate")


def _check_alpha(alpha, lo=0.0, hi=2.0):
    if not (lo < alpha < hi) or alpha == 1.0:
        raise ValueError(f"alpha must lie in ({lo}, {hi}) and differ from 1, got {alpha}")


@dataclass(frozen=True)
class HeavyTailParams:
    """Pareto holding times ``P(D > x) = (x / pareto_scale)^(-alpha)``."""

    alpha: float
    pareto_scale: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        _check_alpha(self.alpha)
        if not self.pareto_scale > 0:
            raise ValueError("pareto_scale must be positive")
        if not self.c > 0:
            raise ValueError("c must be positive")

    @property
    def mean_gap(self) -> float:
        if self.alpha < 1:
            return math.inf
        return self.alpha * self.pareto_scale / (self.alpha - 1.0)

    @property
    def tail_constant(self) -> float:
        """``Gamma(2 - a) |cos(pi a / 2)| / (a - 1)``."""
        a = self.alpha
        return gamma_fn(2.0 - a) * abs(math.cos(math.pi * a / 2)) / (a - 1.0)

    def a_n(self, n: float, convention: str = "derived") -> float:
        """Normalising sequence for ``1 < alpha < 2`` with ``h = pareto_scale^alpha``.

        ``"derived"`` solves ``a_n^alpha = n h C`` with ``C`` the tail constant,
        the scaling under which the alternating sum has characteristic
        function ``exp(-(t/mu)|u|^alpha)``.  ``"alternate"`` solves
        ``n h / a_n^alpha = C``, which yields ``exp(-(t/mu) C^2 |u|^alpha)``.
        """
        if not 1 < self.alpha < 2:
            raise ValueError("a_n is defined for 1 < alpha < 2")
        h = self.pareto_scale**self.alpha
        C = self.tail_constant
        if convention == "derived":
            return (n * h * C) ** (1.0 / self.alpha)
        if convention == "alternate":
            return (n * h / C) ** (1.0 / self.alpha)
        raise ValueError(f"convention must be one of {A_N_CONVENTIONS}")


@dataclass(frozen=True)
class StablePath:
    """A path of ``U`` (one-sided), ``S`` (symmetric) or ``L`` (inverse) on a lattice."""

    kind: str
    alpha: float
    grid: np.ndarray
    values: np.ndarray

    def __call__(self, t):
        if self.kind == "inverse":
            # piecewise-constant lattice values, right-continuous
            idx = np.searchsorted(self.grid, t, side="right") - 1
            return self.values[np.clip(idx, 0, len(self.values) - 1)]
        return np.interp(t, self.grid, self.values)


def sample_heavy_path(params: HeavyTailParams, horizon: float, seed=None, initial=None) -> PathSample:
    """Exact path with i.i.d. Pareto holding times."""
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    rng = _rng(seed)
    if initial is None:
        initial = 1 if rng.random() < 0.5 else -1
    events = []
    s = params.pareto_scale * (1.0 - rng.random()) ** (-1.0 / params.alpha)
    while s < horizon:
        events.append(s)
        s += params.pareto_scale * (1.0 - rng.random()) ** (-1.0 / params.alpha)
    return PathSample(initial, tuple(events), horizon, (params.c, params.c))


def sample_heavy(params: HeavyTailParams, times, size: int, seed=None, initial=None):
    return simulate_renewal(times, size, pareto_gaps(params.alpha, params.pareto_scale),
                            (params.c, params.c), rng=_rng(seed), initial=initial)


# --------------------------------------------------------------------------
# Stable samplers
# --------------------------------------------------------------------------


def _cms_skewed(alpha, size, rng):
    """Chambers-Mallows-Stuck draw with ``E e^{iuX} = exp(-|u|^a (1 - i sgn(u) tan(pi a/2)))``."""
    v = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size)
    w = rng.standard_exponential(size)
    tan_a = math.tan(0.5 * math.pi * alpha)
    xi = math.atan(tan_a) / alpha
    scale = (1.0 + tan_a * tan_a) ** (0.5 / alpha)
    shifted = alpha * (v + xi)
    return (
        scale * np.sin(shifted) / np.cos(v) ** (1.0 / alpha)
        * (np.cos(v - shifted) / w) ** ((1.0 - alpha) / alpha)
    )


def _scale_factor(alpha, t, normalization):
    if normalization == "cf":
        return t ** (1.0 / alpha)
    if normalization == "laplace":
        if not 0 < alpha < 1:
            raise ValueError("Laplace normalisation needs 0 < alpha < 1")
        return (t * math.cos(0.5 * math.pi * alpha)) ** (1.0 / alpha)
    raise ValueError("normalization must be 'cf' or 'laplace'")


def sample_one_sided_stable(alpha: float, t: float, size=None, seed=None, normalization: str = "cf"):
    """Totally skewed stable variable at time ``t`` (exact CMS transform)."""
    _check_alpha(alpha)
    if t < 0:
        raise ValueError("t must be nonnegative")
    rng = _rng(seed)
    n = 1 if size is None else size
    out = _scale_factor(alpha, t, normalization) * _cms_skewed(alpha, n, rng) if t > 0 else np.zeros(n)
    return float(out[0]) if size is None else out


def sample_symmetric_stable(alpha: float, t: float, size=None, seed=None):
    """``S(t) = S1(t/2) - S2(t/2)`` with characteristic function ``exp(-t|u|^alpha)``."""
    _check_alpha(alpha)
    rng = _rng(seed)
    n = 1 if size is None else size
    a = sample_one_sided_stable(alpha, 0.5 * t, n, rng)
    b = sample_one_sided_stable(alpha, 0.5 * t, n, rng)
    out = a - b
    return float(out[0]) if size is None else out


def sample_inverse_subordinator(alpha: float, t: float, size=None, seed=None,
                                normalization: str = "laplace"):
    """``L(t) = inf{s : U(s) > t}`` via ``L(t) = (t / U(1))^alpha`` in law."""
    _check_alpha(alpha, 0.0, 1.0)
    if t < 0:
        raise ValueError("t must be nonnegative")
    rng = _rng(seed)
    n = 1 if size is None else size
    u1 = sample_one_sided_stable(alpha, 1.0, n, rng, normalization)
    out = (t / u1) ** alpha if t > 0 else np.zeros(n)
    return float(out[0]) if size is None else out


def inverse_subordinator_paths(alpha: float, times, size: int, du: float = 1e-2, seed=None,
                               normalization: str = "laplace", return_subordinator_at=None):
    """First-passage levels of lattice subordinator paths, jointly in ``times``.

    ``U`` is simulated exactly on the lattice ``k du``; ``L(t)`` is the first
    lattice level at which ``U`` exceeds ``t``, so ``L(t) > s`` exactly when
    ``U(s) <= t`` for lattice ``s``.  ``return_subordinator_at`` (lattice
    levels) additionally returns ``U`` there along the same paths.
    """
    _check_alpha(alpha, 0.0, 1.0)
    rng = _rng(seed)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    top = float(times.max())
    inc_scale = _scale_factor(alpha, du, normalization)
    L = np.full((size, len(times)), np.nan)
    levels = None if return_subordinator_at is None else np.atleast_1d(return_subordinator_at)
    U_at = None if levels is None else np.full((size, len(levels)), np.nan)
    lvl_idx = None if levels is None else np.rint(levels / du).astype(int)
    width = 512
    rows = max(1, 1_000_000 // width)
    for lo in range(0, size, rows):
        hi = min(size, lo + rows)
        m = hi - lo
        level = np.zeros(m)
        offset = 0
        pending = np.arange(m)
        while pending.size:
            inc = inc_scale * _cms_skewed(alpha, (pending.size, width), rng)
            path = level[pending][:, None] + np.cumsum(inc, axis=1)
            for j, tj in enumerate(times):
                need = np.isnan(L[lo + pending, j])
                crossed = path[:, -1] > tj
                sel = need & crossed
                if np.any(sel):
                    first = np.argmax(path[sel] > tj, axis=1)
                    L[lo + pending[sel], j] = (offset + first + 1) * du
            if U_at is not None:
                for j, k in enumerate(lvl_idx):
                    col = k - offset - 1
                    if 0 <= col < width:
                        U_at[lo + pending, j] = path[:, col] if k > 0 else 0.0
                    elif k == 0:
                        U_at[lo + pending, j] = 0.0
            level[pending] = path[:, -1]
            offset += width
            done_L = ~np.isnan(L[lo + pending]).any(axis=1) & (level[pending] > top)
            if U_at is not None:
                done_L &= ~np.isnan(U_at[lo + pending]).any(axis=1)
            pending = pending[~done_L]
    return (L, U_at) if U_at is not None else L


def sample_stable_path(kind: str, alpha: float, horizon: float, step: float = 1e-2, seed=None,
                       normalization: str | None = None) -> StablePath:
    """Lattice path of ``U`` (``"one_sided"``), ``S`` (``"symmetric"``) or ``L`` (``"inverse"``).

    ``U`` and ``S`` are cumulative sums of exact increments over steps of
    ``step``.  ``L`` is tabulated on the time grid of spacing ``step`` by first
    passage of a subordinator lattice path with level spacing ``step``.
    ``normalization`` defaults to ``"laplace"`` when ``alpha < 1`` and to
    ``"cf"`` otherwise.
    """
    if not horizon > 0 or not step > 0:
        raise ValueError("horizon and step must be positive")
    rng = _rng(seed)
    n = max(1, int(math.ceil(horizon / step)))
    grid = np.arange(n + 1) * step
    if normalization is None:
        normalization = "laplace" if alpha < 1 else "cf"
    if kind == "one_sided":
        inc = sample_one_sided_stable(alpha, step, n, rng, normalization)
    elif kind == "symmetric":
        inc = sample_symmetric_stable(alpha, step, n, rng)
    elif kind == "inverse":
        L = inverse_subordinator_paths(alpha, grid[1:], 1, du=step, seed=rng, normalization=normalization)
        return StablePath(kind, alpha, grid, np.concatenate([[0.0], L[0]]))
    else:
        raise ValueError("kind must be 'one_sided', 'symmetric' or 'inverse'")
    return StablePath(kind, alpha, grid, np.concatenate([[0.0], np.cumsum(inc)]))


# --------------------------------------------------------------------------
# Circular stable law and limit moments
# --------------------------------------------------------------------------


def _stable_terms(t, alpha, tol):
    if not t > 0:
        raise ValueError("t must be positive")
    kmax = math.ceil((-math.log(tol.series_abs_tol) / t) ** (1.0 / alpha))
    if kmax > 100 * tol.max_terms:
        raise ConvergenceError(f"circular stable series needs {kmax} terms at t={t}")
    k = np.arange(1, max(kmax, 1) + 1, dtype=float)
    return k, np.exp(-(k**alpha) * t)


def stable_fourier_coefficient(k, t: float, alpha: float):
    """Fourier coefficient ``exp(-|k|^alpha t)`` of the circular stable law."""
    return np.exp(-np.abs(np.asarray(k, dtype=float)) ** alpha * t)


def circular_stable_density(theta, t: float, alpha: float, tol: ToleranceConfig = DEFAULT_TOL):
    """``1/(2 pi) + (1/pi) sum_k exp(-k^alpha t) cos(k theta)``."""
    k, w = _stable_terms(t, alpha, tol)
    th = np.asarray(theta, dtype=float)
    out = 1.0 / TWO_PI + np.tensordot(np.cos(np.multiply.outer(th, k)), w, axes=([-1], [0])) / math.pi
    return float(out) if np.ndim(out) == 0 else out


def circular_stable_bin_masses(edges, t: float, alpha: float, tol: ToleranceConfig = DEFAULT_TOL):
    """Exact masses of arcs ``[edges[i], edges[i+1]]`` under the circular stable law."""
    k, w = _stable_terms(t, alpha, tol)
    edges = np.asarray(edges, dtype=float)
    prim = edges / TWO_PI + (np.sin(np.multiply.outer(edges, k)) / k) @ w / math.pi
    return np.diff(prim)


def limit_moment_subdiffusive(q: float, t: float, alpha: float, tol: ToleranceConfig = DEFAULT_TOL):
    """``E[S(L(t))^q] = E_alpha(-q^alpha t^alpha)`` for ``0 < alpha < 1``."""
    _check_alpha(alpha, 0.0, 1.0)
    if q < 0 or t < 0:
        raise ValueError("q and t must be nonnegative")
    return float(mittag_leffler(alpha, -(q**alpha) * t**alpha, tol))


def limit_moment_superdiffusive(q: float, t: float, alpha: float) -> float:
    """``E[S(t)^q] = exp(-t q^alpha)`` for ``1 < alpha < 2``."""
    _check_alpha(alpha, 1.0, 2.0)
    if q < 0 or t < 0:
        raise ValueError("q and t must be nonnegative")
    return math.exp(-t * q**alpha)


def _two_time_exponent(q1, q2, a, b, alpha):
    # a plays the role of the first time, b of the second
    eta = np.where(a > b, q1, q2)
    return np.exp(-(eta**alpha) * np.maximum(a, b) - ((q1 + q2) ** alpha - eta**alpha) * np.minimum(a, b))


def joint_limit_moment(q1, q2, t, s, alpha, L_pairs=None):
    """Two-time moment of the limit process.

    For ``1 < alpha < 2`` the closed form in ``(t, s)``.  For
    ``0 < alpha < 1`` the same expression averaged over joint draws
    ``L_pairs = (L(t), L(s))``; returns ``(mean, standard error)``.
    """
    if q1 < 0 or q2 < 0 or t < 0 or s < 0:
        raise ValueError("arguments must be nonnegative")
    if 1 < alpha < 2:
        return float(_two_time_exponent(q1, q2, np.float64(t), np.float64(s), alpha))
    _check_alpha(alpha, 0.0, 1.0)
    if L_pairs is None:
        raise ValueError("0 < alpha < 1 needs joint draws of (L(t), L(s))")
    Lt, Ls = (np.asarray(a, dtype=float) for a in L_pairs)
    vals = _two_time_exponent(q1, q2, Lt, Ls, alpha)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(vals.size))


def sample_subordinated_stable(alpha: float, L, seed=None):
    """``S(L)`` for independent symmetric stable ``S`` and given times ``L``."""
    rng = _rng(seed)
    L = np.asarray(L, dtype=float)
    return L ** (1.0 / alpha) * sample_symmetric_stable(alpha, 1.0, L.size, rng).reshape(L.shape)


def sample_subordinated_brownian(alpha: float, t: float, size: int, seed=None):
    """``B(2 S(t))`` with ``S`` the Laplace-normalised ``alpha/2``-stable subordinator."""
    if not 0 < alpha < 2:
        raise ValueError("alpha must lie in (0, 2)")
    rng = _rng(seed)
    sub = sample_one_sided_stable(alpha / 2.0, t, size, rng, normalization="laplace")
    return np.sqrt(2.0 * sub) * rng.standard_normal(size)


def _binned(angles, edges):
    return np.histogram(np.mod(angles, TWO_PI), bins=edges)[0] / angles.size


def scaling_limit_check(alpha: float, n_ladder, t: float, samples: int, seed=None,
                        params: HeavyTailParams | None = None, convention: str = "derived",
                        bins: int = 32):
    """Binned circular TV distance between the rescaled heavy-tailed angle and its limit.

    ``1 < alpha < 2``: angle ``X(n t)/a_n`` against the circular stable law at
    ``t/mu`` (exact bin masses).  ``0 < alpha < 1``: angle ``X(n t)/n``
    against ``S(L(t))`` sampled by nested Monte Carlo (two-sample TV).
    """
    params = params or HeavyTailParams(alpha)
    rng = _rng(seed)
    edges = np.linspace(0.0, TWO_PI, bins + 1)
    out = []
    if 1 < alpha < 2:
        mu = params.mean_gap
        target = circular_stable_bin_masses(edges, t / mu, alpha) if t > 0 else None
    else:
        L = sample_inverse_subordinator(alpha, t, samples, rng) if t > 0 else np.zeros(samples)
        target_angles = sample_subordinated_stable(alpha, L, rng)
        target = _binned(target_angles, edges)
    for n in n_ladder:
        if t == 0:
            out.append({"n": n, "tv": 0.0, "samples": samples})
            continue
        x = sample_heavy(params, [n * t], samples, rng)[0][:, 0]
        scale = params.a_n(n, convention) if alpha > 1 else float(n)
        emp = _binned(x / scale, edges)
        out.append({"n": n, "tv": 0.5 * float(np.abs(emp - target).sum()), "samples": samples,
                    "scale": scale})
    return out
