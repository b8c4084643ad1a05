"""Distances between samples and laws on the line and on the circle."""

from __future__ import annotations

import numpy as np
from scipy import stats

from ..circular import TWO_PI, WrappedLaw

__all__ = ["ks_distance", "ks_two_sample", "bin_masses", "binned_tv", "circular_tv",
           "two_sample_circular_tv"]


def ks_distance(samples, cdf) -> float:
    """Kolmogorov distance between the empirical CDF of ``samples`` and ``cdf``."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("need at least one sample")
    return float(stats.kstest(samples, cdf).statistic)


def ks_two_sample(a, b) -> float:
    return float(stats.ks_2samp(np.asarray(a), np.asarray(b)).statistic)


def _edges(bins):
    return np.linspace(0.0, TWO_PI, int(bins) + 1)


def bin_masses(law: WrappedLaw, bins: int):
    """Density mass of each of ``bins`` equal arcs.

    Each arc is integrated by ``law.ac_mass``, which clips to the line
    support, so the jumps of the density at the support edges cost nothing.
    """
    edges = _edges(bins)
    return np.array([law.ac_mass(a, b) for a, b in zip(edges[:-1], edges[1:])])


def binned_tv(angles, masses) -> float:
    """Half the L1 gap between the binned empirical angle law and ``masses``."""
    angles = np.mod(np.asarray(angles, dtype=float), TWO_PI)
    masses = np.asarray(masses, dtype=float)
    hist = np.histogram(angles, bins=_edges(masses.size))[0] / angles.size
    return 0.5 * float(np.abs(hist - masses).sum())


def circular_tv(angles, law: WrappedLaw, bins: int = 256, atom_flags=None) -> float:
    """Binned TV between sampled angles and a wrapped law, atoms compared on mass.

    Draws flagged by ``atom_flags`` (or, without flags, lying within
    ``1e-9`` of an atom angle) are matched to the nearest atom and their
    frequency compared with its mass.  Bins holding an atom are dropped from
    the density comparison.
    """
    angles = np.mod(np.asarray(angles, dtype=float), TWO_PI)
    n = angles.size
    if n == 0:
        raise ValueError("need at least one sample")
    atom_loc = np.array([a for a, _ in law.atoms], dtype=float)
    atom_mass = np.array([m for _, m in law.atoms], dtype=float)
    if atom_flags is None:
        if atom_loc.size:
            d = np.abs(angles[:, None] - atom_loc[None, :])
            d = np.minimum(d, TWO_PI - d)
            atom_flags = d.min(axis=1) < 1e-9
        else:
            atom_flags = np.zeros(n, dtype=bool)
    atom_flags = np.asarray(atom_flags, dtype=bool)
    gap = 0.0
    if atom_loc.size:
        hit = angles[atom_flags]
        d = np.abs(hit[:, None] - atom_loc[None, :])
        nearest = np.argmin(np.minimum(d, TWO_PI - d), axis=1)
        freq = np.bincount(nearest, minlength=atom_loc.size) / n
        gap += float(np.abs(freq - atom_mass).sum())
    elif atom_flags.any():
        gap += atom_flags.sum() / n
    edges = _edges(bins)
    hist = np.histogram(angles[~atom_flags], bins=edges)[0] / n
    masses = bin_masses(law, bins)
    keep = np.ones(int(bins), dtype=bool)
    if atom_loc.size:
        idx = np.clip(np.searchsorted(edges, atom_loc, side="right") - 1, 0, int(bins) - 1)
        keep[idx] = False
    gap += float(np.abs(hist - masses)[keep].sum())
    return 0.5 * gap


def two_sample_circular_tv(a, b, bins: int = 32) -> float:
    """Binned TV between two samples of angles."""
    edges = _edges(bins)
    ha = np.histogram(np.mod(a, TWO_PI), bins=edges)[0] / np.size(a)
    hb = np.histogram(np.mod(b, TWO_PI), bins=edges)[0] / np.size(b)
    return 0.5 * float(np.abs(ha - hb).sum())
