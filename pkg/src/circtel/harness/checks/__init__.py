"""Registered verification checks, one module per library module."""

from . import asymmetric, circular, heavy_tail, numerics, oscillator, plumbing, semigroup, telegraph  # noqa: F401
