"""Monte Carlo and quadrature verification engine."""

from .core import (
    REGISTRY,
    SUITES,
    CheckContext,
    McConfig,
    VerificationReport,
    register,
    reports_from_json,
    reports_to_csv,
    reports_to_json,
    run_suite,
    suite_checks,
    write_reports,
)
from .stats import binned_tv, circular_tv, ks_distance, ks_two_sample, two_sample_circular_tv

__all__ = [
    "REGISTRY",
    "SUITES",
    "CheckContext",
    "McConfig",
    "VerificationReport",
    "register",
    "run_suite",
    "suite_checks",
    "reports_to_json",
    "reports_from_json",
    "reports_to_csv",
    "write_reports",
    "ks_distance",
    "ks_two_sample",
    "circular_tv",
    "binned_tv",
    "two_sample_circular_tv",
]
