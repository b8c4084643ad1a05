"""Check registry, seed management and report plumbing.

Each check draws its random numbers from streams spawned off
``SeedSequence([master_seed, crc32(check_id)])``.  Streams are mapped in
parallel but always merged in index order, so a report depends only on the
check id and the :class:`McConfig`, never on the worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

SCHEMA_VERSION = 1
DEFAULT_SE_GATE = 4.0


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo configuration.

    ``samples_per_stream=None`` keeps each check's nominal sample size;
    setting it overrides every check with ``streams * samples_per_stream``
    (useful for quick smoke runs, not for acceptance).
    """

    master_seed: int = 7
    streams: int = 4
    samples_per_stream: int | None = None
    bins: int = 256

    def __post_init__(self):
        if int(self.streams) != self.streams or self.streams < 1:
            raise ValueError("streams must be a positive integer")
        if self.samples_per_stream is not None and self.samples_per_stream < 1:
            raise ValueError("samples_per_stream must be positive")
        if self.bins < 2:
            raise ValueError("bins must be at least 2")
        if self.master_seed < 0:
            raise ValueError("master_seed must be nonnegative")

    def stream_seeds(self, check_id: str, salt: int = 0) -> list[np.random.SeedSequence]:
        """Seeds of the ``streams`` streams for one draw request of a check."""
        root = np.random.SeedSequence([int(self.master_seed), zlib.crc32(check_id.encode()), int(salt)])
        return root.spawn(self.streams)


def _jsonable(v):
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


@dataclass
class VerificationReport:
    check_id: str
    analytic_value: object
    oracle_value: object
    error_metric: str
    error: float
    tolerance: float
    passed: bool
    sample_count: int = 0
    seed: int = 0
    wall_time: float = 0.0
    suite: str = ""
    note: str = ""

    def __post_init__(self):
        ok = bool(self.error <= self.tolerance)
        if ok != bool(self.passed):
            raise ValueError("passed must equal error <= tolerance")

    def to_dict(self, with_time: bool = False) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "check_id": self.check_id,
            "suite": self.suite,
            "values": {"analytic": _jsonable(self.analytic_value), "oracle": _jsonable(self.oracle_value)},
            "metric": self.error_metric,
            "error": _jsonable(float(self.error)),
            "tol": float(self.tolerance),
            "passed": bool(self.passed),
            "seed": int(self.seed),
            "n": int(self.sample_count),
            "note": self.note,
        }
        if with_time:
            d["wall_time"] = self.wall_time
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        err = d["error"]
        return cls(d["check_id"], d["values"]["analytic"], d["values"]["oracle"], d["metric"],
                   float(err), float(d["tol"]), bool(d["passed"]), int(d["n"]), int(d["seed"]),
                   float(d.get("wall_time", 0.0)), d.get("suite", ""), d.get("note", ""))


@dataclass
class CheckContext:
    """Handed to every check: configuration, worker count and seeded streams."""

    check_id: str
    config: McConfig
    threads: int = 1
    suite: str = ""
    _start: float = field(default_factory=time.perf_counter)
    _requests: int = 0

    def _next_seeds(self):
        # every draw request gets fresh, independent streams in a fixed order
        seeds = self.config.stream_seeds(self.check_id, self._requests)
        self._requests += 1
        return seeds

    def n(self, nominal: int) -> int:
        """Total sample size for a check whose nominal size is ``nominal``."""
        if self.config.samples_per_stream is None:
            return int(nominal)
        return self.config.streams * self.config.samples_per_stream

    def rng(self) -> np.random.Generator:
        """Single generator for checks that need one sequential stream."""
        return np.random.default_rng(self._next_seeds()[0])

    def seed(self) -> int:
        """Integer seed for library functions that build their own generator."""
        return int(self._next_seeds()[0].generate_state(1)[0])

    def mc(self, fn: Callable, total: int):
        """Split ``total`` draws over the streams, map ``fn(rng, m)`` and concatenate.

        ``fn`` returns an array or a tuple of arrays; tuples are merged
        component-wise along the first axis.
        """
        seeds = self._next_seeds()
        s = len(seeds)
        sizes = [total // s + (1 if i < total % s else 0) for i in range(s)]
        jobs = [(np.random.default_rng(sd), m) for sd, m in zip(seeds, sizes) if m > 0]
        if self.threads > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as ex:
                parts = list(ex.map(lambda a: fn(*a), jobs))
        else:
            parts = [fn(*a) for a in jobs]
        if isinstance(parts[0], tuple):
            return tuple(np.concatenate([p[i] for p in parts]) for i in range(len(parts[0])))
        return np.concatenate(parts)

    def report(self, analytic, oracle, metric: str, error: float, tol: float, n: int = 0,
               note: str = "") -> VerificationReport:
        error = float(error)
        if math.isnan(error):
            error = math.inf
        return VerificationReport(
            self.check_id, analytic, oracle, metric, error, float(tol), error <= tol, int(n),
            int(self.config.master_seed), time.perf_counter() - self._start, self.suite, note,
        )


@dataclass(frozen=True)
class Check:
    check_id: str
    suite: str
    fn: Callable
    derived: str | None = None
    invariant: str | None = None
    description: str = ""


REGISTRY: dict[str, Check] = {}
SUITES = ("numerics", "telegraph-core", "circular", "semigroup", "oscillator", "asymmetric",
          "heavy-tail", "harness", "cli")


def register(check_id: str, suite: str, derived: str | None = None, invariant: str | None = None):
    """Decorator adding ``fn(ctx) -> VerificationReport`` to the registry.

    ``derived`` tags the documented oracle example the check implements,
    ``invariant`` the module property it enforces.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")

    def deco(fn):
        if check_id in REGISTRY:
            raise ValueError(f"duplicate check id {check_id!r}")
        doc = (fn.__doc__ or "").strip().splitlines()
        REGISTRY[check_id] = Check(check_id, suite, fn, derived, invariant, doc[0] if doc else "")
        return fn

    return deco


def _load_checks():
    from . import checks  # noqa: F401  (registration side effects)


def suite_checks(suite_id) -> list[Check]:
    """Checks of a suite id, ``"all"``, or an explicit list of check ids."""
    _load_checks()
    if isinstance(suite_id, (list, tuple)):
        missing = [c for c in suite_id if c not in REGISTRY]
        if missing:
            raise KeyError(f"unknown check ids {missing}")
        return [REGISTRY[c] for c in suite_id]
    if suite_id == "all":
        return sorted(REGISTRY.values(), key=lambda c: (SUITES.index(c.suite), c.check_id))
    if suite_id not in SUITES:
        raise ValueError(f"unknown suite {suite_id!r}; choose from {SUITES + ('all',)}")
    return sorted((c for c in REGISTRY.values() if c.suite == suite_id), key=lambda c: c.check_id)


def run_check(check: Check, config: McConfig, threads: int = 1) -> VerificationReport:
    ctx = CheckContext(check.check_id, config, threads, check.suite)
    rep = check.fn(ctx)
    rep.suite = check.suite
    rep.wall_time = time.perf_counter() - ctx._start
    return rep


def run_suite(suite_id, config: McConfig | None = None, threads: int = 1,
              progress: Callable | None = None) -> list[VerificationReport]:
    """Run every registered check of ``suite_id`` in a fixed order."""
    config = config or McConfig()
    if threads < 1:
        raise ValueError("threads must be >= 1")
    out = []
    for chk in suite_checks(suite_id):
        rep = run_check(chk, config, threads)
        out.append(rep)
        if progress is not None:
            progress(rep)
    return out


def reports_to_json(reports, with_time: bool = False) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION,
                       "reports": [r.to_dict(with_time) for r in reports]}, indent=1, sort_keys=True)


def reports_from_json(text: str) -> list[VerificationReport]:
    d = json.loads(text)
    return [VerificationReport.from_dict(r) for r in d["reports"]]


CSV_COLUMNS = ("check_id", "suite", "metric", "error", "tol", "passed", "seed", "n")


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(CSV_COLUMNS)
    for r in reports:
        d = r.to_dict()
        w.writerow([d[k] for k in CSV_COLUMNS])
    return buf.getvalue()


def write_reports(reports, json_path, csv_path=None):
    with open(json_path, "w") as fh:
        fh.write(reports_to_json(reports))
    if csv_path is not None:
        with open(csv_path, "w", newline="") as fh:
            fh.write(reports_to_csv(reports))


# --------------------------------------------------------------------------
# Gate helpers
# --------------------------------------------------------------------------


def se_multiple(estimate, target, se) -> float:
    """``|estimate - target| / se`` (complex-aware)."""
    if se <= 0:
        return 0.0 if abs(estimate - target) == 0 else math.inf
    return abs(estimate - target) / se


def mean_and_se(values):
    values = np.asarray(values)
    m = values.mean()
    if np.iscomplexobj(values):
        se = math.sqrt((values.real.var(ddof=1) + values.imag.var(ddof=1)) / values.size)
    else:
        se = float(values.std(ddof=1)) / math.sqrt(values.size)
    return m, se


def ladder_score(distances, final_gate: float, slack: float = 0.0, strict: bool = False) -> float:
    """Score <= 1 iff the final distance is below ``final_gate`` and the ladder descends.

    ``strict`` requires every step to decrease; otherwise increases up to
    ``slack`` (the Monte Carlo resolution) are tolerated.
    """
    d = list(map(float, distances))
    score = d[-1] / final_gate
    for a, b in zip(d, d[1:]):
        if strict and b >= a:
            score = max(score, math.inf)
        elif not strict and b > a + slack:
            score = max(score, 1.0 + (b - a - slack) / max(slack, 1e-12))
    return score


def ks_null_sd(n1: int, n2: int | None = None) -> float:
    """Rough standard deviation of the KS statistic under the null."""
    eff = n1 if n2 is None else n1 * n2 / (n1 + n2)
    return 0.26 / math.sqrt(eff)
