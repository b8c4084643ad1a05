import csv
import json
import math
import tempfile
from pathlib import Path

import numpy as np
from scipy import stats

from ...circular import TWO_PI, sample_angles, wrap_law
from ...telegraph_core import PathSample, TelegraphParams
from ..core import McConfig, register, reports_to_json, run_suite, suite_checks
from ..stats import circular_tv, ks_distance

H = "harness"
CLI = "cli"
UNIT = TelegraphParams(1.0, 1.0)
# per-rung false-alarm rate matching a 4 s.e. gate
DKW_DELTA = 6.3e-5


@register("harness.ks_distance.dkw", H, derived="ks_distance:dkw")
def ks_dkw(ctx):
    """Uniform samples vs the uniform CDF stay under the DKW bound for n in 1e2..1e5."""
    ratios = []
    for n in (100, 1000, 10_000, 100_000):
        u = ctx.mc(lambda rng, m: rng.random(m), n)
        bound = math.sqrt(math.log(2.0 / DKW_DELTA) / (2 * n))
        ratios.append(ks_distance(u, stats.uniform.cdf) / bound)
    worst = max(ratios)
    return ctx.report(ratios, 1.0, "KS / DKW bound", worst, 1.0, 111_100)


@register("harness.circular_tv.self", H, derived="circular_tv:self")
def tv_self(ctx):
    """Wrapped law at lam = c = 1, t = 2 vs 1e5 of its own draws: TV below 0.01.

    No atom flags are passed, so atom draws are found by their angle.
    """
    law = wrap_law(2.0, UNIT)
    theta, _ = ctx.mc(lambda rng, m: sample_angles(UNIT, 2.0, m, rng), ctx.n(100_000))
    tv = circular_tv(theta, law, bins=32)
    return ctx.report(tv, 0.0, "TV", tv, 0.01, theta.size, note="32 bins; atoms compared on mass")


TELEGRAPH_INVARIANTS = {
    "telegraph:normalization",
    "telegraph:oracle-equivalence",
    "telegraph:cf-symmetry",
    "telegraph:cf-branch",
    "telegraph:cf-mc",
    "telegraph:joint-closure",
}


@register("harness.run_suite.telegraph_core", H, derived="run_suite:telegraph-core")
def suite_coverage(ctx):
    """Suite "telegraph-core" holds exactly that module's checks and covers its invariants."""
    checks = suite_checks("telegraph-core")
    wrong_suite = [c.check_id for c in checks if c.suite != "telegraph-core"]
    missing = sorted(TELEGRAPH_INVARIANTS - {c.invariant for c in checks})
    empty = run_suite([])
    bad = len(wrong_suite) + len(missing) + len(empty)
    return ctx.report(sorted(c.check_id for c in checks), missing, "violations", bad, 0,
                      note="empty suite gives an empty report")


@register("harness.determinism", H, invariant="harness:determinism")
def determinism(ctx):
    """Same seed, one vs three workers: byte-identical reports."""
    ids = ["heavy.symmetric.cf", "circular.circular_moment.mc"]
    cfg = McConfig(master_seed=ctx.config.master_seed, streams=ctx.config.streams,
                   samples_per_stream=ctx.config.samples_per_stream)
    a = reports_to_json(run_suite(ids, cfg, threads=1))
    b = reports_to_json(run_suite(ids, cfg, threads=3))
    diff = int(a != b)
    return ctx.report(diff, 0, "differing reports", diff, 0)


# ---------------------------------------------------------------- cli


def _cli(argv):
    from ...cli import main

    return main(argv)


@register("cli.law.wrapped", CLI, derived="cli:law-wrapped")
def law_wrapped(ctx):
    """`law --variant wrapped --t 2 --grid 512` matches wrap_law on the grid, atoms in the sidecar."""
    law = wrap_law(2.0, UNIT)
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "wrapped.csv"
        code = _cli(["law", "--variant", "wrapped", "--lambda", "1", "--c", "1", "--t", "2",
                     "--grid", "512", "--out", str(out)])
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        side = json.loads((out.with_name("wrapped.atoms.json")).read_text())
    theta = np.array([float(r["theta"]) for r in rows])
    dens = np.array([float(r["density"]) for r in rows])
    err = float(np.abs(dens - law.density(theta)).max())
    grid_err = float(np.abs(theta - np.arange(512) * TWO_PI / 512).max())
    atom_err = max(abs(a - b) for (a, m), (b, n) in zip(side["atoms"], law.atoms) for a, b in ((a, b), (m, n)))
    score = max(err, grid_err, atom_err) + (0.0 if code == 0 and len(rows) == 512 else math.inf)
    return ctx.report(len(rows), 512, "abs", score, 1e-15)


@register("cli.roundtrip", CLI, invariant="cli:roundtrip")
def roundtrip(ctx):
    """Emitted path JSON re-parses into equal PathSamples; path count honoured."""
    from ...cli import load_paths

    bad = 0
    with tempfile.TemporaryDirectory() as tmp:
        for variant, extra in (("symmetric", []), ("heavy", ["--alpha", "0.7"]),
                               ("asym", ["--c1", "1", "--c2", "2", "--lambda1", "1", "--lambda2", "3"])):
            out = Path(tmp) / f"{variant}.json"
            code = _cli(["simulate", "--variant", variant, "--T", "10", "--n", "100",
                         "--seed", str(ctx.seed() % 2**31), "--out", str(out)] + extra)
            text = out.read_text()
            paths = load_paths(text)
            again = [PathSample.from_json(p.to_json()) for p in paths]
            bad += int(code != 0) + int(len(paths) != 100) + int(again != paths)
            bad += int(json.loads(text).get("schema_version") != 1)
    return ctx.report(bad, 0, "violations", bad, 0, 300)


@register("cli.invalid_input", CLI, invariant="cli:usage-errors")
def invalid_input(ctx):
    """lambda <= 0 and alpha = 1 exit nonzero."""
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stderr(buf):
        codes = [_cli(["law", "--lambda", "0"]),
                 _cli(["simulate", "--variant", "heavy", "--alpha", "1"])]
    msg = buf.getvalue()
    bad = sum(c == 0 for c in codes) + int("lambda > 0" not in msg) + int("alpha" not in msg)
    return ctx.report(codes, "nonzero", "violations", bad, 0)
