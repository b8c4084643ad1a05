"""Command-line entry point ``circtel``.

Subcommands
-----------
simulate   exact-event paths (``--variant symmetric|asym|heavy``)
law        densities and CDFs on a grid (``--variant line|wrapped|oscillator``)
operator   semigroup, generator or resolvent applied to an AnalyticPair JSON
limits     Kac and stable scaling ladders
verify     run a verification suite, write JSON and CSV reports
moments    single and two-time circular moments

CSV columns
-----------
simulate   path, k, time, sign          (one row per switching epoch, k = 0 is the start)
law line   x, density, cdf
law wrapped theta, density              (atoms in ``<out>.atoms.json``)
law oscillator x, z1_density, z1_cdf, z2_density, z2_cdf
limits     one row per ladder rung, keys of the ladder dictionaries
verify     check_id, suite, metric, error, tol, passed, seed, n

Every JSON artifact carries ``schema_version``.  The default seed comes from
the ``CIRCTEL_SEED`` environment variable (7 if unset).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1
SEED_ENV = "CIRCTEL_SEED"


class UsageError(ValueError):
    """Invalid input; the message names the violated invariant."""


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 7
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _complex(text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _common(p: argparse.ArgumentParser):
    p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="switching rate lambda")
    p.add_argument("--c", type=float, default=1.0, help="speed c")
    p.add_argument("--t", type=float, default=1.0, help="time t")
    p.add_argument("--seed", type=int, default=None, help=f"master seed (default ${SEED_ENV} or 7)")
    p.add_argument("--out", default=None, help="output file (stdout if omitted)")
    p.add_argument("--format", choices=("csv", "json"), default=None)


def _asym_flags(p):
    p.add_argument("--c1", type=float, default=None)
    p.add_argument("--c2", type=float, default=None)
    p.add_argument("--lambda1", dest="lam1", type=float, default=None)
    p.add_argument("--lambda2", dest="lam2", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="circtel", description="Telegraph motion on the circle.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="exact-event sample paths")
    _common(p)
    _asym_flags(p)
    p.add_argument("--variant", choices=("symmetric", "asym", "heavy"), default="symmetric")
    p.add_argument("--alpha", type=float, default=1.5, help="Pareto tail index (heavy)")
    p.add_argument("--T", dest="horizon", type=float, default=1.0, help="horizon")
    p.add_argument("--n", type=int, default=1, help="number of paths")

    p = sub.add_parser("law", help="densities and CDFs on a grid")
    _common(p)
    p.add_argument("--variant", choices=("line", "wrapped", "oscillator"), default="wrapped")
    p.add_argument("--grid", type=int, default=256)

    p = sub.add_parser("operator", help="semigroup, generator or resolvent of an AnalyticPair")
    _common(p)
    p.add_argument("--variant", choices=("semigroup", "generator", "resolvent"), default="semigroup")
    p.add_argument("--pair", required=True, help="AnalyticPair JSON file ('-' for stdin)")
    p.add_argument("--mu", type=float, default=1.0, help="resolvent parameter")
    p.add_argument("--z", type=_complex, default=None, help="evaluation point in the closed disc")
    p.add_argument("--v", type=int, choices=(1, -1), default=1, help="velocity state")

    p = sub.add_parser("limits", help="Kac and stable scaling ladders")
    _common(p)
    p.add_argument("--variant", choices=("kac", "stable"), default="kac")
    p.add_argument("--alpha", type=float, default=1.5)
    p.add_argument("--ladder", type=_floats, default=None,
                   help="comma separated rungs (lambda for kac, n for stable)")
    p.add_argument("--n", type=int, default=100_000, help="samples per rung (stable)")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--streams", type=int, default=4)
    p.add_argument("--samples-per-stream", type=int, default=None,
                   help="override every check's sample size (smoke runs only)")
    p.add_argument("--out", default="verify_report", help="report prefix: writes <out>.json, <out>.csv")
    p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("moments", help="single and two-time circular moments")
    _common(p)
    p.add_argument("--variant", choices=("telegraph", "heavy"), default="telegraph")
    p.add_argument("--alpha", type=float, default=1.5, help="stable index (heavy)")
    p.add_argument("--q", type=float, default=1.0, help="moment order")
    p.add_argument("--q2", type=float, default=None, help="second order for the two-time moment")
    p.add_argument("--t2", type=float, default=None, help="second time")
    p.add_argument("--n", type=int, default=100_000, help="draws of L for heavy alpha < 1")
    return ap


# --------------------------------------------------------------------------
# parameter validation
# --------------------------------------------------------------------------


def _telegraph(args):
    from .telegraph_core import TelegraphParams

    if not args.lam > 0:
        raise UsageError(f"lambda > 0 violated (got {args.lam})")
    if not args.c > 0:
        raise UsageError(f"c > 0 violated (got {args.c})")
    return TelegraphParams(args.lam, args.c)


def _positive(name, value):
    if not (value is not None and math.isfinite(value) and value > 0):
        raise UsageError(f"{name} > 0 violated (got {value})")


def _alpha(alpha, lo=0.0, hi=2.0):
    if not (lo < alpha < hi) or alpha == 1.0:
        raise UsageError(f"alpha in ({lo}, {hi}) with alpha != 1 violated (got {alpha})")


def _seed(args):
    return _default_seed() if args.seed is None else args.seed


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **obj}, indent=1)


def atoms_path(out) -> Path:
    """Sidecar path holding the atoms of a law written to ``out``."""
    out = Path(out)
    return out.with_name(out.stem + ".atoms.json")


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    from .telegraph_core import sample_path

    _positive("T", args.horizon)
    if args.n < 1:
        raise UsageError(f"n >= 1 violated (got {args.n})")
    rng = np.random.default_rng(_seed(args))
    if args.variant == "symmetric":
        p = _telegraph(args)
        params = {"lambda": p.lam, "c": p.c}
        paths = [sample_path(p, args.horizon, seed=rng) for _ in range(args.n)]
    elif args.variant == "asym":
        from .asymmetric import AsymmetricParams, sample_asym_path

        vals = {k: getattr(args, k) for k in ("c1", "c2", "lam1", "lam2")}
        for k, v in vals.items():
            _positive(k, v)
        p = AsymmetricParams(**vals)
        params = vals
        paths = [sample_asym_path(p, args.horizon, seed=rng) for _ in range(args.n)]
    else:
        from .heavy_tail import HeavyTailParams, sample_heavy_path

        _alpha(args.alpha)
        _positive("c", args.c)
        p = HeavyTailParams(args.alpha, 1.0, args.c)
        params = {"alpha": p.alpha, "c": p.c, "pareto_scale": p.pareto_scale}
        paths = [sample_heavy_path(p, args.horizon, seed=rng) for _ in range(args.n)]
    if (args.format or "json") == "json":
        text = _json({"variant": args.variant, "params": params, "horizon": args.horizon,
                      "seed": _seed(args), "paths": [json.loads(s.to_json()) for s in paths]})
    else:
        rows = []
        for i, s in enumerate(paths):
            sign = int(s.initial_sign)
            rows.append((i, 0, 0.0, sign))
            for k, tau in enumerate(s.event_times, 1):
                sign = -sign
                rows.append((i, k, tau, sign))
        text = _csv(("path", "k", "time", "sign"), rows)
    _emit(text, args.out)
    return 0


def load_paths(text: str):
    """PathSamples from the JSON written by ``simulate``."""
    from .telegraph_core import PathSample

    d = json.loads(text)
    return [PathSample.from_json(json.dumps(p)) for p in d["paths"]]


def cmd_law(args) -> int:
    p = _telegraph(args)
    _positive("t", args.t)
    if args.grid < 2:
        raise UsageError(f"grid >= 2 violated (got {args.grid})")
    ct = p.c * args.t
    if args.variant == "line":
        from .telegraph_core import density_ac, line_cdf

        x = np.linspace(-ct, ct, args.grid)
        rows = zip(x, density_ac(x, args.t, p), line_cdf(x, args.t, p))
        header = ("x", "density", "cdf")
        atoms = [[-ct, 0.5 * math.exp(-p.lam * args.t)], [ct, 0.5 * math.exp(-p.lam * args.t)]]
    elif args.variant == "wrapped":
        from .circular import TWO_PI, wrap_law

        law = wrap_law(args.t, p)
        theta = np.arange(args.grid) * (TWO_PI / args.grid)
        rows = zip(theta, law.density(theta))
        header = ("theta", "density")
        atoms = [[a, m] for a, m in law.atoms]
    else:
        from .oscillator import z1_cdf, z1_law, z2_cdf, z2_law

        # cell midpoints keep clear of the Jacobian singularities at +-1
        x = -1.0 + (2.0 * np.arange(args.grid) + 1.0) / args.grid
        l1, l2 = z1_law(args.t, p), z2_law(args.t, p)
        rows = [(v, l1.density(v), z1_cdf(float(v), args.t, p), l2.density(v), z2_cdf(float(v), args.t, p))
                for v in x]
        header = ("x", "z1_density", "z1_cdf", "z2_density", "z2_cdf")
        atoms = {"Z1": [list(a) for a in l1.atoms], "Z2": [list(a) for a in l2.atoms]}
    meta = {"variant": args.variant, "lambda": p.lam, "c": p.c, "t": args.t, "atoms": atoms}
    if (args.format or "csv") == "json":
        cols = list(zip(*rows))
        _emit(_json({**meta, "columns": {h: [float(v) for v in col] for h, col in zip(header, cols)}}),
              args.out)
        return 0
    _emit(_csv(header, rows), args.out)
    sidecar = _json(meta)
    if args.out is None:
        sys.stderr.write(sidecar + "\n")
    else:
        atoms_path(args.out).write_text(sidecar)
    return 0


def cmd_operator(args) -> int:
    from .semigroup import AnalyticPair, generator_pair, resolvent_pair, transition_pair

    p = _telegraph(args)
    text = sys.stdin.read() if args.pair == "-" else Path(args.pair).read_text()
    try:
        f = AnalyticPair.from_json(text)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"well-formed AnalyticPair JSON violated ({exc})") from None
    if args.variant == "semigroup":
        if args.t < 0:
            raise UsageError(f"t >= 0 violated (got {args.t})")
        g = transition_pair(f, args.t, p)
    elif args.variant == "generator":
        g = generator_pair(f, p)
    else:
        _positive("mu", args.mu)
        g = resolvent_pair(f, args.mu, p)
    out = json.loads(g.to_json())
    out.update({"operator": args.variant, "lambda": p.lam, "c": p.c})
    if args.z is not None:
        if abs(args.z) > 1:
            raise UsageError(f"|z| <= 1 violated (got |z| = {abs(args.z):.6g})")
        val = g(args.z, args.v)
        out["value"] = {"z": [args.z.real, args.z.imag], "v": args.v, "result": [val.real, val.imag]}
    _emit(json.dumps(out, indent=1), args.out)
    return 0


def cmd_limits(args) -> int:
    _positive("t", args.t)
    if args.variant == "kac":
        from .circular import wrapped_tv_to_normal
        from .telegraph_core import TelegraphParams

        ladder = args.ladder or [10.0, 100.0, 1000.0]
        for lam in ladder:
            _positive("lambda", lam)
        # c^2 = lambda keeps the diffusion coefficient c^2/lambda at 1
        rows = [{"lambda": lam, "c": math.sqrt(lam),
                 "tv": wrapped_tv_to_normal(args.t, TelegraphParams(lam, math.sqrt(lam)))}
                for lam in ladder]
    else:
        from .heavy_tail import scaling_limit_check

        _alpha(args.alpha)
        ladder = [int(v) for v in (args.ladder or [100, 1000, 10_000])]
        rows = scaling_limit_check(args.alpha, ladder, args.t, args.n, seed=_seed(args))
    if (args.format or "csv") == "json":
        _emit(_json({"variant": args.variant, "t": args.t, "rows": rows}), args.out)
    else:
        keys = list(rows[0].keys())
        _emit(_csv(keys, [[r.get(k, "") for k in keys] for r in rows]), args.out)
    return 0


def cmd_moments(args) -> int:
    _positive("t", args.t)
    out = {"variant": args.variant, "q": args.q, "t": args.t}
    if args.variant == "telegraph":
        from .circular import circular_moment, joint_moment

        p = _telegraph(args)
        out.update({"lambda": p.lam, "c": p.c})
        m = complex(circular_moment(args.q, args.t, p))
        out["moment"] = [m.real, m.imag]
        if args.q2 is not None:
            t2 = args.t if args.t2 is None else args.t2
            _positive("t2", t2)
            j = complex(joint_moment(args.q, args.q2, args.t, t2, p))
            out.update({"q2": args.q2, "t2": t2, "joint_moment": [j.real, j.imag]})
    else:
        from .heavy_tail import (inverse_subordinator_paths, joint_limit_moment,
                                 limit_moment_subdiffusive, limit_moment_superdiffusive)

        _alpha(args.alpha)
        if args.q < 0:
            raise UsageError(f"q >= 0 violated (got {args.q})")
        out["alpha"] = args.alpha
        if args.alpha < 1:
            out["moment"] = limit_moment_subdiffusive(args.q, args.t, args.alpha)
        else:
            out["moment"] = limit_moment_superdiffusive(args.q, args.t, args.alpha)
        if args.q2 is not None:
            t2 = args.t if args.t2 is None else args.t2
            _positive("t2", t2)
            if args.q2 < 0:
                raise UsageError(f"q2 >= 0 violated (got {args.q2})")
            out.update({"q2": args.q2, "t2": t2})
            if args.alpha > 1:
                out["joint_moment"] = joint_limit_moment(args.q, args.q2, args.t, t2, args.alpha)
            else:
                L = inverse_subordinator_paths(args.alpha, [args.t, t2], args.n, seed=_seed(args))
                m, se = joint_limit_moment(args.q, args.q2, args.t, t2, args.alpha, (L[:, 0], L[:, 1]))
                out.update({"joint_moment": m, "joint_moment_se": se, "samples": args.n})
    _emit(_json(out), args.out)
    return 0


def cmd_verify(args) -> int:
    from .harness import McConfig, reports_to_csv, reports_to_json, run_suite
    from .harness.core import SUITES

    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"suite in {', '.join(SUITES + ('all',))} violated (got {args.suite!r})")
    if args.threads < 1:
        raise UsageError(f"threads >= 1 violated (got {args.threads})")
    try:
        config = McConfig(master_seed=_seed(args), streams=args.streams,
                          samples_per_stream=args.samples_per_stream)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    def progress(rep):
        if not args.quiet:
            flag = "PASS" if rep.passed else "FAIL"
            print(f"{flag} {rep.check_id} {rep.error_metric}={rep.error:.4g} (tol {rep.tolerance:.3g})",
                  flush=True)

    reports = run_suite(args.suite, config, threads=args.threads, progress=progress)
    Path(args.out + ".json").write_text(reports_to_json(reports))
    Path(args.out + ".csv").write_text(reports_to_csv(reports))
    failed = [r.check_id for r in reports if not r.passed]
    if not args.quiet:
        print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "law": cmd_law,
    "operator": cmd_operator,
    "limits": cmd_limits,
    "verify": cmd_verify,
    "moments": cmd_moments,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"circtel {args.command}: invalid input: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # invariant violations raised by the library types
        print(f"circtel {args.command}: invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
