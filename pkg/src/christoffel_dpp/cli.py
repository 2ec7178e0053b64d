"""Command-line front end.

Every command reads one JSON config (flags ``--bits``, ``--seed`` and
``--out`` override its scalar fields) and writes CSV or newline-delimited
JSON.  Numbers are printed in decimal with a digit count fixed by the
precision, so reruns are byte-identical.

Exit codes: 0 success, 1 invariant failure, 2 configuration error,
3 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from ._suites import run_suite
from .christoffel import DeformationSpec, EnsembleSpec, deformed_kernel, ope_kernel
from .errors import (
    AdmissibilityError,
    BranchError,
    DegenerateDeformationError,
    GuardError,
    NonPositiveWeightError,
    QuadratureError,
    TruncationError,
)
from .kernels.bessel import deformed_bessel_kernel, discrete_bessel_kernel
from .kernels.gamma_limit import (
    GammaDeformParams,
    gamma_deformed_kernel,
    gamma_kernel,
    scaled_deformed_zmeasure,
)
from .kernels.zmeasure import ZParams, zmeas_deformed_kernel
from .oracle import OPESampler, brute_plancherel_corr, brute_zmeasure_corr, kernel_side_deformation
from .orthopoly import WeightFamily
from .specfun.precision import get_context

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_DEGENERATE = 0, 1, 2, 3
SCHEMA_VERSION = 1

DEFAULTS = {
    "eval": {"kernel": "bessel", "alpha": 1, "u": [], "grid": [-1, 0, 1], "bits": 256},
    "converge-thm1": {"alpha": 1, "u": [], "N_list": [20, 40, 80, 160], "bits": 256,
                      "pairs": [[0, 1], [-1, 2], [1, 3], [-2, 0], [0, 0]], "jobs": 1},
    "converge-gamma": {"z": "0.3+0.4j", "zp": "0.3-0.4j", "u": "0.3", "bits": 256,
                       "xi_list": ["0.9", "0.99", "0.999", "0.9999"],
                       "pairs": [[0.5, 1.5], [-0.5, 2.5], [1.5, 1.5]], "jobs": 1},
    "verify": {"suite": "all", "bits": 256, "fuzz_bits": 0},
    "sample": {"family": "charlier", "a": 2, "N": 3, "u": [], "samples": 10000, "seed": 0, "bits": 256},
    "oracle-compare": {"target": "plancherel", "alpha": "0.5", "points": [1, -2], "cutoff": 14, "bits": 256},
}


class ConfigError(ValueError):
    pass


# -- formatting ---------------------------------------------------------------------

def fmt(ctx, v):
    """Locale-free decimal text with ``ctx.digits`` significant digits."""
    if v is None:
        return ""
    if isinstance(v, (int, str)):
        return str(v)
    if isinstance(v, Fraction):
        return str(v) if v.denominator == 1 else ctx.mp.nstr(ctx.num(v), ctx.digits)
    if isinstance(v, float):
        return repr(v)
    return ctx.mp.nstr(v, ctx.digits, min_fixed=-math.inf, max_fixed=math.inf) if v else "0"


def write_csv(command, columns, rows, ctx, stream):
    buf = io.StringIO()
    buf.write(f"# christoffel-dpp {command} schema v{SCHEMA_VERSION} bits={ctx.mantissa_bits}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(ctx, v) for v in r])
    stream.write(buf.getvalue())


def write_ndjson(records, stream):
    for r in records:
        stream.write(json.dumps(r, sort_keys=True) + "\n")


# -- config -----------------------------------------------------------------------------

def load_config(command, path, overrides):
    cfg = dict(DEFAULTS[command])
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                user = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(user, dict):
            raise ConfigError("config must be a JSON object")
        cfg.update(user)
    for k, v in overrides.items():
        if v is not None:
            cfg[k] = v
    if not isinstance(cfg.get("bits"), int) or cfg["bits"] < 64:
        raise ConfigError("bits must be an integer >= 64")
    if "N_list" in cfg:
        ns = cfg["N_list"]
        if not ns or any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 1:
            raise ConfigError("N_list must be strictly increasing positive integers")
    if "xi_list" in cfg:
        xs = [Fraction(str(x)) for x in cfg["xi_list"]]
        if not xs or any(b <= a for a, b in zip(xs, xs[1:])) or xs[0] <= 0 or xs[-1] >= 1:
            raise ConfigError("xi_list must increase strictly inside (0, 1)")
    return cfg


def _family(cfg):
    kind = cfg.get("family", "charlier")
    if kind == "charlier":
        return WeightFamily.charlier(cfg["a"])
    if kind == "meixner":
        return WeightFamily.meixner(cfg["beta"], cfg["xi"])
    raise ConfigError(f"unknown family {kind!r}")


def _zparams(cfg, xi=None):
    return ZParams(_complexish(cfg["z"]), _complexish(cfg["zp"]), str(xi if xi is not None else cfg["xi"]))


def _complexish(v):
    if isinstance(v, str) and "j" in v:
        c = complex(v.replace(" ", ""))
        return c if c.imag else str(c.real)
    return v


# -- commands ---------------------------------------------------------------------------

def build_kernel(cfg, ctx):
    kind = cfg["kernel"]
    u = list(cfg.get("u") or [])
    if kind == "bessel":
        return deformed_bessel_kernel(cfg["alpha"], u, ctx) if u else discrete_bessel_kernel(cfg["alpha"], ctx)
    if kind in ("charlier", "meixner"):
        spec = EnsembleSpec(_family({**cfg, "family": kind}), cfg["N"], DeformationSpec(tuple(u)))
        return deformed_kernel(spec, ctx) if u else ope_kernel(spec, ctx)
    if kind == "zmeasure":
        return zmeas_deformed_kernel(_zparams(cfg), u, ctx)
    if kind == "gamma":
        zp = _zparams({**cfg, "xi": "0.5"})
        return gamma_deformed_kernel(GammaDeformParams(zp, u[0]), ctx) if u else gamma_kernel(zp, ctx)
    raise ConfigError(f"unknown kernel {kind!r}")


def cmd_eval(cfg):
    ctx = get_context(cfg["bits"])
    K = build_kernel(cfg, ctx)
    grid = cfg["grid"]
    rows = [(x, y, K(x, y)) for x in grid for y in grid]
    return ["x", "y", "K"], rows, ctx


def _thm1_row(args):
    bits, alpha, u, N, pairs = args
    ctx = get_context(bits)
    a = Fraction(str(alpha)) / N
    spec = EnsembleSpec(WeightFamily.charlier(a), N, DeformationSpec(tuple(Fraction(str(v)) + N for v in u)))
    try:
        K = deformed_kernel(spec, ctx)
        return [_pack(K(x + N, y + N)) for x, y in pairs], None
    except DegenerateDeformationError as exc:
        return None, str(exc)


def _pack(v):
    # mpf instances of a private context do not pickle; their raw tuples do
    return ("c", v._mpc_) if hasattr(v, "_mpc_") else ("r", v._mpf_)


def _unpack(ctx, t):
    kind, raw = t
    return ctx.mp.make_mpc(raw) if kind == "c" else ctx.mp.make_mpf(raw)


def _pool_map(fn, jobs, items):
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def converge_thm1(cfg):
    """Rows ``(N, x, y, K_N, K_limit, err, max_err, ratio)`` for the Poisson-regime limit."""
    ctx = get_context(cfg["bits"])
    pairs = [tuple(p) for p in cfg["pairs"]]
    u = [Fraction(str(v)) for v in cfg["u"]]
    K = deformed_bessel_kernel(cfg["alpha"], u, ctx) if u else discrete_bessel_kernel(cfg["alpha"], ctx)
    limit = [K(x, y) for x, y in pairs]
    results = _pool_map(_thm1_row, int(cfg.get("jobs", 1)),
                        [(cfg["bits"], cfg["alpha"], cfg["u"], N, pairs) for N in cfg["N_list"]])
    rows, summary, prev = [], [], None
    for N, (vals, err_msg) in zip(cfg["N_list"], results):
        if vals is None:
            summary.append({"N": N, "error": err_msg})
            prev = None
            continue
        vals = [_unpack(ctx, v) for v in vals]
        errs = [abs(v - lim) for v, lim in zip(vals, limit)]
        worst = max(errs)
        ratio = prev / worst if prev is not None and worst else None
        summary.append({"N": N, "max_err": worst, "ratio": ratio})
        for (x, y), v, lim, e in zip(pairs, vals, limit, errs):
            rows.append((N, x, y, v, lim, e, worst, ratio))
        prev = worst
    return ["N", "x", "y", "K_N", "K_limit", "abs_err", "max_err", "ratio"], rows, ctx, summary


def _gamma_row(args):
    bits, cfg, xi, pairs = args
    ctx = get_context(bits)
    if cfg.get("u") is None:
        K = zmeas_deformed_kernel(_zparams(cfg, xi), [], ctx)
    else:
        K = scaled_deformed_zmeasure(GammaDeformParams(_zparams(cfg, xi), cfg["u"]), str(xi), ctx)
    return [_pack(K(x, y)) for x, y in pairs]


def converge_gamma(cfg):
    """Rows ``(xi, x, y, value, limit, err, max_err, slope)``.

    With ``u`` set the value is ``(1-xi)^2 K^1`` against the deformed Gamma
    kernel; with ``u`` null it is the undeformed ``K`` against the Gamma kernel.
    """
    ctx = get_context(cfg["bits"])
    pairs = [tuple(p) for p in cfg["pairs"]]
    zp = _zparams({**cfg, "xi": "0.5"})
    if cfg.get("u") is None:
        L = gamma_kernel(zp, ctx)
    else:
        L = gamma_deformed_kernel(GammaDeformParams(zp, cfg["u"]), ctx)
    limit = [L(x, y) for x, y in pairs]
    results = _pool_map(_gamma_row, int(cfg.get("jobs", 1)),
                        [(cfg["bits"], cfg, xi, pairs) for xi in cfg["xi_list"]])
    mp = ctx.mp
    rows, summary, prev = [], [], None
    for xi, vals in zip(cfg["xi_list"], results):
        vals = [_unpack(ctx, v) for v in vals]
        errs = [abs(v - lim) for v, lim in zip(vals, limit)]
        worst = max(errs)
        gap = 1 - ctx.num(str(xi))
        slope = mp.log(worst / prev[1]) / mp.log(gap / prev[0]) if prev and worst and prev[1] else None
        summary.append({"xi": str(xi), "max_err": worst, "slope": slope,
                        "max_limit": max(abs(v) for v in limit)})
        for (x, y), v, lim, e in zip(pairs, vals, limit, errs):
            rows.append((str(xi), x, y, v, lim, e, worst, slope))
        prev = (gap, worst)
    return ["xi", "x", "y", "value", "limit", "abs_err", "max_err", "slope"], rows, ctx, summary


def cmd_verify(cfg):
    ctx = get_context(cfg["bits"])
    return list(run_suite(cfg["suite"], ctx, int(cfg.get("fuzz_bits") or 0)))


def cmd_sample(cfg):
    """Configurations plus a histogram ``(x, count, empirical, K_xx, z_score)``."""
    ctx = get_context(cfg["bits"])
    spec = EnsembleSpec(_family(cfg), cfg["N"], DeformationSpec(tuple(str(v) for v in cfg.get("u") or [])))
    sampler = OPESampler(spec, cfg.get("truncation"), ctx)
    n = int(cfg["samples"])
    draws = sampler.draw_many(n, int(cfg["seed"]))
    counts = [0] * sampler.truncation
    for d in draws:
        for x in d:
            counts[x] += 1
    hist = []
    for x, c in enumerate(counts):
        p = float(sampler.K[x, x])
        sd = math.sqrt(n * p * (1 - p)) if 0 < p < 1 else 0.0
        z = (c - n * p) / sd if sd else None
        hist.append((x, c, c / n, p, z))
    return draws, hist, ctx


def cmd_oracle_compare(cfg):
    ctx = get_context(cfg["bits"])
    pts = cfg["points"]
    if cfg["target"] == "plancherel":
        r = brute_plancherel_corr(cfg["alpha"], pts, cfg["cutoff"], ctx)
        K = discrete_bessel_kernel(cfg["alpha"], ctx)
    elif cfg["target"] == "zmeasure":
        zp = _zparams(cfg)
        u = list(cfg.get("u") or [])
        r = brute_zmeasure_corr(zp, pts, cfg["cutoff"], kernel_side_deformation(zp, u) if u else None, ctx)
        K = zmeas_deformed_kernel(zp, u, ctx)
    else:
        raise ConfigError(f"unknown oracle target {cfg['target']!r}")
    minor = K.minor(pts) if pts else ctx.mp.one
    diff = abs(r.value - minor)
    row = (" ".join(str(p) for p in pts), r.value, minor, diff, r.tail, r.partitions)
    return ["points", "brute", "kernel_minor", "abs_diff", "tail", "partitions"], [row], ctx


# -- entry point -----------------------------------------------------------------------

def _parser():
    p = argparse.ArgumentParser(prog="christoffel-dpp", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in DEFAULTS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="JSON config file")
        s.add_argument("--bits", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--out", help="output path (default stdout)")
        if name == "verify":
            s.add_argument("suite", nargs="?")
            s.add_argument("--fuzz-bits", type=int, dest="fuzz_bits")
        if name in ("converge-thm1", "converge-gamma"):
            s.add_argument("--jobs", type=int)
    return p


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="") if path else contextlib.nullcontext(sys.stdout)


def run(argv=None):
    args = _parser().parse_args(argv)
    overrides = {"bits": args.bits, "seed": args.seed, "out": args.out}
    if args.command == "verify":
        overrides.update(suite=args.suite, fuzz_bits=args.fuzz_bits)
    if hasattr(args, "jobs"):
        overrides["jobs"] = args.jobs
    cfg = load_config(args.command, args.config, overrides)
    out = cfg.get("out")
    if args.command == "verify":
        records = cmd_verify(cfg)
        with _open_out(out) as fh:
            write_ndjson(records, fh)
        return EXIT_OK if all(r["passed"] for r in records) else EXIT_FAIL
    if args.command == "sample":
        draws, hist, ctx = cmd_sample(cfg)
        with _open_out(out) as fh:
            write_ndjson(({"sample": i, "points": list(d)} for i, d in enumerate(draws)), fh)
        hist_path = (out + ".hist.csv") if out else None
        with _open_out(hist_path) as fh:
            write_csv("sample-histogram", ["x", "count", "empirical", "K_xx", "z_score"], hist, ctx, fh)
        return EXIT_OK
    if args.command == "eval":
        cols, rows, ctx = cmd_eval(cfg)
    elif args.command == "converge-thm1":
        cols, rows, ctx, _ = converge_thm1(cfg)
    elif args.command == "converge-gamma":
        cols, rows, ctx, _ = converge_gamma(cfg)
    else:
        cols, rows, ctx = cmd_oracle_compare(cfg)
    with _open_out(out) as fh:
        write_csv(args.command, cols, rows, ctx, fh)
    return EXIT_OK


def main(argv=None):
    try:
        code = run(argv)
    except (ConfigError, AdmissibilityError, GuardError, NonPositiveWeightError, KeyError, TypeError,
            ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        code = EXIT_CONFIG
    except (DegenerateDeformationError, QuadratureError, TruncationError, BranchError, ArithmeticError) as exc:
        print(f"numerical degeneracy: {exc}", file=sys.stderr)
        code = EXIT_DEGENERATE
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
