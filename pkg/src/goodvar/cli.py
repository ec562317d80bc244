"""Command-line front end.

Subcommands: sieve, vd, deconv, oracle, scan, check.  Every run is
deterministic; CSV output is byte-identical across repeated runs (floats
are written with round-trip repr, exact rationals as p/q), and runs that
write CSV also drop a JSON sidecar recording the full configuration and a
checksum of the output.  Exit codes: 0 success / PASS, 1 FAIL verdict,
2 usage errors.

A flat key=value config file (--config PATH) supplies defaults for any
long flag of the chosen subcommand; explicit flags win.  The environment
variable GOODVAR_OUTDIR sets the directory for relative output paths.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .sequences import (
    Sequence, alternating_unit, chi4, dh_sequence, liouville_sieve,
    mobius_sieve, ones, ramanujan_tau, summatory,
)
from .kernels import parse_theta, vd_sample
from .dirichlet import convolve, invert, lemma1_check
from .solver import Target, scaled_trace, solve
from . import closedforms as cf
from .conditions import area_vd, check_compensation, check_comparison_smooth, \
    check_section7, extract_IJ
from .diagnostics import classify_type, conjecture_ABC_scan, estimate_index

ENV_OUTDIR = "GOODVAR_OUTDIR"

_SIEVES = {
    "mobius": mobius_sieve,
    "liouville": liouville_sieve,
    "tau": ramanujan_tau,
    "chi4": chi4,
    "dh": dh_sequence,
    "alt": alternating_unit,
}


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return str(v)  # p/q, or p when integral
    return str(v)


def _resolve(path: str) -> str:
    outdir = os.environ.get(ENV_OUTDIR, "")
    if outdir and not os.path.isabs(path):
        os.makedirs(outdir, exist_ok=True)
        return os.path.join(outdir, path)
    return path


def _write_csv(path: str, header: list[str], rows) -> tuple[str, int]:
    """Write rows; return (sha256 hex, row count).  '\\n' endings always."""
    lines = [",".join(header)]
    count = 0
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
        count += 1
    data = ("\n".join(lines) + "\n").encode()
    with open(path, "wb") as fh:
        fh.write(data)
    return hashlib.sha256(data).hexdigest(), count


def _sidecar(path: str, payload: dict) -> None:
    with open(path + ".json", "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _progress(args, msg: str) -> None:
    if not getattr(args, "quiet", False):
        print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommand implementations

def _cmd_sieve(args) -> int:
    seq = _SIEVES[args.kind](args.n)
    if args.summatory:
        seq = summatory(seq)
    out = _resolve(args.out)
    digest, rows = _write_csv(out, ["n", "value"],
                              ((n, seq[n]) for n in range(1, args.n + 1)))
    _sidecar(out, {"tool": "goodvar", "version": __version__, "command": "sieve",
                   "kind": args.kind, "n": args.n, "summatory": bool(args.summatory),
                   "rows": rows, "sha256": digest})
    _progress(args, f"wrote {out} ({rows} rows)")
    return 0


def _cmd_vd(args) -> int:
    theta = parse_theta(args.theta, zlen=args.zlen)
    table = vd_sample(theta, args.points, args.tmin)
    out = _resolve(args.out)
    digest, rows = _write_csv(out, ["t", "theta_diamond"],
                              ((float(t), float(v)) for t, v in table))
    _sidecar(out, {"tool": "goodvar", "version": __version__, "command": "vd",
                   "theta": args.theta, "points": args.points, "tmin": args.tmin,
                   "rows": rows, "sha256": digest})
    _progress(args, f"wrote {out} ({rows} rows)")
    return 0


def _cmd_deconv(args) -> int:
    theta = parse_theta(args.theta, zlen=max(args.n, 16))
    target = Target.parse(args.target)
    t0 = time.perf_counter()
    run = solve(theta, target, args.n, mode=args.mode, kernel_form=args.kernel_form,
                force_generic=args.force_generic, allow_large=args.allow_large)
    elapsed = time.perf_counter() - t0
    if args.emit == "a":
        seq = run.a
        rows_iter = ((n, seq[n]) for n in range(1, args.n + 1))
        header = ["n", "value"]
    elif args.emit == "A":
        seq = run.A
        rows_iter = ((n, seq[n]) for n in range(1, args.n + 1))
        header = ["n", "value"]
    else:
        table = scaled_trace(run, args.alpha)
        rows_iter = ((int(n), float(v)) for n, v in table)
        header = ["n", "value"]
    out = _resolve(args.out)
    digest, rows = _write_csv(out, header, rows_iter)
    _sidecar(out, {"tool": "goodvar", "version": __version__, "command": "deconv",
                   "theta": args.theta, "target": args.target, "n": args.n,
                   "mode": args.mode, "kernel_form": args.kernel_form,
                   "emit": args.emit, "alpha": args.alpha,
                   "path": run.path, "elapsed_s": round(elapsed, 6),
                   "rows": rows, "sha256": digest})
    _progress(args, f"solved {args.theta} / {args.target} at N={args.n} "
                    f"({run.path} path, {elapsed:.3f}s); wrote {out}")
    return 0


def _cmd_oracle(args) -> int:
    case = args.case
    out = _resolve(args.out) if args.out else None
    if case == "v23root":
        s1 = cf.v23_root_s1()
        if out:
            digest, rows = _write_csv(out, ["name", "value"], [("s1", s1)])
            _sidecar(out, {"tool": "goodvar", "version": __version__,
                           "command": "oracle", "case": case, "rows": rows,
                           "sha256": digest})
        print(f"s1 = {s1!r}")
        return 0
    if case == "dirac":
        table = cf.dirac_U_table(args.r, args.n)
        rows_iter = [(n, table[n]) for n in range(1, args.n + 1)]
        header = ["n", "value"]
    elif case == "pow2":
        seq = cf.pow2_aprime(args.n)
        rows_iter = [(n, seq[n]) for n in range(1, args.n + 1)]
        header = ["n", "value"]
    elif case == "v23":
        ys = np.geomspace(1.0, args.y_max, args.points)
        rows_iter = [(float(y), cf.v23_series(y)) for y in ys]
        header = ["y", "value"]
    elif case == "smooth":
        ys = np.geomspace(1.0, args.y_max, args.points)
        rows_iter = [(float(y), cf.smooth_ode_solution(args.lam, args.beta,
                                                       args.c1, args.c2, y))
                     for y in ys]
        header = ["y", "value"]
    elif case == "linear":
        ys = np.geomspace(1.0, args.y_max, args.points)
        rows_iter = [(float(y), cf.linear_theta_solution(args.r, args.s, args.beta,
                                                         args.a, args.c, y))
                     for y in ys]
        header = ["y", "value"]
    else:
        raise ValueError(f"unknown oracle case {case!r}")
    if not out:
        raise ValueError(f"oracle case {case} needs --out")
    digest, rows = _write_csv(out, header, rows_iter)
    _sidecar(out, {"tool": "goodvar", "version": __version__, "command": "oracle",
                   "case": case, "params": {k: getattr(args, k) for k in
                                            ("r", "s", "beta", "a", "c", "lam",
                                             "c1", "c2", "n", "y_max", "points")
                                            if hasattr(args, k)},
                   "rows": rows, "sha256": digest})
    _progress(args, f"wrote {out} ({rows} rows)")
    return 0


def _cmd_scan(args) -> int:
    if args.suite == "abc":
        ms = [int(x) for x in args.ms.split(",") if x]
        rep = conjecture_ABC_scan(ms, args.n, workers=args.workers)
        payload = {
            "tool": "goodvar", "version": __version__, "command": "scan",
            "suite": "abc", "ms": rep.ms, "n": rep.n, "n0": rep.n0,
            "baseline_slope": rep.baseline_slope,
            "constants": rep.constants,
            "entries": [{"m": e.m, "theta": e.theta_spec, "dominated": e.dominated,
                         "first_violation": e.first_violation,
                         "violations": e.violation_count} for e in rep.entries],
        }
        ok = all(e.dominated in (True, None) for e in rep.entries) \
            and rep.baseline_slope > 0.0
        if args.out:
            out = _resolve(args.out)
            header = ["n"] + [f"A_{2 * m}_sqrt_n" for m in rep.ms]
            digest, rows = _write_csv(out, header,
                                      (tuple(row) for row in rep.overlay.tolist()))
            payload["rows"] = rows
            payload["sha256"] = digest
            _sidecar(out, payload)
            _progress(args, f"wrote {out}")
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0 if ok else 1
    # index scan: one solve, alpha sweep
    theta = parse_theta(args.theta, zlen=max(args.n, 16))
    target = Target.parse(args.target)
    run = solve(theta, target, args.n, mode="float")
    est = estimate_index(run.A)
    lo, hi, step = (float(x) for x in args.alphas.split(":"))
    sweep = []
    alpha = lo
    while alpha <= hi + 1e-12:
        sweep.append({"alpha": round(alpha, 10),
                      "classification": classify_type(run.A, alpha)})
        alpha += step
    payload = {
        "tool": "goodvar", "version": __version__, "command": "scan",
        "theta": args.theta, "target": args.target, "n": args.n,
        "alpha_hat": est.alpha_hat, "slowly_varying": est.slowly_varying_flag,
        "confidence": est.confidence_note, "constants": est.constants,
        "sweep": sweep,
    }
    if args.out:
        out = _resolve(args.out)
        digest, rows = _write_csv(out, ["n", "value"],
                                  ((n, run.A[n]) for n in range(1, args.n + 1)))
        payload["rows"] = rows
        payload["sha256"] = digest
        _sidecar(out, payload)
        _progress(args, f"wrote {out}")
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _check_lemma1(args) -> int:
    t = args.t
    zlen = max(t, 16)
    if args.z == "ones":
        z = ones(zlen)
    elif args.z == "chi4":
        z = chi4(zlen)
    elif args.z == "alt":
        z = alternating_unit(zlen)
    elif args.z == "tau":
        tau = ramanujan_tau(zlen)
        z = Sequence(np.array([float(tau[k]) / k ** 5.5 for k in range(1, zlen + 1)]),
                     label="tau/k^5.5")
    elif args.z == "dh":
        z = dh_sequence(zlen)
    else:
        raise ValueError(f"unknown z stream {args.z!r}")
    x = invert(convolve(ones(zlen), z, zlen), zlen)
    res = lemma1_check(x, z, t)
    print(f"lhs = {_fmt(res.lhs)}")
    print(f"rhs = {_fmt(res.rhs)}")
    print("PASS" if res.equal else "FAIL")
    return 0 if res.equal else 1


def _check_compensation(args) -> int:
    theta = parse_theta(args.theta, zlen=max(8 * args.depth, 64))
    profile = extract_IJ(theta, args.depth)
    rep = check_compensation(profile)
    payload = {
        "theta": args.theta, "depth": rep.depth, "guard": rep.guard,
        "predicted_index": rep.predicted_index,
        "conditions": [{"name": c.name, "status": c.status,
                        "witness": c.witness, "detail": c.detail}
                       for c in rep.conditions],
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    print("PASS" if rep.all_pass else "FAIL")
    return 0 if rep.all_pass else 1


def _check_section7(args) -> int:
    rep = check_section7()
    payload = {
        "max": [rep.max1, rep.max2], "min": [rep.min1, rep.min2],
        "area_shifted": rep.area1, "area_floor": rep.area2,
        "area_floor_expected": rep.area2_expected,
        "negative_jumps_ok": rep.negative_jumps_ok,
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    print("PASS" if rep.passed else "FAIL")
    return 0 if rep.passed else 1


def _check_comparison(args) -> int:
    t1 = parse_theta(args.theta1)
    t2 = parse_theta(args.theta2)
    rep = check_comparison_smooth(t1, t2, grid=args.grid)
    payload = {
        "theta1": args.theta1, "theta2": args.theta2, "grid": rep.grid,
        "ordered": rep.ordered, "first_order_violation": rep.first_order_violation,
        "variations_match": rep.variations_match,
        "first_variation_mismatch": rep.first_variation_mismatch,
        "identical": rep.identical,
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    print("PASS" if rep.passed else "FAIL")
    return 0 if rep.passed else 1


def _cmd_check(args) -> int:
    if args.suite == "lemma1":
        return _check_lemma1(args)
    if args.suite == "compensation":
        return _check_compensation(args)
    if args.suite == "section7":
        return _check_section7(args)
    if args.suite == "comparison":
        return _check_comparison(args)
    raise ValueError(f"unknown check suite {args.suite!r}")


# ---------------------------------------------------------------------------
# parser

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="goodvar",
                                description="deconvolution experiments for kernels of good variation")
    p.add_argument("--version", action="version", version=f"goodvar {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--quiet", action="store_true",
                        help="suppress progress lines on stderr")
        sp.add_argument("--config", default="",
                        help="flat key=value file supplying flag defaults")

    sp = sub.add_parser("sieve", help="emit an arithmetic sequence as CSV")
    sp.add_argument("--kind", required=True, choices=sorted(_SIEVES))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--summatory", action="store_true")
    sp.add_argument("--out", required=True)
    common(sp)
    sp.set_defaults(func=_cmd_sieve)

    sp = sub.add_parser("vd", help="sample a variational diagram")
    sp.add_argument("--theta", required=True)
    sp.add_argument("--points", type=int, default=512)
    sp.add_argument("--tmin", type=float, default=0.01)
    sp.add_argument("--zlen", type=int, default=1024)
    sp.add_argument("--out", required=True)
    common(sp)
    sp.set_defaults(func=_cmd_vd)

    sp = sub.add_parser("deconv", help="solve the triangular recurrence")
    sp.add_argument("--theta", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mode", choices=("float", "exact"), default="float")
    sp.add_argument("--kernel-form", dest="kernel_form",
                    choices=("normalized", "raw"), default="normalized")
    sp.add_argument("--emit", choices=("a", "A", "scaled"), default="a")
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--force-generic", action="store_true")
    sp.add_argument("--allow-large", action="store_true")
    sp.add_argument("--out", required=True)
    common(sp)
    sp.set_defaults(func=_cmd_deconv)

    sp = sub.add_parser("oracle", help="evaluate a closed-form solution")
    sp.add_argument("--case", required=True,
                    choices=("smooth", "linear", "v23", "v23root", "dirac", "pow2"))
    sp.add_argument("--r", type=float, default=0.75)
    sp.add_argument("--s", type=float, default=1.0)
    sp.add_argument("--beta", type=float, default=0.5)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--c", type=float, default=0.0)
    sp.add_argument("--lam", type=float, default=2.0)
    sp.add_argument("--c1", type=float, default=0.0)
    sp.add_argument("--c2", type=float, default=0.0)
    sp.add_argument("--n", type=int, default=1024)
    sp.add_argument("--y-max", dest="y_max", type=float, default=1e6)
    sp.add_argument("--points", type=int, default=512)
    sp.add_argument("--out", default="")
    common(sp)
    sp.set_defaults(func=_cmd_oracle)

    sp = sub.add_parser("scan", help="index scans and the truncated-floor suite")
    sp.add_argument("--suite", choices=("abc",), default=None)
    sp.add_argument("--theta", default="floor")
    sp.add_argument("--target", default="recip")
    sp.add_argument("--n", type=int, default=2 ** 14)
    sp.add_argument("--alphas", default="0.3:0.7:0.05")
    sp.add_argument("--ms", default="1,2,3,4,5")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", default="")
    common(sp)
    sp.set_defaults(func=_cmd_scan)

    sp = sub.add_parser("check", help="identity and condition checkers")
    sp.add_argument("--suite", required=True,
                    choices=("lemma1", "compensation", "section7", "comparison"))
    sp.add_argument("--z", default="chi4",
                    choices=("ones", "chi4", "tau", "alt", "dh"))
    sp.add_argument("--t", type=int, default=500)
    sp.add_argument("--theta", default="floor")
    sp.add_argument("--depth", type=int, default=64)
    sp.add_argument("--theta1", default="smooth:lambda=2.2")
    sp.add_argument("--theta2", default="smooth:lambda=2")
    sp.add_argument("--grid", type=int, default=2048)
    common(sp)
    sp.set_defaults(func=_cmd_check)

    return p


def _apply_config(parser_args: argparse.Namespace, argv: list[str]) -> None:
    """key=value config as defaults for unset flags; explicit flags win."""
    path = getattr(parser_args, "config", "")
    if not path:
        return
    explicit = {a.split("=", 1)[0].lstrip("-").replace("-", "_")
                for a in argv if a.startswith("--")}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            key = key.strip().replace("-", "_")
            val = val.strip()
            if not hasattr(parser_args, key) or key in explicit:
                continue
            cur = getattr(parser_args, key)
            if isinstance(cur, bool):
                setattr(parser_args, key, val.lower() in ("1", "true", "yes", "on"))
            elif isinstance(cur, int):
                setattr(parser_args, key, int(val))
            elif isinstance(cur, float):
                setattr(parser_args, key, float(val))
            else:
                setattr(parser_args, key, val)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_config(args, argv)
        return args.func(args)
    except (ValueError, KeyError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
