"""Command-line front end.

Every subcommand writes JSON (or CSV for tables and scans) to stdout with
rationals as ``"p/q"`` strings and floats to 17 significant digits, so equal
arguments give byte-identical output.  Exit status: 0 success, 1 a check
failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

import numpy as np

from . import _backend, acceptance, box_density, critical, hessian, laplace_polya, sinc_quad
from .errors import ConsistencyError, NonConvergent, NoSignChange
from .report import dumps, rat

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _number(tok: str):
    tok = tok.strip()
    try:
        return Fraction(tok) if "." not in tok and "e" not in tok.lower() else float(tok)
    except ValueError:
        raise UsageError(f"not a number: {tok!r}") from None


def _vector(text: str):
    vals = [_number(t) for t in text.split(",") if t.strip()]
    if not vals:
        raise UsageError("empty vector")
    if any(isinstance(x, float) for x in vals):
        vals = [float(x) for x in vals]
    return vals


def _cfg(args) -> sinc_quad.QuadratureConfig:
    return sinc_quad.QuadratureConfig(abs_tol=args.quad_tol, backend=args.backend)


def _emit(obj, out=None):
    text = dumps(obj) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows, header):
    return "\n".join([",".join(header)] + [",".join(map(str, r)) for r in rows]) + "\n"


# ---------------------------------------------------------------- commands


def cmd_jtable(args):
    rs = args.r or [0]
    rows = [[n] + [rat(laplace_polya.j_value(n, r)) for r in rs] for n in range(1, args.n_max + 1)]
    if args.format == "csv":
        sys.stdout.write(_csv(rows, ["n"] + [f"J_n({r})" for r in rs]))
    else:
        _emit([{"n": row[0], **{f"J_n({r})": v for r, v in zip(rs, row[1:])}} for row in rows])
    return EXIT_OK


def cmd_eulerian(args):
    rows = [[m] + [laplace_polya.eulerian(m, l) for l in range(0, m + 2)] for m in range(0, args.m_max + 1)]
    if args.format == "csv":
        width = args.m_max + 2
        header = ["m"] + [f"A(m,{l})" for l in range(width)]
        sys.stdout.write(_csv([r + [0] * (width + 1 - len(r)) for r in rows], header))
    else:
        _emit([{"m": r[0], "row": r[1:]} for r in rows])
    return EXIT_OK


def _is_exact(v):
    return all(isinstance(x, Fraction) for x in v)


def cmd_sigma(args):
    v = _vector(args.v)
    out = {"v": [x if isinstance(x, float) else rat(x) for x in v]}
    out["numeric"] = sinc_quad.sigma_num([float(x) for x in v], _cfg(args))
    if _is_exact(v):
        val = box_density.sigma_exact(v)
        out["exact"] = val
        out["exact_float"] = float(val)
    return EXIT_OK, out


def cmd_section(args):
    v = _vector(args.v)
    rho = _number(args.rho)
    out = {"v": [x if isinstance(x, float) else rat(x) for x in v], "rho": rho if isinstance(rho, float) else rat(rho)}
    out["numeric"] = sinc_quad.parallel_section_num([float(x) for x in v], float(rho), _cfg(args))
    if _is_exact(v) and isinstance(rho, Fraction):
        val = box_density.section_volume(v, rho)
        out["exact"] = val
        out["exact_float"] = float(val)
    return EXIT_OK, out


def cmd_grad(args):
    v = np.array([float(x) for x in _vector(args.v)])
    v /= np.linalg.norm(v)
    g = sinc_quad.sigma_grad(v, _cfg(args))
    return EXIT_OK, {"v": v.tolist(), "grad": g.tolist(), "tangential": (g - np.dot(g, v) * v).tolist()}


def cmd_verify(args):
    what = args.what
    entries = args.entries
    if what == "ratio":
        rep = laplace_polya.verify_ratio_theorem(args.n_max or 40, keep_entries=entries)
    elif what == "corollary":
        rep = laplace_polya.verify_corollary(args.n_max or 60, keep_entries=entries)
    elif what == "ln":
        rep = laplace_polya.verify_ln_estimate(args.n_max or 40, keep_entries=entries)
    elif what == "eulerian-bounds":
        rep = laplace_polya.verify_eulerian_bounds(args.m_max or args.n_max or 50, keep_entries=entries)
    elif what == "monotonicity":
        rep = laplace_polya.monotonicity_report(args.n_max or 200, keep_entries=entries)
    else:
        return _verify_asymptotic(args)
    code = EXIT_OK if rep.passed else EXIT_FAIL
    return code, rep.to_dict(include_entries=entries)


def _verify_asymptotic(args):
    C = laplace_polya.ASYMPTOTIC_ERROR_CONSTANT
    n_max = args.n_max or 500
    rows, ok = [], True
    for n in range(50, n_max + 1):
        err = abs(float(laplace_polya.j_value(n, 0) - Fraction(laplace_polya.asymptotic_j0(n, 3))))
        good = err <= C / n**4
        ok &= good
        if args.entries:
            rows.append({"n": n, "error": err, "bound": C / n**4})
    out = {"theorem": "asymptotic-expansion", "range": {"n": [50, n_max]}, "C": C, "pass": ok}
    if rows:
        out["entries"] = rows
    return (EXIT_OK if ok else EXIT_FAIL), out


def cmd_xi(args):
    res = critical.find_xi(args.n, args.tol or args.root_tol, _cfg(args), jobs=args.jobs)
    ok = abs(res.F_residual) <= args.check_tol and res.criticality_residual_max <= args.check_tol
    return (EXIT_OK if ok else EXIT_FAIL), {"n": args.n, **res.to_dict()}


def emit_scan(n, k, samples, out, *, a_lo=None, a_hi=None, cfg=sinc_quad.DEFAULT, jobs=1):
    """Write the ``a,F`` scan as CSV to ``out`` and its metadata next to it."""
    rows = critical.scan_F(n, k, a_lo, a_hi, samples, cfg, jobs)
    meta = {
        "n": n,
        "k": k,
        "a_lo": rows[0][0],
        "a_hi": rows[-1][0],
        "samples": samples,
        "quad_tol": cfg.abs_tol,
        "sign_changes": len(critical.sign_changes([f for _, f in rows])),
    }
    text = critical.scan_csv(rows)
    if out in (None, "-"):
        sys.stdout.write(text)
        return meta
    try:
        with open(out, "w") as fh:
            fh.write(text)
        with open(out + ".json", "w") as fh:
            fh.write(dumps(meta) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write scan to {out}: {exc.strerror}") from exc
    return meta


def cmd_scan_f(args):
    meta = emit_scan(args.n, args.k, args.samples, args.out, a_lo=args.a_lo, a_hi=args.a_hi, cfg=_cfg(args), jobs=args.jobs)
    if args.out not in (None, "-"):
        _emit(meta)
    return EXIT_OK


def cmd_hessian(args):
    lo = args.n
    hi = args.n_max or args.n
    out, ok = [], True
    for n in range(lo, hi + 1):
        summ = hessian.local_max_certificate(n)
        d = summ.to_dict()
        if n >= 6:
            cert = hessian.delta_negative_certificate(n)
            d["delta_bound_holds"] = cert.passed
            ok &= cert.passed
        if n >= 4:
            ok &= summ.verdict == "strict-local-max"
        out.append(d)
    return (EXIT_OK if ok else EXIT_FAIL), out[0] if lo == hi else out


def cmd_saddle(args):
    cfg = _cfg(args)
    xi = args.xi if args.xi is not None else critical.find_xi(args.n, args.root_tol, cfg, jobs=args.jobs).xi
    paths = hessian.saddle_gap_paths(args.n, xi, cfg)
    upper = hessian.saddle_upper_bound(args.n, xi)
    ok = paths["difference"] <= 1e-6 and paths["identity"] < 0
    return (EXIT_OK if ok else EXIT_FAIL), {"n": args.n, "xi": xi, **paths, "upper_bound": upper}


def cmd_all(args):
    settings = acceptance.Settings(
        quad=_cfg(args), root_tol=args.root_tol, check_tol=args.check_tol, jobs=args.jobs
    )
    wanted = set(args.only) if args.only else None

    def progress(res):
        print(res.line(), file=sys.stderr, flush=True)

    results = acceptance.run(wanted, settings, fail_fast=not args.keep_going, on_result=progress)
    failed = [r for r in results if not r.passed]
    # timings go to stderr only; stdout stays deterministic
    record = {
        "pass": not failed,
        "results": [{k: v for k, v in r.to_dict().items() if k != "seconds"} for r in results],
    }
    if failed:
        record["first_failure"] = failed[0].number
    return (EXIT_OK if not failed else EXIT_FAIL), record


# ---------------------------------------------------------------- parser


def _positive_float(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    env_jobs = os.environ.get("CUBESECT_JOBS")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quad-tol", type=_positive_float, default=1e-12, help="quadrature absolute tolerance")
    common.add_argument("--root-tol", type=_positive_float, default=1e-10, help="root bracket width")
    common.add_argument("--check-tol", type=_positive_float, default=1e-8, help="cross-check tolerance")
    common.add_argument(
        "--jobs", type=int, default=int(env_jobs) if env_jobs else 1, help="worker processes (env CUBESECT_JOBS)"
    )
    common.add_argument("--backend", choices=["cython", "python"], default=None, help="kernel implementation")

    p = argparse.ArgumentParser(prog="cubesect", description="Sections of the unit cube and Laplace-Polya integrals.")
    p.add_argument("--version", action="version", version=f"%(prog)s (kernels: {_backend.BACKEND})")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("jtable", parents=[common], help="exact table of J_n(r)")
    s.add_argument("--n-max", type=int, default=10)
    s.add_argument("--r", type=int, action="append", help="frequency (repeatable; default 0)")
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.set_defaults(func=cmd_jtable)

    s = sub.add_parser("eulerian", parents=[common], help="Eulerian number triangle")
    s.add_argument("--m-max", type=int, default=10)
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.set_defaults(func=cmd_eulerian)

    s = sub.add_parser("sigma", parents=[common], help="central section volume")
    s.add_argument("--v", required=True, help="comma separated weights, e.g. 1,1,2,2 or 0.8,0.6")
    s.set_defaults(func=cmd_sigma)

    s = sub.add_parser("section", parents=[common], help="parallel section volume")
    s.add_argument("--v", required=True)
    s.add_argument("--rho", required=True)
    s.set_defaults(func=cmd_section)

    s = sub.add_parser("grad", parents=[common], help="gradient of the section function")
    s.add_argument("--v", required=True, help="direction (normalised before use)")
    s.set_defaults(func=cmd_grad)

    s = sub.add_parser("verify", parents=[common], help="exact inequality sweeps")
    s.add_argument("what", choices=["ratio", "corollary", "ln", "eulerian-bounds", "monotonicity", "asymptotic"])
    s.add_argument("--n-max", type=int)
    s.add_argument("--m-max", type=int)
    s.add_argument("--entries", action="store_true", help="include every checked case")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("xi", parents=[common], help="non-diagonal critical parameter xi_n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--tol", type=_positive_float, help="root tolerance (overrides --root-tol)")
    s.set_defaults(func=cmd_xi)

    s = sub.add_parser("scan-f", parents=[common], help="sample F_{n,k} on I_k")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--a-lo", type=float)
    s.add_argument("--a-hi", type=float)
    s.add_argument("--out", help="CSV path (metadata goes to PATH.json); stdout if omitted")
    s.set_defaults(func=cmd_scan_f)

    s = sub.add_parser("hessian", parents=[common], help="local maximality certificate at d_n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--n-max", type=int, help="sweep n..n-max")
    s.set_defaults(func=cmd_hessian)

    s = sub.add_parser("saddle", parents=[common], help="saddle test at the two-level critical direction")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--xi", type=float, help="defaults to the computed xi_n")
    s.set_defaults(func=cmd_saddle)

    s = sub.add_parser("all", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", type=int, action="append", help="criterion number (repeatable)")
    s.add_argument("--keep-going", action="store_true", help="do not stop at the first failure")
    s.set_defaults(func=cmd_all)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs < 1:
        parser.print_usage(sys.stderr)
        print("cubesect: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = args.func(args)
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"cubesect: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cubesect: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (NonConvergent, NoSignChange, ConsistencyError) as exc:
        _emit({"pass": False, "error": f"{type(exc).__name__}: {exc}"})
        return EXIT_FAIL
    if isinstance(result, tuple):
        code, payload = result
        _emit(payload)
        return code
    return result


if __name__ == "__main__":
    sys.exit(main())
