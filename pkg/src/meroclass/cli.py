"""Command-line entry point.

Exit codes: 0 success, 1 negative mathematical verdict, 2 usage or input
error, 3 a search cell reported a conjecture violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .analysis import (boundary_zero_scan, largest_pole_free_radius, poles_report,
                       univalence_sample)
from .classfn import (ClassFunction, Verdict, expected_residual, extremal,
                      extremal_coefficient, membership_check, residual_identity_series)
from .conjecture import SearchConfig, results_csv, results_json, sweep
from .errors import InvalidOmega, MeroclassError
from .series import DEFAULT_ORDER, TaylorSeries

EXIT_OK, EXIT_VERDICT, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2, 3
IDENTITY_TOL = 1e-10


class UsageError(Exception):
    pass


def manifest(command: str, parameters: dict, seed: int) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _pair(z: complex) -> list:
    return [z.real, z.imag]


def _float_list(text: str, kind=float) -> list:
    try:
        return [kind(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list, got {text!r}")


def _emit(doc: dict, args, stem: str) -> None:
    text = json.dumps(doc, indent=2, allow_nan=True)
    print(text)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{stem}.json").write_text(text + "\n")


def _read_input(path: str, order: int):
    """A ClassFunction JSON document or a coefficient list (plain or under "coefficients").

    Coefficient lists shorter than the order are padded with zeros.
    """
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    if isinstance(obj, dict) and isinstance(obj.get("class_function"), dict):
        obj = obj["class_function"]  # output of the extremal command
    try:
        if isinstance(obj, dict) and "c" in obj:
            return ClassFunction.from_json(obj)
        coeffs = obj["coefficients"] if isinstance(obj, dict) else obj
        values = [complex(*v) if isinstance(v, list) else complex(v) for v in coeffs]
    except (KeyError, TypeError, ValueError, InvalidOmega) as exc:
        raise UsageError(f"malformed input {path}: {exc}")
    if len(values) < 2:
        raise UsageError("need at least the coefficients of z^0 and z^1")
    return TaylorSeries.from_coeffs(values, max(order, len(values) - 1))


# --------------------------------------------------------------------------

def cmd_extremal(args) -> int:
    cf = extremal(args.lam, args.p, args.theta, max(args.order, args.n_max))
    coeffs = [cf.f[n] for n in range(1, args.n_max + 1)]
    remark = [extremal_coefficient(n, args.lam, args.p) for n in range(1, args.n_max + 1)]
    params = {"lambda": args.lam, "p": args.p, "theta": args.theta, "n_max": args.n_max,
              "order": cf.order}
    doc = {
        "manifest": manifest("extremal", params, args.seed),
        "class_function": cf.to_json(),
        "coefficients": [_pair(a) for a in coeffs],
        "moduli": [abs(a) for a in coeffs],
        "remark_values": remark,
    }
    _emit(doc, args, "extremal")
    return EXIT_OK


def cmd_check(args) -> int:
    obj = _read_input(args.input, args.order)
    is_cf = isinstance(obj, ClassFunction)
    lam = args.lam if args.lam is not None else (obj.lam if is_cf else 1.0)
    f = obj.f if is_cf else obj
    report = membership_check(f, lam, samples=args.samples)
    doc = {
        "manifest": manifest("check", {"input": args.input, "lambda": lam,
                                       "pairs": args.pairs, "order": f.order}, args.seed),
        "membership": report.to_json(),
    }
    ok = report.verdict is Verdict.MEMBER
    if is_cf:
        t = residual_identity_series(obj).coeffs[: obj.order - 1]
        e = expected_residual(obj).coeffs[: obj.order - 1]
        # recomputing T from f loses accuracy in proportion to the size of f's coefficients
        scale = max(1.0, float(max(abs(obj.f.coeffs))))
        err = float(max(abs(t - e)))
        doc["residual_identity"] = {"max_abs_error": err, "coefficient_scale": scale,
                                    "ok": err <= IDENTITY_TOL * scale}
    try:
        pstar = largest_pole_free_radius(obj)
        uni = univalence_sample(obj, args.pairs, args.seed, region_radius=0.999 * pstar)
        doc["pole_free_radius"] = pstar
        doc["univalence"] = uni.to_json()
        ok = ok and not uni.violations
    except MeroclassError as exc:
        doc["univalence"] = {"error": f"{type(exc).__name__}: {exc}"}
        ok = False
    doc["boundary_arcs"] = [arc.to_json() for arc in boundary_zero_scan(obj, args.samples)]
    _emit(_finite(doc), args, "check")
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_poles(args) -> int:
    obj = _read_input(args.input, args.order)
    if not isinstance(obj, ClassFunction):
        raise UsageError("poles needs a ClassFunction JSON document")
    report = poles_report(obj, args.radius)
    doc = {
        "manifest": manifest("poles", {"input": args.input, "radius": args.radius,
                                       "order": obj.order}, args.seed),
        "report": report.to_json(),
    }
    _emit(doc, args, "poles")
    return EXIT_OK


def cmd_search(args) -> int:
    base = SearchConfig(n=args.n[0], lam=args.lam[0], p=args.p[0], restarts=args.restarts,
                        schur_depth=args.schur_depth, seed=args.seed,
                        max_evals_per_restart=args.max_evals, order=args.order)
    results = sweep(args.n, args.lam, args.p, base, workers=args.workers)
    params = {"n": args.n, "lambda": args.lam, "p": args.p, "restarts": args.restarts,
              "schur_depth": args.schur_depth, "max_evals_per_restart": args.max_evals,
              "order": args.order}
    man = manifest("search", params, args.seed)
    out = Path(args.out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    if args.format in ("csv", "both"):
        (out / "search_results.csv").write_text(results_csv(results))
        (out / "search_results.manifest.json").write_text(json.dumps(man, indent=2) + "\n")
    if args.format in ("json", "both"):
        (out / "search_results.json").write_text(results_json(results, man) + "\n")
    print(f"{'n':>3} {'lambda':>8} {'p':>8} {'bound':>14} {'best |a_n|':>14} "
          f"{'margin':>11} attained violated")
    for r in results:
        print(f"{r.n:>3} {r.lam:>8.4g} {r.p:>8.4g} {r.conjectured_bound:>14.10f} "
              f"{r.best_abs_an:>14.10f} {r.margin:>11.3e} {str(r.attained):>8} {str(r.violated):>8}")
    return EXIT_VIOLATION if any(r.violated for r in results) else EXIT_OK


def _finite(obj):
    # JSON has no infinities; encode them as strings
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_finite(v) for v in obj]
    return obj


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=DEFAULT_ORDER,
                        help="series truncation order N (default %(default)s)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out-dir", default=None, help="directory for persisted outputs")
    common.add_argument("--format", choices=("json", "csv", "both"), default="both")
    common.add_argument("--workers", type=int, default=None,
                        help="worker processes (default: $MEROCLASS_WORKERS or CPU count)")

    parser = argparse.ArgumentParser(prog="meroclass", parents=[common],
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extremal", parents=[common], help="extremal function and its coefficients")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--n-max", type=int, default=10)
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("check", parents=[common], help="membership and univalence checks")
    p.add_argument("input", help="ClassFunction JSON or a JSON list of Taylor coefficients")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--pairs", type=int, default=2000)
    p.add_argument("--samples", type=int, default=4096)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("poles", parents=[common], help="locate poles by fixed point and Newton")
    p.add_argument("input", help="ClassFunction JSON")
    p.add_argument("--radius", type=float, default=0.99)
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("search", parents=[common], help="maximize |a_n| and compare with the bound")
    p.add_argument("--n", type=lambda s: _float_list(s, int), default=[2])
    p.add_argument("--lambda", dest="lam", type=_float_list, default=[0.5])
    p.add_argument("--p", type=_float_list, default=[1.0])
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--schur-depth", type=int, default=2)
    p.add_argument("--max-evals", type=int, default=2000)
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "extremal" and args.n_max < 1:
        parser.error("--n-max must be >= 1")
    try:
        return args.func(args)
    except (UsageError, MeroclassError, ValueError) as exc:
        print(f"meroclass {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
