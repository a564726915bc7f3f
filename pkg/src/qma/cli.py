"""Command-line front end with deterministic JSON/CSV reports.

Exit codes: 0 success, 1 certificate-invalid or tolerance failure,
2 usage error.  Floats are rendered with 17 significant digits so that
identical flags produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import energy, hessian, ineq, quatlin

_FLOAT_FMT = ".17g"


class UsageError(ValueError):
    pass


def _fmt_float(v: float) -> str:
    v = float(v)
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    return format(v, _FLOAT_FMT)


def _render_json(obj) -> str:
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(k)}: {_render_json(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_render_json(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    return json.dumps(obj)


def _emit(obj, stream) -> None:
    stream.write(_render_json(obj) + "\n")


def _quadrature_spec() -> energy.QuadratureSpec:
    override = os.environ.get("QMA_RELTOL")
    if override is None:
        return energy.DEFAULT_QUADRATURE
    try:
        rel = float(override)
    except ValueError as exc:
        raise UsageError(f"QMA_RELTOL is not a number: {override!r}") from exc
    if rel <= 0.0:
        raise UsageError(f"QMA_RELTOL must be positive, got {override!r}")
    return energy.QuadratureSpec(rel_tol=rel)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _cmd_constants(args) -> int:
    _require(args.p > 0.0, "--p must be positive")
    _require(args.n >= 1, "--n must be >= 1")
    report = ineq.constants_report(args.p, args.n)
    _emit(
        {
            "p": report.p,
            "n": report.n,
            "alpha": report.alpha,
            "d_p": report.d_p,
            "f_pn": report.f_pn,
            "f_p2n": report.f_p2n,
        },
        sys.stdout,
    )
    return 0


def _cmd_moore_det(args) -> int:
    if args.infile is None:
        text = sys.stdin.read()
    else:
        try:
            with open(args.infile, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.infile}: {exc}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"matrix input is not valid JSON: {exc}") from exc
    try:
        matrix = quatlin.HyperhermitianMatrix.from_json_dict(payload)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    value = quatlin.moore_det(matrix)
    _emit({"dim": matrix.dim, "moore_det": value}, sys.stdout)
    return 0


def _cmd_density_check(args) -> int:
    _require(args.a > 0.0, "--a must be positive")
    _require(args.n >= 1, "--n must be >= 1")
    _require(args.samples >= 1, "--samples must be >= 1")
    if args.h is not None:
        _require(args.h > 0.0, "--h must be positive")
    member = hessian.PowerFamilyMember(args.a, args.n)
    func = member.as_function()
    rng = np.random.default_rng(20240811)
    max_rel = 0.0
    max_resid = 0.0
    for _ in range(args.samples):
        direction = rng.normal(size=4 * args.n)
        direction /= np.linalg.norm(direction)
        r = rng.uniform(0.2, 0.9)
        point = hessian.EvaluationPoint.from_coords(r * direction)
        matrix, resid = hessian.fd_quaternionic_hessian(func, point, args.h)
        fd_density = quatlin.moore_det(matrix)
        closed = hessian.ma_density(member, r)
        max_rel = max(max_rel, abs(fd_density - closed) / abs(closed))
        max_resid = max(max_resid, resid)
    _emit(
        {"max_rel_err": max_rel, "max_hh_residual": max_resid, "points_tested": args.samples},
        sys.stdout,
    )
    return 0


def _parse_tail(raw: str, n: int) -> list[float]:
    try:
        tail = [float(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"--ai must be a comma-separated list of reals: {raw!r}") from exc
    _require(len(tail) == n, f"--ai must list exactly n = {n} exponents, got {len(tail)}")
    _require(all(b > 0.0 for b in tail), "--ai entries must be positive")
    return tail


def _cmd_energy(args) -> int:
    _require(args.p > 0.0, "--p must be positive")
    _require(args.n >= 1, "--n must be >= 1")
    _require(args.a0 > 0.0, "--a0 must be positive")
    tail = _parse_tail(args.ai, args.n)
    params = energy.EnergyParams(args.p, args.n)
    spec = _quadrature_spec()
    uniform = all(b == tail[0] for b in tail)
    if args.method == "closed":
        _require(uniform, "--method closed requires all --ai entries equal")
        value = energy.energy_closed_pair(params, args.a0, tail[0])
        _emit({"value": value, "method": "closed_form", "discrepancy": None}, sys.stdout)
        return 0
    result = energy.energy_numeric(params, args.a0, tail, spec)
    if args.method == "quad" or result.method != "both":
        _emit({"value": result.value, "method": "quadrature", "discrepancy": None}, sys.stdout)
        return 0
    _emit(
        {"value": result.value, "method": result.method, "discrepancy": result.discrepancy},
        sys.stdout,
    )
    return 0


def _cmd_ratio_scan(args) -> int:
    _require(args.p > 0.0, "--p must be positive")
    _require(args.n >= 1, "--n must be >= 1")
    _require(args.grid >= 2, "--grid must be >= 2")
    _require(0.0 < args.amin < args.amax, "need 0 < --amin < --amax")
    _require(args.threads >= 1, "--threads must be >= 1")
    params = energy.EnergyParams(args.p, args.n)
    values, axis = ineq.ratio_grid(params, args.grid, args.amin, args.amax, args.threads)
    lines = ["a,b,R"]
    for i, a in enumerate(axis):
        for j, b in enumerate(axis):
            lines.append(f"{_fmt_float(a)},{_fmt_float(b)},{_fmt_float(values[i, j])}")
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def _cmd_counterexample(args) -> int:
    _require(args.p > 0.0, "--p must be positive")
    _require(args.n >= 1, "--n must be >= 1")
    _require(args.grid >= 2, "--grid must be >= 2")
    _require(0.0 < args.amin < args.amax, "need 0 < --amin < --amax")
    _require(args.threads >= 1, "--threads must be >= 1")
    params = energy.EnergyParams(args.p, args.n)
    cert = ineq.find_violation(
        params, _quadrature_spec(), args.grid, args.amin, args.amax, args.threads
    )
    _emit(
        {
            "p": cert.p,
            "n": cert.n,
            "a_star": cert.a_star,
            "b_star": cert.b_star,
            "ratio": cert.ratio,
            "f_value": cert.f_value,
            "quad_crosscheck": cert.quad_crosscheck,
            "error_bound": cert.error_bound,
            "violation_found": cert.violation_found,
        },
        sys.stdout,
    )
    return 0


def _cmd_lemma_f(args) -> int:
    _require(args.n_max >= 1, "--n-max must be >= 1")
    try:
        p_list = [float(tok) for tok in args.p_list.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"--p-list must be comma-separated reals: {args.p_list!r}") from exc
    _require(bool(p_list), "--p-list must not be empty")
    _require(all(p > 0.0 for p in p_list), "--p-list entries must be positive")
    entries = []
    for p in p_list:
        for n in range(1, args.n_max + 1):
            entries.append({"p": p, "n": n, "f": ineq.f_lemma(p, n)})
    _emit({"entries": entries}, sys.stdout)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qma",
        description="Quaternionic Monge-Ampere energy toolkit for the radial power family.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_const = sub.add_parser("constants", help="inequality constants for (p, n)")
    p_const.add_argument("--p", type=float, required=True)
    p_const.add_argument("--n", type=int, required=True)
    p_const.set_defaults(func=_cmd_constants)

    p_moore = sub.add_parser("moore-det", help="Moore determinant of a matrix JSON file")
    p_moore.add_argument("--in", dest="infile", default=None, help="path to matrix JSON (stdin if omitted)")
    p_moore.set_defaults(func=_cmd_moore_det)

    p_dens = sub.add_parser("density-check", help="FD density vs closed form for u_a")
    p_dens.add_argument("--a", type=float, required=True)
    p_dens.add_argument("--n", type=int, required=True)
    p_dens.add_argument("--samples", type=int, default=20)
    p_dens.add_argument("--h", type=float, default=None)
    p_dens.set_defaults(func=_cmd_density_check)

    p_energy = sub.add_parser("energy", help="mutual p-energy of u_{a0} against a tail")
    p_energy.add_argument("--p", type=float, required=True)
    p_energy.add_argument("--n", type=int, required=True)
    p_energy.add_argument("--a0", type=float, required=True)
    p_energy.add_argument("--ai", type=str, required=True, help="comma-separated tail exponents")
    p_energy.add_argument("--method", choices=("closed", "quad", "both"), default="both")
    p_energy.set_defaults(func=_cmd_energy)

    p_scan = sub.add_parser("ratio-scan", help="closed-form ratio on a log grid, as CSV")
    p_scan.add_argument("--p", type=float, required=True)
    p_scan.add_argument("--n", type=int, required=True)
    p_scan.add_argument("--grid", type=int, default=64)
    p_scan.add_argument("--amin", type=float, default=0.1)
    p_scan.add_argument("--amax", type=float, default=4.0)
    p_scan.add_argument("--out", type=str, default=None)
    p_scan.add_argument("--threads", type=int, default=1)
    p_scan.set_defaults(func=_cmd_ratio_scan)

    p_cex = sub.add_parser("counterexample", help="search for a ratio certificate")
    p_cex.add_argument("--p", type=float, required=True)
    p_cex.add_argument("--n", type=int, required=True)
    p_cex.add_argument("--grid", type=int, default=64)
    p_cex.add_argument("--amin", type=float, default=0.1)
    p_cex.add_argument("--amax", type=float, default=4.0)
    p_cex.add_argument("--threads", type=int, default=1)
    p_cex.set_defaults(func=_cmd_counterexample)

    p_lemma = sub.add_parser("lemma-f", help="table of f(p, n) values")
    p_lemma.add_argument("--n-max", dest="n_max", type=int, required=True)
    p_lemma.add_argument("--p-list", dest="p_list", type=str, required=True)
    p_lemma.set_defaults(func=_cmd_lemma_f)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ineq.CertificateError, energy.QuadratureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, quatlin.PairingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
