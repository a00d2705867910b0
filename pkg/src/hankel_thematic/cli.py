"""Command-line front end.

    hankel-thematic analyze SYMBOL
    hankel-thematic verify BUNDLE SYMBOL
    hankel-thematic residual SYMBOL BUNDLE_A BUNDLE_B
    hankel-thematic refute SYMBOL K [K ...]

Exit codes: 0 success, 1 parse error, 2 numeric error, 3 ambiguous spectrum,
4 a check failed (verification, equivalence or the candidate indices).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from .config import GridSpec, ToleranceConfig
from .errors import AmbiguousSpectrum, NotEquivalent, NumericError, ParseError, UnsupportedRepresentation
from .hankel import dim_table, essential_norm_bound, hankel_norm, iota
from .invariance import bundle_residual, recover_from_table, residual_equivalence, verify_dimension_formula
from .symbol_io import load_bundle, load_symbol, matrix_to_json
from .thematic import indices, verify_bundle

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_NUMERIC = 2
EXIT_AMBIGUOUS = 3
EXIT_FAILED = 4


@dataclass(frozen=True)
class RunConfig:
    trunc: int | None
    grid: GridSpec
    tol: ToleranceConfig
    fmt: str
    kappa_max: int | None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        try:
            tol = ToleranceConfig(eq_tol=args.tol, sv_tol=args.sv_tol, coeff_tol=args.coeff_tol)
            grid = GridSpec(samples=args.samples)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        if args.trunc is not None and args.trunc < 1:
            raise ParseError("--trunc must be >= 1")
        if args.kappa_max is not None and args.kappa_max < 0:
            raise ParseError("--kappa-max must be >= 0")
        return cls(args.trunc, grid, tol, args.format, args.kappa_max)


class _Notes(warnings.catch_warnings):
    """Collect warnings raised during a command as report notes."""

    def __init__(self):
        super().__init__(record=True)

    def __enter__(self):
        self.log = super().__enter__()
        warnings.simplefilter("always")
        return self

    @property
    def messages(self) -> list[str]:
        return [f"{w.category.__name__}: {w.message}" for w in self.log]


def cmd_analyze(symbol_file, config: RunConfig) -> tuple[dict, int]:
    phi = load_symbol(symbol_file)
    report = {"symbol": str(symbol_file), "shape": list(phi.shape), "kind": phi.kind}
    with _Notes() as notes:
        t0 = hankel_norm(phi, config.trunc, config.grid, config.tol)
        report["hankel_norm"] = t0
        ess, cert = essential_norm_bound(phi)
        report["essential_norm"] = {"value": ess, "certificate": cert}
        if t0 <= config.tol.coeff_tol:
            report["vanishes"] = True
            report["message"] = "Hankel operator vanishes"
        else:
            report["vanishes"] = False
            try:
                report["iota"] = iota(phi, config.grid, config.tol)
                table = dim_table(phi, t0, config.kappa_max, config.grid, config.tol)
                report["dim_table"] = [{"kappa": e.kappa, "D": e.D, "gap": e.gap if math.isfinite(e.gap) else None}
                                       for e in table.entries]
                if table.dims[-1] == 0:
                    ks = recover_from_table(table)
                    report["indices"] = list(ks)
                    report["nu"] = sum(ks)
                else:
                    report["indices"] = None
                    report["nu"] = None
                    notes.log.append(warnings.WarningMessage(
                        "D-table does not reach 0; raise --kappa-max to recover indices", UserWarning, "", 0))
            except UnsupportedRepresentation as exc:
                notes.log.append(warnings.WarningMessage(str(exc), UserWarning, "", 0))
    report["notes"] = notes.messages
    return report, EXIT_OK


def cmd_verify(bundle_file, symbol_file, config: RunConfig) -> tuple[dict, int]:
    bundle = load_bundle(bundle_file)
    phi = load_symbol(symbol_file)
    report = {"bundle": str(bundle_file), "symbol": str(symbol_file)}
    with _Notes() as notes:
        rep = verify_bundle(bundle, phi, config.grid, config.tol)
        report["checks"] = rep.checks
        report["passed"] = rep.ok
        try:
            idx = indices(bundle, config.grid, config.tol)
            report["indices"] = list(idx.indices)
            report["values"] = list(idx.values)
            report["nu"] = [{"t": t, "sum": s} for t, s in idx.nu.items()]
            report["monotone"] = idx.monotone
            report["iota_bound_ok"] = idx.iota_bound_ok
        except NumericError as exc:
            report["indices"] = None
            report["monotone"] = None
            notes.log.append(warnings.WarningMessage(f"indices unavailable: {exc}", UserWarning, "", 0))
    report["notes"] = notes.messages
    return report, EXIT_OK if rep.ok else EXIT_FAILED


def cmd_residual(symbol_file, bundle_a, bundle_b, config: RunConfig) -> tuple[dict, int]:
    phi = load_symbol(symbol_file)
    bundles = [load_bundle(bundle_a), load_bundle(bundle_b)]
    report = {"symbol": str(symbol_file), "bundles": [str(bundle_a), str(bundle_b)]}
    with _Notes() as notes:
        refused = {}
        for name, b in zip(("A", "B"), bundles):
            rep = verify_bundle(b, phi, config.grid, config.tol)
            if not rep.ok:
                refused[name] = rep.failures
        if refused:
            report["equivalent"] = None
            report["refused"] = refused
            report["notes"] = notes.messages
            return report, EXIT_FAILED
        psi_a, psi_b = (bundle_residual(phi, b) for b in bundles)
        report["residual_shape"] = list(psi_a.shape)
        try:
            eq = residual_equivalence(psi_a, psi_b, config.grid, config.tol)
        except NotEquivalent as exc:
            report["equivalent"] = False
            report["deviation"] = exc.deviation
            code = EXIT_FAILED
        else:
            report["equivalent"] = True
            report["deviation"] = eq.max_deviation
            report["sweeps"] = eq.sweeps
            report["U1"] = matrix_to_json(eq.U1)
            report["U2"] = matrix_to_json(eq.U2)
            code = EXIT_OK
    report["notes"] = notes.messages
    return report, code


def cmd_refute(symbol_file, candidates, config: RunConfig) -> tuple[dict, int]:
    phi = load_symbol(symbol_file)
    cands = [int(k) for k in candidates]
    if any(k < 1 for k in cands):
        raise ParseError("candidate indices must be positive integers")
    report = {"symbol": str(symbol_file), "candidates": cands}
    with _Notes() as notes:
        t0 = hankel_norm(phi, config.trunc, config.grid, config.tol)
        report["level"] = t0
        dr = verify_dimension_formula(phi, t0, cands, config.grid, config.tol)
        report["rows"] = [{"kappa": k, "measured": m, "predicted": p} for k, m, p in dr.rows]
        report["consistent"] = dr.consistent
        report["first_violation"] = dr.first_mismatch
    report["notes"] = notes.messages
    return report, EXIT_OK if dr.consistent else EXIT_FAILED


def _fmt_matrix(rows) -> str:
    a = np.array([[complex(*x) for x in r] for r in rows])
    return np.array2string(a, precision=6, suppress_small=True)


def render_text(command: str, report: dict) -> str:
    out = []
    if "error" in report:
        return f"error ({report['error']['type']}): {report['error']['message']}"
    if command == "analyze":
        out.append(f"symbol {report['symbol']}  shape {report['shape'][0]}x{report['shape'][1]}  ({report['kind']})")
        out.append(f"||H_Phi|| = {report['hankel_norm']:.12g}")
        out.append(f"essential norm = {report['essential_norm']['value']:g} ({report['essential_norm']['certificate']})")
        if report["vanishes"]:
            out.append(report["message"])
        else:
            if "iota" in report:
                out.append(f"iota = {report['iota']}")
            if "dim_table" in report:
                out.append("D = [" + ", ".join(str(e["D"]) for e in report["dim_table"]) + "]")
            if report.get("indices") is not None:
                out.append("monotone indices = (" + ", ".join(map(str, report["indices"])) + ")")
                out.append(f"nu = {report['nu']}")
    elif command == "verify":
        for name, c in report["checks"].items():
            mark = "ok  " if c["ok"] else "FAIL"
            out.append(f"[{mark}] {name}" + (f": {c['detail']}" if c["detail"] else ""))
        out.append("result: " + ("pass" if report["passed"] else "fail"))
        if report.get("indices") is not None:
            out.append("indices = (" + ", ".join(map(str, report["indices"])) + ")")
            out.append("nu = " + ", ".join(f"{d['sum']} at t={d['t']:g}" for d in report["nu"]))
            out.append(f"monotone = {report['monotone']}")
    elif command == "residual":
        if report.get("refused"):
            for name, fails in report["refused"].items():
                out.append(f"bundle {name} does not verify: {', '.join(fails)}")
        elif report["equivalent"]:
            out.append(f"equivalent: max deviation {report['deviation']:.3e} after {report['sweeps']} sweeps")
            out.append("U1 =\n" + _fmt_matrix(report["U1"]))
            out.append("U2 =\n" + _fmt_matrix(report["U2"]))
        else:
            out.append(f"not equivalent: best deviation {report['deviation']:.3e}")
    elif command == "refute":
        out.append(f"level t0 = {report['level']:.12g}")
        for r in report["rows"]:
            flag = "" if r["measured"] == r["predicted"] else "  <-- mismatch"
            out.append(f"kappa={r['kappa']}: measured {r['measured']}, predicted {r['predicted']}{flag}")
        if report["consistent"]:
            out.append("consistent")
        else:
            out.append(f"violated at kappa = {report['first_violation']}")
    out.extend(f"note: {n}" for n in report.get("notes", []))
    return "\n".join(out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trunc", type=int, default=None, help="Hankel truncation order N for the norm")
    common.add_argument("--samples", type=int, default=GridSpec().samples, help="circle samples (power of two)")
    common.add_argument("--tol", type=float, default=ToleranceConfig().eq_tol, help="equality tolerance")
    common.add_argument("--sv-tol", type=float, default=ToleranceConfig().sv_tol, help="singular value band")
    common.add_argument("--coeff-tol", type=float, default=ToleranceConfig().coeff_tol,
                        help="coefficient tolerance")
    common.add_argument("--kappa-max", type=int, default=None, help="last kappa of the D-table")
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(prog="hankel-thematic", description="Thematic factorization and Hankel analysis")
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="norm, iota, D-table and monotone indices")
    a.add_argument("symbol")
    v = sub.add_parser("verify", parents=[common], help="check a factor bundle against a symbol")
    v.add_argument("bundle")
    v.add_argument("symbol")
    r = sub.add_parser("residual", parents=[common], help="compare residuals of two bundles")
    r.add_argument("symbol")
    r.add_argument("bundle_a")
    r.add_argument("bundle_b")
    f = sub.add_parser("refute", parents=[common], help="test candidate indices against the D-table")
    f.add_argument("symbol")
    f.add_argument("indices", nargs="+", type=int)
    return p


def run(argv=None) -> tuple[str, dict, int]:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig.from_args(args)
        if args.command == "analyze":
            report, code = cmd_analyze(args.symbol, config)
        elif args.command == "verify":
            report, code = cmd_verify(args.bundle, args.symbol, config)
        elif args.command == "residual":
            report, code = cmd_residual(args.symbol, args.bundle_a, args.bundle_b, config)
        else:
            report, code = cmd_refute(args.symbol, args.indices, config)
    except ParseError as exc:
        report, code = {"error": {"type": type(exc).__name__, "message": str(exc)}}, EXIT_PARSE
    except AmbiguousSpectrum as exc:
        report, code = {"error": {"type": type(exc).__name__, "message": str(exc)}}, EXIT_AMBIGUOUS
    except (NumericError, ValueError) as exc:
        report, code = {"error": {"type": type(exc).__name__, "message": str(exc)}}, EXIT_NUMERIC
    report = {"schema_version": SCHEMA_VERSION, "command": args.command, "exit_code": code, **report}
    return args.format, report, code


def main(argv=None) -> int:
    fmt, report, code = run(argv)
    if fmt == "json":
        print(json.dumps(report, indent=2, allow_nan=False))
    else:
        stream = sys.stderr if "error" in report else sys.stdout
        print(render_text(report["command"], report), file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
