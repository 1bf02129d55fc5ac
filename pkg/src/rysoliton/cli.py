"""Command-line interface.

Exit status: 0 on success (a ledger with mismatches is a success), 1 on
manifest or computation errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from . import report
from .frame import FrameError, curvature
from .harmonic import harmonic_classification, trace_identity
from .manifest import Manifest, ManifestError, SolitonRun, load_manifest, resolve_manifest_path
from .scalar import Scalar, ScalarParseError, parse_scalar
from .soliton import Domain, SolitonError, prepare_domain, soliton_affine_form, solve_prepared
from .verify import paper_ledger, run_verify

__all__ = ["main", "build_parser"]


class CommandError(Exception):
    """Computation-level failure reported with exit status 1."""


def _literal(text: str) -> Scalar:
    try:
        return parse_scalar(text)
    except ScalarParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(data: dict[str, Any], as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(text)


def _load(arg: str) -> Manifest:
    return load_manifest(resolve_manifest_path(arg))


def _pick_run(m: Manifest, label: str | None, domain: str | None) -> SolitonRun:
    if label is not None:
        try:
            return m.run(label)
        except KeyError as exc:
            raise CommandError(exc.args[0]) from None
    for r in m.runs:
        if domain is None or r.domain.value == domain:
            return r
    where = f" on domain {domain!r}" if domain else ""
    raise CommandError(f"manifest {m.name!r} has no soliton run{where}")


def _prepare(m: Manifest, args, alpha=None, beta=None, require_type=True):
    run = _pick_run(m, args.run, args.domain)
    if args.domain is not None and run.domain.value != args.domain:
        raise CommandError(f"run {run.label!r} is on domain {run.domain.value!r}, not {args.domain!r}")
    a = alpha if alpha is not None else run.alpha
    b = beta if beta is not None else run.beta
    if a is None or b is None:
        if require_type:
            raise CommandError(f"run {run.label!r} has no default type; pass --alpha and --beta")
        a = b = Scalar(0)
    p = m.params(run, a, b)
    claimed = args.claimed_tensors or run.claimed_tensors
    ricci = scal = None
    if claimed:
        try:
            ricci, scal = m.claimed_tensors(run.domain)
        except ValueError as exc:
            raise CommandError(str(exc)) from None
    data = prepare_domain(m.frame, p, m.split, ricci, scal)
    return run, p, data, claimed


def _fmt_tensor(entries: list[dict[str, Any]], name: str) -> list[str]:
    if not entries:
        return [f"  {name}: 0"]
    return [f"  {name}{tuple(e['indices'])} = {e['value']}" for e in entries]


def cmd_curvature(args) -> None:
    m = _load(args.manifest)
    pkg = curvature(m.frame)
    data = report.curvature_report(m.frame, pkg)
    lines = [f"{m.name}: dimension {m.dimension}, scalar curvature {pkg.scalar}"]
    lines += _fmt_tensor(data["ricci"], "Ric")
    lines += _fmt_tensor(data["connection"], "Gamma")
    lines.append("identity residuals: " + ", ".join(f"{k} {v}" for k, v in data["identities"].items()))
    _emit(data, args.json, "\n".join(lines))


def cmd_submersion(args) -> None:
    m = _load(args.manifest)
    if m.split is None:
        raise CommandError(f"manifest {m.name!r} has no split")
    data = report.submersion_report(m.frame, m.split)
    lines = [f"{m.name}: vertical {data['vertical']}, horizontal {data['horizontal']}"]
    lines.append(f"  N = {data['mean_curvature'] or 0}, W = {data['W'] or 0}")
    lines += [f"  {k}: {v}" for k, v in data["flags"].items()]
    for k, r in data["residuals"].items():
        tag = "asserted" if r["asserted"] else "report-only"
        lines.append(f"  residual {k} ({tag}): max {r['max_abs']}, {r['nonzero']}/{r['evaluated']} nonzero")
    _emit(data, args.json, "\n".join(lines))


def cmd_soliton(args) -> None:
    m = _load(args.manifest)
    run, p, data, claimed = _prepare(m, args, args.alpha, args.beta)
    sol = solve_prepared(data, p)
    out = report.soliton_report(
        sol,
        manifest=m.name,
        run=run.label,
        domain=run.domain.value,
        alpha=str(p.alpha),
        beta=str(p.beta),
        claimed_tensors=claimed,
    )
    text = sol.summary
    if not sol.mu_identified:
        text += " (mu not identifiable on a 1-dimensional domain; set to 0)"
    _emit(out, args.json, text)


def cmd_affine(args) -> None:
    m = _load(args.manifest)
    run, p, data, claimed = _prepare(m, args, Scalar(0), Scalar(0), require_type=False)
    aff = soliton_affine_form(data, p)
    out = report.affine_report(aff, manifest=m.name, run=run.label, domain=run.domain.value,
                               claimed_tensors=claimed)
    tail = "exact" if aff.exact else f"inexact, worst residual {aff.worst_residual}"
    _emit(out, args.json, f"lambda = {aff.lam}\nmu = {aff.mu}\n{tail}")


def cmd_harmonic(args) -> None:
    m = _load(args.manifest)
    run, p, data, claimed = _prepare(m, args, args.alpha, args.beta)
    sol = solve_prepared(data, p)
    r = data.geom.dim
    rep = trace_identity(data.geom, sol, p, r, scalar=data.scalar)
    lam_h, cls_h = harmonic_classification(data.scalar, r, p.alpha, p.beta, sol.mu)
    out = report.harmonic_report(
        rep,
        manifest=m.name,
        run=run.label,
        domain=run.domain.value,
        r=r,
        alpha=str(p.alpha),
        beta=str(p.beta),
        harmonic_lambda=str(lam_h),
        harmonic_classification=cls_h.value,
    )
    lines = [
        f"div V = {rep.divergence_V}",
        f"engine trace value = {rep.engine_formula_value} ({'holds' if rep.identity_holds else 'differs'})",
        f"literal trace value = {rep.paper_formula_value} ({'matches' if rep.match else 'differs'})",
        f"harmonic potential forces lambda = {lam_h}, {cls_h.value}",
    ]
    if rep.warning:
        lines.append(f"warning: {rep.warning}")
    _emit(out, args.json, "\n".join(lines))


def cmd_verify(args) -> None:
    ledger = run_verify(_load(args.manifest))
    _emit(ledger.as_dict(), args.json, ledger.text())


def cmd_paper(args) -> None:
    ledger = paper_ledger()
    Path(args.out).write_text(ledger.to_json(), encoding="utf-8")
    s = ledger.summary()
    _emit(
        {"out": str(args.out), **s},
        args.json,
        f"wrote {args.out}: {s['entries']} entries, {s['matches']} match, {s['mismatches']} mismatch",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rysoliton",
        description="Exact curvature, submersion and eta-Ricci-Yamabe soliton computations on frame manifolds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str, manifest: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        if manifest:
            p.add_argument("manifest", help="manifest path or bundled manifest name")
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.set_defaults(func=func)
        return p

    def run_opts(p: argparse.ArgumentParser, type_args: bool) -> None:
        if type_args:
            p.add_argument("--alpha", type=_literal, help="alpha as a scalar literal")
            p.add_argument("--beta", type=_literal, help="beta as a scalar literal")
        p.add_argument("--domain", choices=[d.value for d in Domain])
        p.add_argument("--run", help="soliton run label from the manifest")
        p.add_argument("--claimed-tensors", action="store_true",
                       help="use the manifest's claimed Ricci tensor and scalar")

    add("curvature", cmd_curvature, "connection, curvature and identity residuals")
    add("submersion", cmd_submersion, "O'Neill tensors, flags, mean curvature and identity residuals")
    run_opts(add("soliton", cmd_soliton, "solve for (lambda, mu)"), True)
    run_opts(add("affine", cmd_affine, "lambda and mu as affine functions of (alpha, beta)"), False)
    run_opts(add("harmonic", cmd_harmonic, "trace identity and harmonic-potential classification"), True)
    add("verify", cmd_verify, "compare engine results with the manifest's claimed values")
    p = add("paper", cmd_paper, "ledger over all bundled manifests", manifest=False)
    p.add_argument("--out", default="paper_ledger.json", help="output path (default: %(default)s)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "alpha") and (args.alpha is None) != (args.beta is None):
        parser.error("--alpha and --beta must be given together")
    try:
        args.func(args)
    except ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CommandError, SolitonError, FrameError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
