"""JSON-ready report dictionaries for engine results.

Scalars are canonical literals and tensors are sparse lists of
``{"indices": [...], "value": literal}`` with 1-based ambient frame indices.
``parse_sparse`` and ``parse_literals`` invert the encoding.
"""

from __future__ import annotations

from typing import Any, Sequence

import numpy as np

from .frame import (
    CurvaturePackage,
    FrameManifold,
    FrameVectorField,
    curvature_identity_residuals,
    levi_civita,
)
from .harmonic import HarmonicReport
from .scalar import Scalar, parse_scalar
from .soliton import AffineForm, AffineSoliton, SolitonSolution
from .submersion import (
    IdentityResidual,
    SubmersionSplit,
    base_geometry,
    fiber_geometry,
    mean_curvature,
    oneill_identity_residuals,
    oneill_tensors,
    structural_flags,
)

__all__ = [
    "sparse",
    "parse_sparse",
    "parse_literals",
    "vector_map",
    "curvature_report",
    "submersion_report",
    "soliton_report",
    "affine_report",
    "affine_map",
    "harmonic_report",
]


def sparse(arr: np.ndarray, labels: Sequence[int] | None = None) -> list[dict[str, Any]]:
    """Nonzero entries of ``arr``; ``labels`` maps local axis positions to frame indices."""
    out = []
    for idx in np.ndindex(arr.shape):
        v = arr[idx]
        if v:
            ix = [(labels[i] if labels is not None else i) + 1 for i in idx]
            out.append({"indices": ix, "value": str(v)})
    return out


def parse_sparse(entries: list[dict[str, Any]], shape: tuple[int, ...], labels=None) -> np.ndarray:
    """Rebuild a dense Scalar array from :func:`sparse` output."""
    out = np.empty(shape, dtype=object)
    out.fill(Scalar(0))
    pos = {lab: i for i, lab in enumerate(labels)} if labels is not None else None
    for e in entries:
        idx = tuple((pos[i - 1] if pos is not None else i - 1) for i in e["indices"])
        out[idx] = parse_scalar(e["value"])
    return out


def parse_literals(obj: Any) -> Any:
    """Recursively turn literal strings in nested lists into Scalars."""
    if isinstance(obj, list):
        return [parse_literals(x) for x in obj]
    return parse_scalar(obj)


def vector_map(v: FrameVectorField, labels: Sequence[int] | None = None) -> dict[str, str]:
    return {
        str((labels[i] if labels is not None else i) + 1): str(c)
        for i, c in enumerate(v.coeffs)
        if c
    }


def _geometry(pkg: CurvaturePackage) -> dict[str, Any]:
    lab = pkg.indices
    return {
        "frame": [i + 1 for i in lab],
        "connection": sparse(pkg.gamma, lab),
        "riemann": sparse(pkg.riemann, lab),
        "ricci": sparse(pkg.ricci, lab),
        "scalar": str(pkg.scalar),
    }


def curvature_report(m: FrameManifold, pkg: CurvaturePackage) -> dict[str, Any]:
    out = {"name": m.name, "dimension": m.dim}
    out.update(_geometry(pkg))
    out["identities"] = {k: str(v) for k, v in curvature_identity_residuals(m, pkg).items()}
    return out


def _residual(r: IdentityResidual) -> dict[str, Any]:
    return {
        "max_abs": str(r.max_abs),
        "nonzero": r.nonzero,
        "evaluated": r.evaluated,
        "asserted": r.asserted,
        "worst": [{"indices": list(ix), "value": str(v)} for ix, v in r.worst],
        "note": r.note,
    }


def submersion_report(m: FrameManifold, split: SubmersionSplit) -> dict[str, Any]:
    gamma = levi_civita(m)
    tensors = oneill_tensors(m, gamma, split)
    N, W = mean_curvature(m, tensors.T, split)
    out: dict[str, Any] = {
        "name": m.name,
        "vertical": [i + 1 for i in split.vertical],
        "horizontal": [i + 1 for i in split.horizontal],
        "T": sparse(tensors.T),
        "A": sparse(tensors.A),
        "mean_curvature": vector_map(N),
        "W": vector_map(W),
        "flags": structural_flags(m, split, tensors).as_dict(),
    }
    try:
        out["fiber"] = _geometry(fiber_geometry(m, split))
    except ValueError as exc:
        out["fiber"] = {"error": str(exc)}
    out["base"] = _geometry(base_geometry(m, split))
    out["residuals"] = {k: _residual(r) for k, r in oneill_identity_residuals(m, split).items()}
    return out


def soliton_report(sol: SolitonSolution, **context: Any) -> dict[str, Any]:
    out = dict(context)
    out.update(
        {
            "lambda": str(sol.lam),
            "mu": str(sol.mu),
            "classification": sol.classification.value,
            "exact": sol.exact,
            "residual_max": str(sol.residual_max),
            "mu_identified": sol.mu_identified,
            "xi_unit": sol.xi_unit,
            "types": list(sol.types),
        }
    )
    return out


def affine_map(a: AffineForm) -> dict[str, str]:
    return {"c0": str(a.c0), "c_alpha": str(a.c_alpha), "c_beta": str(a.c_beta)}


def affine_report(aff: AffineSoliton, **context: Any) -> dict[str, Any]:
    out = dict(context)
    out.update(
        {
            "lambda": affine_map(aff.lam),
            "mu": affine_map(aff.mu),
            "lambda_text": str(aff.lam),
            "mu_text": str(aff.mu),
            "exact": aff.exact,
            "worst_residual": str(aff.worst_residual),
            "mu_identified": aff.mu_identified,
        }
    )
    return out


def harmonic_report(rep: HarmonicReport, **context: Any) -> dict[str, Any]:
    out = dict(context)
    for key in ("divergence_V", "laplacian_f", "paper_formula_value", "engine_formula_value"):
        out[key] = str(getattr(rep, key))
    out["match"] = rep.match
    out["identity_holds"] = rep.identity_holds
    out["warning"] = rep.warning
    return out
