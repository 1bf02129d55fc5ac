"""Exact frame geometry, Riemannian submersions and eta-Ricci-Yamabe solitons.

All arithmetic is exact over Q(sqrt2); see :mod:`rysoliton.scalar`.
"""

from __future__ import annotations

from .frame import (
    CurvaturePackage,
    FrameError,
    FrameManifold,
    FrameVectorField,
    curvature,
    curvature_identity_residuals,
    jacobi_check,
    levi_civita,
    lie_derivative_metric,
)
from .harmonic import HarmonicReport, divergence, harmonic_classification, trace_identity
from .manifest import Manifest, ManifestError, bundled_path, dump_manifest, load_manifest
from .scalar import Scalar, ScalarDivisionError, ScalarParseError, parse_scalar, to_float
from .soliton import (
    AffineForm,
    Classification,
    Domain,
    SolitonError,
    SolitonParams,
    SolitonSolution,
    classify,
    eta_einstein_solve,
    soliton_affine_form,
    soliton_solve,
    solve_on,
)
from .submersion import (
    SubmersionSplit,
    mean_curvature,
    oneill_identity_residuals,
    oneill_tensors,
    structural_flags,
)
from .verify import VerificationLedger, paper_ledger, run_verify

__version__ = "0.1.0"

__all__ = [
    "AffineForm",
    "Classification",
    "CurvaturePackage",
    "Domain",
    "FrameError",
    "FrameManifold",
    "FrameVectorField",
    "HarmonicReport",
    "Manifest",
    "ManifestError",
    "Scalar",
    "ScalarDivisionError",
    "ScalarParseError",
    "SolitonError",
    "SolitonParams",
    "SolitonSolution",
    "SubmersionSplit",
    "VerificationLedger",
    "bundled_path",
    "classify",
    "curvature",
    "curvature_identity_residuals",
    "divergence",
    "dump_manifest",
    "eta_einstein_solve",
    "harmonic_classification",
    "jacobi_check",
    "levi_civita",
    "lie_derivative_metric",
    "load_manifest",
    "mean_curvature",
    "oneill_identity_residuals",
    "oneill_tensors",
    "paper_ledger",
    "parse_scalar",
    "run_verify",
    "soliton_affine_form",
    "soliton_solve",
    "solve_on",
    "structural_flags",
    "to_float",
    "trace_identity",
]
