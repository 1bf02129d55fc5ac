"""eta-Ricci-Yamabe soliton equation: assembly, exact solve and classification.

On a domain with metric ``G``, Ricci tensor ``S`` and scalar curvature ``R``
the soliton equation of type (alpha, beta) reads::

    L_V g + 2 alpha S + (2 lambda - beta R) G + 2 mu eta (x) eta = 0

with ``eta = g(., xi)``. It is affine in the unknowns (lambda, mu), so the
solver assembles the entries ``i <= j`` as an overdetermined linear system
and solves it exactly (least squares through the normal equations when no
exact solution exists).
"""

from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass, field, replace

import numpy as np

from . import linalg
from .frame import (
    CurvaturePackage,
    FrameManifold,
    FrameVectorField,
    curvature,
    levi_civita,
    lie_derivative_metric,
)
from .scalar import ZERO, Scalar, as_scalar
from .submersion import (
    ONeillTensors,
    SubmersionSplit,
    base_frame,
    fiber_frame,
    horizontal_divergence,
    mean_curvature,
    structural_flags,
)

__all__ = [
    "Domain",
    "Classification",
    "SolitonError",
    "HypothesisError",
    "SolitonParams",
    "SolitonSolution",
    "AffineForm",
    "AffineSoliton",
    "KillingReport",
    "AlmostSolitonReport",
    "DomainData",
    "classify",
    "prepare_domain",
    "soliton_residual",
    "solve_soliton_system",
    "soliton_solve",
    "soliton_affine_form",
    "eta_einstein_solve",
    "killing_checks",
    "almost_soliton_coefficient",
    "special_types",
]


class Domain(str, enum.Enum):
    TOTAL = "total"
    FIBER = "fiber"
    HORIZONTAL = "horizontal"


class Classification(str, enum.Enum):
    SHRINKING = "shrinking"
    EXPANDING = "expanding"
    STEADY = "steady"


class SolitonError(ValueError):
    pass


class HypothesisError(SolitonError):
    """A structural hypothesis required by the computation is not met by the submersion."""

    def __init__(self, hypothesis: str, message: str = ""):
        super().__init__(message or f"hypothesis not satisfied: {hypothesis}")
        self.hypothesis = hypothesis


def classify(lam: Scalar) -> Classification:
    """Shrinking for lambda > 0, expanding for lambda < 0, steady for lambda = 0."""
    s = as_scalar(lam).sign()
    if s > 0:
        return Classification.SHRINKING
    if s < 0:
        return Classification.EXPANDING
    return Classification.STEADY


def special_types(alpha: Scalar, beta: Scalar, mu: Scalar | None = None) -> tuple[str, ...]:
    tags = []
    if alpha == 1 and beta == 0:
        tags.append("eta-Ricci soliton")
    if alpha == 0 and beta == 1:
        tags.append("eta-Yamabe soliton")
        if mu is not None and mu == 0:
            tags.append("quasi-Yamabe soliton")
    if alpha == 1 and beta == Scalar(1) / 2:
        tags.append("Einstein-type soliton")
    return tuple(tags)


@dataclass(frozen=True, eq=False)
class SolitonParams:
    alpha: Scalar
    beta: Scalar
    potential: FrameVectorField
    xi: FrameVectorField
    domain: Domain = Domain.TOTAL

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_scalar(self.alpha))
        object.__setattr__(self, "beta", as_scalar(self.beta))
        object.__setattr__(self, "domain", Domain(self.domain))
        if self.xi.is_zero():
            raise SolitonError("xi must be a nonzero vector field")
        if self.potential.dim != self.xi.dim:
            raise SolitonError("potential and xi have different dimensions")

    def with_type(self, alpha, beta) -> SolitonParams:
        return replace(self, alpha=as_scalar(alpha), beta=as_scalar(beta))


@dataclass(frozen=True)
class SolitonSolution:
    lam: Scalar
    mu: Scalar
    residual_max: Scalar
    classification: Classification
    exact: bool
    mu_identified: bool = True
    xi_unit: bool = True
    types: tuple[str, ...] = ()

    @property
    def summary(self) -> str:
        tail = "exact" if self.exact else f"least-squares, residual {self.residual_max}"
        return f"lambda = {self.lam}, mu = {self.mu}, {self.classification.value}, {tail}"


@dataclass(frozen=True)
class AffineForm:
    """``c0 + c_alpha * alpha + c_beta * beta``."""

    c0: Scalar
    c_alpha: Scalar
    c_beta: Scalar

    def __call__(self, alpha, beta) -> Scalar:
        return self.c0 + self.c_alpha * as_scalar(alpha) + self.c_beta * as_scalar(beta)

    def __str__(self) -> str:
        parts = []
        for coeff, sym in ((self.c_alpha, "alpha"), (self.c_beta, "beta"), (self.c0, "")):
            if not coeff:
                continue
            if sym:
                if coeff == 1:
                    term = sym
                elif coeff == -1:
                    term = f"-{sym}"
                elif coeff.is_rational:
                    term = f"{coeff}*{sym}"
                else:
                    term = f"({coeff})*{sym}"
            else:
                term = str(coeff) if coeff.is_rational else f"({coeff})"
            parts.append(term)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


@dataclass(frozen=True)
class AffineSoliton:
    lam: AffineForm
    mu: AffineForm
    exact: bool
    worst_residual: Scalar
    mu_identified: bool = True


@dataclass(frozen=True)
class KillingReport:
    killing: bool
    conformal: bool
    conformal_factor: Scalar | None


@dataclass(frozen=True)
class AlmostSolitonReport:
    coefficient: Scalar
    geometric_part: Scalar
    residual: np.ndarray = field(repr=False)
    residual_max: Scalar = ZERO

    @property
    def exact(self) -> bool:
        return linalg.is_zero(self.residual)


@dataclass(frozen=True, eq=False)
class DomainData:
    """Everything the solver needs on one domain, with V and xi restricted to it."""

    geom: CurvaturePackage
    frame: FrameManifold
    lie: np.ndarray
    potential: FrameVectorField
    xi: FrameVectorField
    ricci: np.ndarray
    scalar: Scalar
    claimed: bool = False


def _restrict(v: FrameVectorField, indices: tuple[int, ...], what: str, domain: Domain):
    outside = v.support() - set(indices)
    if outside:
        comps = ", ".join(f"E{i + 1}" for i in sorted(outside))
        raise SolitonError(f"{what} has components {comps} outside the {domain.value} domain")
    return v.restrict(indices)


def prepare_domain(
    m: FrameManifold,
    p: SolitonParams,
    split: SubmersionSplit | None = None,
    claimed_ricci: np.ndarray | None = None,
    claimed_scalar: Scalar | None = None,
) -> DomainData:
    """Geometry, restricted fields and ``L_V g`` on the domain selected by ``p``.

    When claimed tensors are supplied they replace the computed Ricci tensor
    and scalar curvature; the Lie derivative always comes from the engine.
    """
    if p.potential.dim != m.dim:
        raise SolitonError(f"fields have {p.potential.dim} components, frame has {m.dim}")
    if p.domain is Domain.TOTAL:
        frame, indices = m, tuple(range(m.dim))
    else:
        if split is None:
            raise SolitonError(f"domain {p.domain.value!r} needs a vertical/horizontal split")
        if p.domain is Domain.FIBER:
            frame, indices = fiber_frame(m, split), split.vertical
        else:
            frame, indices = base_frame(m, split), split.horizontal
    geom = curvature(frame, indices)
    V = _restrict(p.potential, indices, "potential", p.domain)
    xi = _restrict(p.xi, indices, "xi", p.domain)
    if xi.is_zero():
        raise SolitonError("xi vanishes on the domain")
    lie = lie_derivative_metric(frame, geom.gamma, V)
    ricci, scal, claimed = geom.ricci, geom.scalar, False
    if claimed_ricci is not None or claimed_scalar is not None:
        if claimed_ricci is None or claimed_scalar is None:
            raise SolitonError("claimed-tensor mode needs both a Ricci matrix and a scalar")
        if claimed_ricci.shape != geom.ricci.shape:
            raise SolitonError(
                f"claimed Ricci matrix has shape {claimed_ricci.shape}, domain needs {geom.ricci.shape}"
            )
        ricci, scal, claimed = claimed_ricci, as_scalar(claimed_scalar), True
    return DomainData(geom, frame, lie, V, xi, ricci, scal, claimed)


def _eta(metric: np.ndarray, xi: FrameVectorField) -> np.ndarray:
    return metric.dot(xi.as_array())


def soliton_residual(
    geom: CurvaturePackage,
    lie: np.ndarray,
    p: SolitonParams,
    lam: Scalar,
    mu: Scalar,
    ricci: np.ndarray | None = None,
    scalar: Scalar | None = None,
) -> np.ndarray:
    """``L_V g + 2 alpha S + (2 lambda - beta R) G + 2 mu eta eta^T`` on the domain of ``geom``.

    ``p.xi`` may be given on the ambient frame or already on the domain.
    """
    G = geom.metric
    n = G.shape[0]
    if lie.shape != (n, n):
        raise SolitonError(f"Lie derivative has shape {lie.shape}, domain has dimension {n}")
    xi = p.xi if p.xi.dim == n else _restrict(p.xi, geom.indices, "xi", p.domain)
    S = geom.ricci if ricci is None else ricci
    R = geom.scalar if scalar is None else scalar
    eta = _eta(G, xi)
    lam, mu = as_scalar(lam), as_scalar(mu)
    return lie + 2 * p.alpha * S + (2 * lam - p.beta * R) * G + 2 * mu * np.outer(eta, eta)


def solve_soliton_system(
    metric: np.ndarray,
    ricci: np.ndarray,
    scalar: Scalar,
    lie: np.ndarray,
    eta: np.ndarray,
    alpha: Scalar,
    beta: Scalar,
) -> SolitonSolution:
    """Solve ``K + 2 lambda G + 2 mu eta eta^T = 0`` for (lambda, mu) exactly.

    ``K = lie + 2 alpha S - beta R G``. When ``G`` and ``eta eta^T`` are
    proportional (a one-dimensional domain) mu cannot be identified; it is
    set to zero and ``mu_identified`` is False.
    """
    alpha, beta = as_scalar(alpha), as_scalar(beta)
    n = metric.shape[0]
    K = lie + 2 * alpha * ricci - beta * scalar * metric
    outer = np.outer(eta, eta)
    rows = [(i, j) for i in range(n) for j in range(i, n)]
    col_lam = [2 * metric[i, j] for i, j in rows]
    col_mu = [2 * outer[i, j] for i, j in rows]
    rhs = [-K[i, j] for i, j in rows]
    mu_identified = True
    try:
        (lam, mu), residual = linalg.least_squares([col_lam, col_mu], rhs)
    except linalg.SingularMatrixError:
        if n > 1:
            raise SolitonError(
                "lambda and mu are not separately identifiable: eta (x) eta is proportional to g"
            ) from None
        (lam,), residual = linalg.least_squares([col_lam], rhs)
        mu, mu_identified = ZERO, False
    res_max = max((abs(r) for r in residual), default=ZERO)
    xi_norm = eta.dot(linalg.inverse(metric)).dot(eta)
    return SolitonSolution(
        lam=lam,
        mu=mu,
        residual_max=res_max,
        classification=classify(lam),
        exact=not res_max,
        mu_identified=mu_identified,
        xi_unit=xi_norm == 1,
        types=special_types(alpha, beta, mu),
    )


def soliton_solve(
    geom: CurvaturePackage,
    lie: np.ndarray,
    p: SolitonParams,
    ricci: np.ndarray | None = None,
    scalar: Scalar | None = None,
) -> SolitonSolution:
    G = geom.metric
    n = G.shape[0]
    xi = p.xi if p.xi.dim == n else _restrict(p.xi, geom.indices, "xi", p.domain)
    return solve_soliton_system(
        G,
        geom.ricci if ricci is None else ricci,
        geom.scalar if scalar is None else scalar,
        lie,
        _eta(G, xi),
        p.alpha,
        p.beta,
    )


def solve_prepared(data: DomainData, p: SolitonParams) -> SolitonSolution:
    return soliton_solve(
        data.geom, data.lie, replace(p, potential=data.potential, xi=data.xi), data.ricci, data.scalar
    )


def soliton_affine_form(data: DomainData, p: SolitonParams) -> AffineSoliton:
    """Recover lambda and mu as affine functions of (alpha, beta).

    Solves at (0,0), (1,0), (0,1) and checks the resulting form at (1,1).
    """
    sols = {ab: solve_prepared(data, p.with_type(*ab)) for ab in ((0, 0), (1, 0), (0, 1), (1, 1))}
    s00, s10, s01, s11 = sols[(0, 0)], sols[(1, 0)], sols[(0, 1)], sols[(1, 1)]
    lam = AffineForm(s00.lam, s10.lam - s00.lam, s01.lam - s00.lam)
    mu = AffineForm(s00.mu, s10.mu - s00.mu, s01.mu - s00.mu)
    worst = max(s.residual_max for s in sols.values())
    consistent = lam(1, 1) == s11.lam and mu(1, 1) == s11.mu
    return AffineSoliton(
        lam=lam,
        mu=mu,
        exact=consistent and all(s.exact for s in sols.values()),
        worst_residual=worst,
        mu_identified=all(s.mu_identified for s in sols.values()),
    )


def eta_einstein_solve(
    S: np.ndarray, G: np.ndarray, xi: FrameVectorField
) -> tuple[Scalar, Scalar, bool]:
    """Fit ``S = a G + b eta eta^T``; returns (a, b, exact)."""
    if xi.is_zero():
        raise SolitonError("xi must be nonzero")
    n = G.shape[0]
    eta = _eta(G, xi)
    outer = np.outer(eta, eta)
    rows = [(i, j) for i in range(n) for j in range(i, n)]
    try:
        (a, b), residual = linalg.least_squares(
            [[G[i, j] for i, j in rows], [outer[i, j] for i, j in rows]],
            [S[i, j] for i, j in rows],
        )
    except linalg.SingularMatrixError:
        if n > 1:
            raise SolitonError("a and b are not separately identifiable") from None
        (a,), residual = linalg.least_squares([[G[0, 0]]], [S[0, 0]])
        b = ZERO
    return a, b, not any(residual)


def killing_checks(
    m: FrameManifold,
    gamma: np.ndarray,
    xi: FrameVectorField,
    split: SubmersionSplit | None = None,
) -> KillingReport:
    """Whether ``L_xi g`` vanishes, or equals ``2 rho g``, on H (or everywhere without a split)."""
    lie = lie_derivative_metric(m, gamma, xi)
    idx = list(range(m.dim)) if split is None else list(split.horizontal)
    L = lie[np.ix_(idx, idx)]
    G = m.metric[np.ix_(idx, idx)]
    if linalg.is_zero(L):
        return KillingReport(True, True, ZERO)
    rho = L[0, 0] / (2 * G[0, 0])
    conformal = linalg.is_zero(L - 2 * rho * G)
    return KillingReport(False, conformal, rho if conformal else None)


def almost_soliton_coefficient(
    m: FrameManifold,
    split: SubmersionSplit,
    tensors: ONeillTensors,
    fiber: CurvaturePackage,
    p: SolitonParams,
    lam: Scalar,
    mu: Scalar,
) -> AlmostSolitonReport:
    """Coefficient ``r |W|^2 - div W + 2 lambda - beta R_hat`` of the fiber metric.

    Requires totally umbilical fibers and an integrable horizontal
    distribution; the residual is that of the full fiber equation at the
    supplied (lambda, mu).
    """
    flags = structural_flags(m, split, tensors)
    if not flags.fibers_totally_umbilical:
        raise HypothesisError("fibers_totally_umbilical", "fibers are not totally umbilical")
    if not flags.horizontal_integrable:
        raise HypothesisError(
            "horizontal_integrable", "horizontal distribution is not integrable (A != 0 on H x H)"
        )
    gamma = levi_civita(m)
    _, W = mean_curvature(m, tensors.T, split)
    r = split.fiber_dim
    geometric = r * m.inner(W, W) - horizontal_divergence(m, gamma, W, split)
    lam, mu = as_scalar(lam), as_scalar(mu)
    coeff = geometric + 2 * lam - p.beta * fiber.scalar
    fframe = fiber_frame(m, split)
    V = _restrict(p.potential, split.vertical, "potential", Domain.FIBER)
    xi = _restrict(p.xi, split.vertical, "xi", Domain.FIBER)
    lie = lie_derivative_metric(fframe, fiber.gamma, V)
    eta = _eta(fiber.metric, xi)
    residual = lie + 2 * p.alpha * fiber.ricci + coeff * fiber.metric + 2 * mu * np.outer(eta, eta)
    return AlmostSolitonReport(coeff, geometric, residual, linalg.max_abs(residual))


def batch_solve(
    data: DomainData, p: SolitonParams, types: Iterable[tuple[Scalar, Scalar]]
) -> list[SolitonSolution]:
    return [solve_prepared(data, p.with_type(a, b)) for a, b in types]


def solve_on(
    m: FrameManifold,
    p: SolitonParams,
    split: SubmersionSplit | None = None,
    claimed_ricci: np.ndarray | None = None,
    claimed_scalar: Scalar | None = None,
) -> tuple[DomainData, SolitonSolution]:
    """Convenience: prepare the domain of ``p`` and solve there."""
    data = prepare_domain(m, p, split, claimed_ricci, claimed_scalar)
    return data, solve_prepared(data, p)

