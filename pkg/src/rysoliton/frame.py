"""Riemannian geometry of frames with constant metric and structure constants.

A :class:`FrameManifold` is a global frame ``E_0 .. E_{n-1}`` with constant
inner products ``G_ij = g(E_i, E_j)`` and constant brackets
``[E_i, E_j] = sum_k c[i, j, k] E_k``. Indices are 0-based here; manifests
and reports use 1-based indices.

Conventions::

    nabla_{E_i} E_j     = sum_k gamma[i, j, k] E_k
    R(E_i, E_j) E_k     = sum_l riemann[i, j, k, l] E_l
    R(X, Y)             = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]
    S(X, Y)             = trace(Z -> R(Z, X) Y)
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import linalg
from .scalar import ZERO, Scalar, as_scalar

__all__ = [
    "FrameError",
    "FrameManifold",
    "FrameVectorField",
    "CurvaturePackage",
    "JacobiViolation",
    "levi_civita",
    "riemann",
    "ricci_and_scalar",
    "curvature",
    "lie_derivative_metric",
    "covariant_derivative",
    "lower_riemann",
    "jacobi_check",
    "curvature_identity_residuals",
]


class FrameError(ValueError):
    """Invalid frame data: bad metric, bracket antisymmetry, or Jacobi failure."""


@dataclass(frozen=True, eq=False)
class FrameVectorField:
    """Constant-coefficient field ``sum_i coeffs[i] E_i``."""

    coeffs: tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(as_scalar(c) for c in self.coeffs))

    @classmethod
    def zero(cls, n: int) -> FrameVectorField:
        return cls((ZERO,) * n)

    @classmethod
    def basis(cls, n: int, i: int, coeff: Scalar | int = 1) -> FrameVectorField:
        c = [ZERO] * n
        c[i] = as_scalar(coeff)
        return cls(tuple(c))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def as_array(self) -> np.ndarray:
        arr = np.empty(len(self.coeffs), dtype=object)
        arr[:] = self.coeffs
        return arr

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> set[int]:
        return {i for i, c in enumerate(self.coeffs) if c}

    def restrict(self, indices: Iterable[int]) -> FrameVectorField:
        return FrameVectorField(tuple(self.coeffs[i] for i in indices))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FrameVectorField):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        terms = [f"({c})E{i + 1}" for i, c in enumerate(self.coeffs) if c]
        return "FrameVectorField(" + (" + ".join(terms) or "0") + ")"


@dataclass(frozen=True)
class JacobiViolation:
    i: int
    j: int
    k: int
    l: int
    value: Scalar


@dataclass(frozen=True, eq=False)
class FrameManifold:
    """Frame with constant metric ``metric`` and structure constants ``brackets``.

    ``brackets`` is a dense ``(n, n, n)`` object array; use
    :meth:`from_brackets` to build one from a sparse ``{(i, j): {k: c}}`` map.
    """

    dim: int
    metric: np.ndarray
    brackets: np.ndarray
    name: str = ""
    _metric_inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.dim
        if n < 1:
            raise FrameError("dimension must be positive")
        g, c = self.metric, self.brackets
        if g.shape != (n, n):
            raise FrameError(f"metric has shape {g.shape}, expected {(n, n)}")
        if c.shape != (n, n, n):
            raise FrameError(f"brackets have shape {c.shape}, expected {(n, n, n)}")
        for i in range(n):
            for j in range(i + 1, n):
                if g[i, j] != g[j, i]:
                    raise FrameError(f"metric not symmetric at ({i + 1}, {j + 1})")
        for k, minor in enumerate(linalg.leading_minors(g), start=1):
            if minor.sign() <= 0:
                raise FrameError(f"metric not positive definite: leading minor {k} is {minor}")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if c[i, j, k] != -c[j, i, k]:
                        raise FrameError(
                            f"brackets not antisymmetric: c[{i + 1},{j + 1}]^{k + 1}"
                        )
        object.__setattr__(self, "_metric_inv", linalg.inverse(g))

    @classmethod
    def from_brackets(
        cls,
        dim: int,
        brackets: Mapping[tuple[int, int], Mapping[int, Scalar | int | str]] | None = None,
        metric: np.ndarray | None = None,
        name: str = "",
        strict: bool = False,
    ) -> FrameManifold:
        """Build from sparse ``{(i, j): {k: c_ij^k}}`` with 0-based indices.

        Each unordered pair may appear once; the ``(j, i)`` entry is filled in
        by antisymmetry. ``strict`` additionally enforces the Jacobi identity.
        """
        c = linalg.zeros(dim, dim, dim)
        for (i, j), coeffs in (brackets or {}).items():
            if i == j:
                if any(as_scalar(v) for v in coeffs.values()):
                    raise FrameError(f"[E{i + 1}, E{i + 1}] must vanish")
                continue
            for k, v in coeffs.items():
                if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                    raise FrameError(f"bracket index out of range: ({i + 1}, {j + 1}, {k + 1})")
                v = as_scalar(v)
                if c[i, j, k] or c[j, i, k]:
                    raise FrameError(f"bracket [E{i + 1}, E{j + 1}] given twice")
                c[i, j, k] = v
                c[j, i, k] = -v
        g = linalg.identity(dim) if metric is None else metric
        m = cls(dim, g, c, name)
        if strict:
            bad = jacobi_check(m)
            if bad:
                v = bad[0]
                raise FrameError(
                    f"Jacobi identity fails for (E{v.i + 1}, E{v.j + 1}, E{v.k + 1}) "
                    f"component {v.l + 1}: {v.value}"
                )
        return m

    @property
    def metric_inverse(self) -> np.ndarray:
        return self._metric_inv

    def inner(self, u: FrameVectorField | np.ndarray, v: FrameVectorField | np.ndarray) -> Scalar:
        a = u.as_array() if isinstance(u, FrameVectorField) else u
        b = v.as_array() if isinstance(v, FrameVectorField) else v
        total = ZERO
        n = self.dim
        for i in range(n):
            if a[i]:
                for j in range(n):
                    if b[j] and self.metric[i, j]:
                        total = total + a[i] * self.metric[i, j] * b[j]
        return total

    def lower(self, v: FrameVectorField) -> np.ndarray:
        """Covector ``g(v, E_i)`` as an array."""
        return self.metric.dot(v.as_array())

    def subframe(self, indices: Iterable[int], name: str = "") -> FrameManifold:
        """Sub-frame on ``indices`` keeping only bracket components along them."""
        idx = list(indices)
        g = self.metric[np.ix_(idx, idx)]
        c = self.brackets[np.ix_(idx, idx, idx)]
        return FrameManifold(len(idx), g.copy(), c.copy(), name or self.name)


@dataclass(frozen=True, eq=False)
class CurvaturePackage:
    """Connection and curvature of a frame geometry.

    ``indices`` records which ambient frame vectors the geometry lives on
    (all of them for the total space, the vertical or horizontal block for
    a fiber or the base).
    """

    metric: np.ndarray
    gamma: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: Scalar
    indices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.metric.shape[0]


def levi_civita(m: FrameManifold) -> np.ndarray:
    """Connection coefficients from Koszul's formula.

    With constant ``G`` the derivative terms drop and
    ``2 g(nabla_i E_j, E_l) = C_ij,l - C_jl,i - C_il,j`` where
    ``C_ab,c = g([E_a, E_b], E_c)``.
    """
    n = m.dim
    lowered = np.einsum("abk,kc->abc", m.brackets, m.metric)
    koszul = linalg.zeros(n, n, n)
    for i in range(n):
        for j in range(n):
            for l in range(n):
                v = lowered[i, j, l] - lowered[j, l, i] - lowered[i, l, j]
                if v:
                    koszul[i, j, l] = v / 2
    return np.einsum("ijl,lk->ijk", koszul, m.metric_inverse)


def riemann(m: FrameManifold, gamma: np.ndarray) -> np.ndarray:
    """``R[i,j,k,l]`` with ``R(E_i,E_j)E_k = sum_l R[i,j,k,l] E_l``."""
    c = m.brackets
    # nabla_i nabla_j E_k = sum_m gamma[j,k,m] gamma[i,m,l] E_l
    second = np.einsum("jkm,iml->ijkl", gamma, gamma)
    along_bracket = np.einsum("ijm,mkl->ijkl", c, gamma)
    return second - second.transpose(1, 0, 2, 3) - along_bracket


def ricci_and_scalar(m: FrameManifold, riem: np.ndarray) -> tuple[np.ndarray, Scalar]:
    ricci = np.einsum("ijki->jk", riem)
    return ricci, as_scalar(np.einsum("ij,ij->", m.metric_inverse, ricci))


def curvature(m: FrameManifold, indices: Iterable[int] | None = None) -> CurvaturePackage:
    gamma = levi_civita(m)
    riem = riemann(m, gamma)
    ricci, scal = ricci_and_scalar(m, riem)
    idx = tuple(range(m.dim)) if indices is None else tuple(indices)
    return CurvaturePackage(m.metric, gamma, riem, ricci, scal, idx)


def covariant_derivative(gamma: np.ndarray, v: FrameVectorField) -> np.ndarray:
    """``D[i, m]`` = component ``m`` of ``nabla_{E_i} V``."""
    return np.einsum("k,ikm->im", v.as_array(), gamma)


def lie_derivative_metric(m: FrameManifold, gamma: np.ndarray, v: FrameVectorField) -> np.ndarray:
    """``(L_V g)(E_i, E_j) = g(nabla_i V, E_j) + g(nabla_j V, E_i)``."""
    if v.dim != m.dim:
        raise FrameError(f"vector field has {v.dim} components, frame has {m.dim}")
    d = covariant_derivative(gamma, v).dot(m.metric)
    return d + d.T


def lower_riemann(m: FrameManifold, riem: np.ndarray) -> np.ndarray:
    """``R[i,j,k,l] = g(R(E_i,E_j)E_k, E_l)``."""
    return np.einsum("ijkm,ml->ijkl", riem, m.metric)


def jacobi_check(m: FrameManifold) -> list[JacobiViolation]:
    """Tuples ``(i<j<k, l)`` where the cyclic bracket sum has a nonzero E_l part."""
    c = m.brackets
    out = []
    for i, j, k in combinations(range(m.dim), 3):
        for l in range(m.dim):
            total = ZERO
            for mm in range(m.dim):
                for a, b, d in ((i, j, k), (j, k, i), (k, i, j)):
                    if c[a, b, mm] and c[mm, d, l]:
                        total = total + c[a, b, mm] * c[mm, d, l]
            if total:
                out.append(JacobiViolation(i, j, k, l, total))
    return out


def curvature_identity_residuals(m: FrameManifold, pkg: CurvaturePackage) -> dict[str, Scalar]:
    """Max |entry| of each structural identity; all zero for a valid geometry.

    Pair symmetry of the lowered tensor is only guaranteed when the frame
    satisfies the Jacobi identity.
    """
    gamma, riem, g = pkg.gamma, pkg.riemann, m.metric
    torsion = gamma - gamma.transpose(1, 0, 2) - m.brackets
    compat_half = np.einsum("lik,kj->lij", gamma, g)
    compat = compat_half + compat_half.transpose(0, 2, 1)
    antisym = riem + riem.transpose(1, 0, 2, 3)
    bianchi = riem + riem.transpose(1, 2, 0, 3) + riem.transpose(2, 0, 1, 3)
    low = lower_riemann(m, riem)
    pair = low - low.transpose(2, 3, 0, 1)
    last_pair = low + low.transpose(0, 1, 3, 2)
    ricci_sym = pkg.ricci - pkg.ricci.T
    return {
        "torsion": linalg.max_abs(torsion),
        "metric_compatibility": linalg.max_abs(compat),
        "riemann_antisymmetry": linalg.max_abs(antisym),
        "first_bianchi": linalg.max_abs(bianchi),
        "pair_symmetry": linalg.max_abs(pair),
        "last_pair_antisymmetry": linalg.max_abs(last_pair),
        "ricci_symmetry": linalg.max_abs(ricci_sym),
    }
