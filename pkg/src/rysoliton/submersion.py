"""Vertical/horizontal splits of a frame and O'Neill's fundamental tensors.

The submersion itself is never represented as a map: a split of the frame
indices into a vertical block (tangent to fibers) and a horizontal block
fixes everything. The metric must be block-diagonal for the split, so the
orthogonal projections onto each distribution are coordinate projections.

Sums over orthonormal vertical/horizontal bases are evaluated as
contractions with the inverse block metric, which is basis independent and
needs no square roots.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from . import linalg
from .frame import (
    CurvaturePackage,
    FrameError,
    FrameManifold,
    FrameVectorField,
    covariant_derivative,
    curvature,
    levi_civita,
    lower_riemann,
    riemann,
)
from .scalar import ZERO, Scalar

__all__ = [
    "SplitError",
    "IntegrabilityError",
    "SubmersionSplit",
    "ONeillTensors",
    "StructuralFlags",
    "IdentityResidual",
    "oneill_tensors",
    "mean_curvature",
    "horizontal_divergence",
    "fiber_frame",
    "base_frame",
    "fiber_geometry",
    "base_geometry",
    "structural_flags",
    "oneill_identity_residuals",
    "tensor_derivative",
]


class SplitError(FrameError):
    pass


class IntegrabilityError(SplitError):
    pass


@dataclass(frozen=True)
class SubmersionSplit:
    """Partition of frame indices (0-based) into vertical and horizontal blocks."""

    vertical: tuple[int, ...]
    horizontal: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertical", tuple(sorted(self.vertical)))
        object.__setattr__(self, "horizontal", tuple(sorted(self.horizontal)))
        if not self.vertical or not self.horizontal:
            raise SplitError("both vertical and horizontal blocks must be nonempty")
        if set(self.vertical) & set(self.horizontal):
            raise SplitError("vertical and horizontal blocks overlap")

    @classmethod
    def from_vertical(cls, n: int, vertical: Iterable[int]) -> SubmersionSplit:
        v = set(vertical)
        return cls(tuple(v), tuple(i for i in range(n) if i not in v))

    @property
    def fiber_dim(self) -> int:
        return len(self.vertical)

    def validate(self, m: FrameManifold) -> None:
        """Raise :class:`SplitError` unless the split fits ``m``."""
        if sorted(self.vertical + self.horizontal) != list(range(m.dim)):
            raise SplitError(f"split does not partition the indices 1..{m.dim}")
        for v in self.vertical:
            for h in self.horizontal:
                if m.metric[v, h]:
                    raise SplitError(
                        f"metric is not block-diagonal: g(E{v + 1}, E{h + 1}) = {m.metric[v, h]}"
                    )

    def vertical_mask(self, n: int) -> np.ndarray:
        mask = np.zeros(n, dtype=bool)
        mask[list(self.vertical)] = True
        return mask


@dataclass(frozen=True, eq=False)
class ONeillTensors:
    """``T[i, j, k]`` is the E_k component of T_{E_i} E_j; likewise ``A``."""

    T: np.ndarray
    A: np.ndarray


@dataclass(frozen=True)
class StructuralFlags:
    vertical_parallel: bool
    horizontal_parallel: bool
    horizontal_integrable: bool
    fibers_minimal: bool
    fibers_totally_umbilical: bool
    fibers_totally_geodesic: bool

    def as_dict(self) -> dict[str, bool]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class IdentityResidual:
    """LHS - RHS of a curvature identity over all index tuples of its domain.

    ``worst`` holds up to five ``(1-based tuple, residual)`` pairs of maximal
    magnitude. ``asserted`` marks identities that are expected to vanish.
    """

    label: str
    max_abs: Scalar
    nonzero: int
    evaluated: int
    worst: tuple[tuple[tuple[int, ...], Scalar], ...]
    asserted: bool
    note: str = ""

    @property
    def vanishes(self) -> bool:
        return self.nonzero == 0


def oneill_tensors(m: FrameManifold, gamma: np.ndarray, split: SubmersionSplit) -> ONeillTensors:
    """``T_E F = H nabla_{VE} VF + V nabla_{VE} HF``, ``A_E F = V nabla_{HE} HF + H nabla_{HE} VF``."""
    split.validate(m)
    n = m.dim
    vert = split.vertical_mask(n)
    # entries whose output block differs from the block of F
    crossing = vert[None, :, None] != vert[None, None, :]
    keep = np.broadcast_to(crossing, (n, n, n))
    T = linalg.zeros(n, n, n)
    A = linalg.zeros(n, n, n)
    rows_v = vert[:, None, None] & keep
    rows_h = ~vert[:, None, None] & keep
    T[rows_v] = gamma[rows_v]
    A[rows_h] = gamma[rows_h]
    return ONeillTensors(T, A)


def _block_inverse(m: FrameManifold, indices: tuple[int, ...]) -> np.ndarray:
    return linalg.inverse(m.metric[np.ix_(indices, indices)])


def _trace_pairs(m: FrameManifold, indices: tuple[int, ...]):
    """Yield ``(a, b, w)`` with ``sum_i f(X_i, X_i) = sum w * f(E_a, E_b)``."""
    inv = _block_inverse(m, indices)
    for p, a in enumerate(indices):
        for q, b in enumerate(indices):
            if inv[p, q]:
                yield a, b, inv[p, q]


def mean_curvature(
    m: FrameManifold, T: np.ndarray, split: SubmersionSplit
) -> tuple[FrameVectorField, FrameVectorField]:
    """``N = sum_j T_{U_j} U_j`` over an orthonormal vertical basis and ``W = N / r``."""
    n_vec = linalg.zeros(m.dim)
    for a, b, w in _trace_pairs(m, split.vertical):
        n_vec = n_vec + T[a, b] * w
    N = FrameVectorField(tuple(n_vec))
    W = FrameVectorField(tuple(x / split.fiber_dim for x in n_vec))
    return N, W


def horizontal_divergence(
    m: FrameManifold, gamma: np.ndarray, X: FrameVectorField, split: SubmersionSplit
) -> Scalar:
    """``div X = sum_i g(nabla_{X_i} X, X_i)`` over an orthonormal horizontal basis."""
    dg = covariant_derivative(gamma, X).dot(m.metric)
    total = ZERO
    for a, b, w in _trace_pairs(m, split.horizontal):
        if dg[a, b]:
            total = total + w * dg[a, b]
    return total


def fiber_frame(m: FrameManifold, split: SubmersionSplit) -> FrameManifold:
    """Vertical sub-frame; raises if vertical brackets leave the vertical block."""
    split.validate(m)
    for i, a in enumerate(split.vertical):
        for b in split.vertical[i + 1 :]:
            for h in split.horizontal:
                if m.brackets[a, b, h]:
                    raise IntegrabilityError(
                        f"vertical distribution not integrable: [E{a + 1}, E{b + 1}] has "
                        f"horizontal component {m.brackets[a, b, h]} along E{h + 1}"
                    )
    return m.subframe(split.vertical, name=f"{m.name}:fiber")


def base_frame(m: FrameManifold, split: SubmersionSplit) -> FrameManifold:
    """Horizontal sub-frame with brackets ``H[X, Y]``, standing in for the base."""
    split.validate(m)
    return m.subframe(split.horizontal, name=f"{m.name}:base")


def horizontal_is_basic(m: FrameManifold, split: SubmersionSplit) -> bool:
    """True when ``[V, X]`` is vertical for every vertical V and horizontal X."""
    return not any(
        m.brackets[v, x, h] for v in split.vertical for x in split.horizontal for h in split.horizontal
    )


def fiber_geometry(m: FrameManifold, split: SubmersionSplit) -> CurvaturePackage:
    return curvature(fiber_frame(m, split), split.vertical)


def base_geometry(m: FrameManifold, split: SubmersionSplit) -> CurvaturePackage:
    return curvature(base_frame(m, split), split.horizontal)


def structural_flags(
    m: FrameManifold, split: SubmersionSplit, tensors: ONeillTensors
) -> StructuralFlags:
    T, A = tensors.T, tensors.A
    V, H = list(split.vertical), list(split.horizontal)
    t_vv = T[np.ix_(V, V)]
    t_vh = T[np.ix_(V, H)]
    a_hv = A[np.ix_(H, V)]
    a_hh = A[np.ix_(H, H)]
    N, W = mean_curvature(m, T, split)
    umbilical = True
    for a in V:
        for b in V:
            expected = W.as_array() * m.metric[a, b]
            if any(x != y for x, y in zip(T[a, b], expected)):
                umbilical = False
                break
        if not umbilical:
            break
    return StructuralFlags(
        vertical_parallel=linalg.is_zero(t_vv) and linalg.is_zero(a_hv),
        horizontal_parallel=linalg.is_zero(t_vh) and linalg.is_zero(a_hh),
        horizontal_integrable=linalg.is_zero(a_hh),
        fibers_minimal=N.is_zero(),
        fibers_totally_umbilical=umbilical,
        fibers_totally_geodesic=linalg.is_zero(T),
    )


def tensor_derivative(gamma: np.ndarray, K: np.ndarray) -> np.ndarray:
    """Covariant derivative of a constant-component (1,2) tensor.

    ``D[i, a, b, c]`` is the E_c component of ``(nabla_{E_i} K)_{E_a} E_b``.
    """
    out = np.einsum("abm,imc->iabc", K, gamma)
    out = out - np.einsum("iam,mbc->iabc", gamma, K)
    out = out - np.einsum("ibm,amc->iabc", gamma, K)
    return out


class _Collector:
    def __init__(self, label: str, asserted: bool, note: str = ""):
        self.label, self.asserted, self.note = label, asserted, note
        self.entries: list[tuple[tuple[int, ...], Scalar]] = []
        self.count = 0

    def add(self, idx: tuple[int, ...], value: Scalar) -> None:
        self.count += 1
        if value:
            self.entries.append((tuple(i + 1 for i in idx), value))

    def result(self) -> IdentityResidual:
        ranked = sorted(self.entries, key=lambda e: (-float(abs(e[1])), e[0]))
        worst = tuple(ranked[:5])
        mx = max((abs(v) for _, v in self.entries), default=ZERO)
        return IdentityResidual(
            self.label, mx, len(self.entries), self.count, worst, self.asserted, self.note
        )


def oneill_identity_residuals(m: FrameManifold, split: SubmersionSplit) -> dict[str, IdentityResidual]:
    """Residuals of the Gauss-type curvature and Ricci relations of a submersion.

    ``R(E,F,G,H)`` denotes ``g(R(E,F)G, H)``. The two curvature relations
    (vertical and horizontal 4-tuples) are expected to vanish; the three
    Ricci relations are evaluated term by term and reported without assertion.
    The vertical Ricci relation is evaluated under two readings of where its
    sum over the horizontal basis ends.
    """
    split.validate(m)
    g = m.metric
    gamma = levi_civita(m)
    riem = riemann(m, gamma)
    ambient = lower_riemann(m, riem)
    ricci = np.einsum("ijki->jk", riem)
    tensors = oneill_tensors(m, gamma, split)
    T, A = tensors.T, tensors.A
    N, _ = mean_curvature(m, T, split)
    Vs, Hs = split.vertical, split.horizontal
    out: dict[str, IdentityResidual] = {}

    def ip(u: np.ndarray, v: np.ndarray) -> Scalar:
        return u.dot(g).dot(v)

    # vertical curvature relation
    try:
        fib = fiber_frame(m, split)
    except IntegrabilityError as exc:
        fib = None
        skipped = str(exc)
    if fib is not None:
        fpkg = curvature(fib)
        fhat = lower_riemann(fib, fpkg.riemann)
        col = _Collector("curvature_vertical", asserted=True)
        for p, e in enumerate(Vs):
            for q, f in enumerate(Vs):
                for s, gg in enumerate(Vs):
                    for t, h in enumerate(Vs):
                        rhs = fhat[p, q, s, t] - ip(T[e, h], T[f, gg]) + ip(T[f, h], T[e, gg])
                        col.add((e, f, gg, h), ambient[e, f, gg, h] - rhs)
        out[col.label] = col.result()
    else:
        out["curvature_vertical"] = IdentityResidual(
            "curvature_vertical", ZERO, 0, 0, (), True, f"skipped: {skipped}"
        )

    # horizontal curvature relation
    base = base_frame(m, split)
    bpkg = curvature(base)
    bhat = lower_riemann(base, bpkg.riemann)
    basic = horizontal_is_basic(m, split)
    col = _Collector(
        "curvature_horizontal",
        asserted=basic,
        note="" if basic else "horizontal frame is not basic; base relation not expected to hold",
    )
    for p, x in enumerate(Hs):
        for q, y in enumerate(Hs):
            for s, z in enumerate(Hs):
                for t, w in enumerate(Hs):
                    rhs = (
                        bhat[p, q, s, t]
                        + 2 * ip(A[x, y], A[z, w])
                        - ip(A[y, z], A[x, w])
                        + ip(A[x, z], A[y, w])
                    )
                    col.add((x, y, z, w), ambient[x, y, z, w] - rhs)
    out[col.label] = col.result()

    dT = tensor_derivative(gamma, T)
    dA = tensor_derivative(gamma, A)
    n_arr = N.as_array()
    h_pairs = list(_trace_pairs(m, Hs))
    v_pairs = list(_trace_pairs(m, Vs))

    # vertical Ricci relation
    if fib is not None:
        fric = fpkg.ricci
        lit = _Collector("ricci_vertical_literal", asserted=False,
                         note="both horizontal-basis sums subtracted")
        grp = _Collector("ricci_vertical_grouped", asserted=False,
                         note="minus sign distributed over the grouped sum")
        for p, e in enumerate(Vs):
            for q, f in enumerate(Vs):
                base_terms = fric[p, q] + ip(n_arr, T[e, f])
                dterm = sum((w * ip(dT[a, e, f], g[:, b]) for a, b, w in h_pairs), ZERO)
                aterm = sum((w * ip(A[a, e], A[b, f]) for a, b, w in h_pairs), ZERO)
                lit.add((e, f), ricci[e, f] - (base_terms - dterm - aterm))
                grp.add((e, f), ricci[e, f] - (base_terms - dterm + aterm))
        out[lit.label] = lit.result()
        out[grp.label] = grp.result()

    # horizontal Ricci relation
    dn = covariant_derivative(gamma, N).dot(g)
    col = _Collector("ricci_horizontal_literal", asserted=False)
    for p, x in enumerate(Hs):
        for q, y in enumerate(Hs):
            aterm = sum((w * ip(A[x, a], A[y, b]) for a, b, w in h_pairs), ZERO)
            tterm = sum((w * ip(T[a, x], T[b, y]) for a, b, w in v_pairs), ZERO)
            rhs = bpkg.ricci[p, q] - (dn[x, y] + dn[y, x]) / 2 + 2 * aterm + tterm
            col.add((x, y), ricci[x, y] - rhs)
    out[col.label] = col.result()

    # mixed Ricci relation
    col = _Collector("ricci_mixed_literal", asserted=False)
    for e in Vs:
        for x in Hs:
            tsum = sum((w * ip(dT[a, b, e], g[:, x]) for a, b, w in v_pairs), ZERO)
            asum = sum(
                (w * (ip(dA[a, b, x], g[:, e]) + 2 * ip(A[a, x], T[e, b])) for a, b, w in h_pairs),
                ZERO,
            )
            rhs = -dn[e, x] + tsum - asum
            col.add((e, x), ricci[e, x] - rhs)
    out[col.label] = col.result()
    return out

