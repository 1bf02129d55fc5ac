"""Dense exact linear algebra on numpy object arrays of :class:`Scalar`."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "SingularMatrixError",
    "scalar_array",
    "zeros",
    "identity",
    "det",
    "inverse",
    "solve",
    "leading_minors",
    "is_zero",
    "max_abs",
    "least_squares",
]


class SingularMatrixError(ArithmeticError):
    pass


def scalar_array(values, shape: tuple[int, ...] | None = None) -> np.ndarray:
    """Object array of Scalars from nested sequences of numbers or literals."""
    arr = np.array(values, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    flat = arr.reshape(-1)
    for idx, v in enumerate(flat):
        flat[idx] = as_scalar(v)
    return arr


def zeros(*shape: int) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr.fill(ZERO)
    return arr


def identity(n: int) -> np.ndarray:
    arr = zeros(n, n)
    for i in range(n):
        arr[i, i] = ONE
    return arr


def is_zero(arr: np.ndarray | Scalar) -> bool:
    if isinstance(arr, np.ndarray):
        return not any(arr.reshape(-1))
    return not arr


def max_abs(arr: np.ndarray) -> Scalar:
    best = ZERO
    for v in arr.reshape(-1):
        a = abs(v)
        if a > best:
            best = a
    return best


def _eliminate(a: np.ndarray, b: np.ndarray | None = None):
    """Gauss-Jordan on copies of ``a`` (and right-hand side ``b``).

    Returns (reduced a, reduced b, determinant). Pivoting is by first
    nonzero entry, which is all exactness needs.
    """
    n = a.shape[0]
    a = a.copy()
    b = None if b is None else b.copy()
    d = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r, col]), None)
        if piv is None:
            return a, b, ZERO
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            if b is not None:
                b[[col, piv]] = b[[piv, col]]
            d = -d
        p = a[col, col]
        d = d * p
        inv = p.inverse()
        a[col] = [x * inv for x in a[col]]
        if b is not None:
            b[col] = b[col] * inv if b.ndim == 1 else [x * inv for x in b[col]]
        for r in range(n):
            if r != col and a[r, col]:
                f = a[r, col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                if b is not None:
                    if b.ndim == 1:
                        b[r] = b[r] - f * b[col]
                    else:
                        b[r] = [x - f * y for x, y in zip(b[r], b[col])]
    return a, b, d


def det(a: np.ndarray) -> Scalar:
    if a.shape[0] == 0:
        return ONE
    return _eliminate(a)[2]


def inverse(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    _, inv, d = _eliminate(a, identity(n))
    if not d:
        raise SingularMatrixError("matrix is singular")
    return inv


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _, x, d = _eliminate(a, b)
    if not d:
        raise SingularMatrixError("matrix is singular")
    return x


def leading_minors(a: np.ndarray) -> list[Scalar]:
    return [det(a[:k, :k]) for k in range(1, a.shape[0] + 1)]


def least_squares(
    columns: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]
) -> tuple[list[Scalar], list[Scalar]]:
    """Exact least-squares solve of ``sum_k x_k * columns[k] = rhs``.

    Uses the normal equations, which are exact over Q(sqrt2). Returns the
    solution and the residual ``A x - rhs``. Raises SingularMatrixError when
    the columns are linearly dependent.
    """
    k = len(columns)
    gram = zeros(k, k)
    proj = zeros(k)
    for p in range(k):
        proj[p] = _dot(columns[p], rhs)
        for q in range(p, k):
            gram[p, q] = gram[q, p] = _dot(columns[p], columns[q])
    x = list(solve(gram, proj))
    residual = [
        sum((x[p] * columns[p][r] for p in range(k)), ZERO) - rhs[r] for r in range(len(rhs))
    ]
    return x, residual


def _dot(u: Iterable[Scalar], v: Iterable[Scalar]) -> Scalar:
    total = ZERO
    for a, b in zip(u, v):
        if a and b:
            total = total + a * b
    return total
