from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_metric, random_nilpotent3
from rysoliton import linalg
from rysoliton.frame import (
    FrameError,
    FrameManifold,
    FrameVectorField,
    covariant_derivative,
    curvature,
    curvature_identity_residuals,
    jacobi_check,
    lie_derivative_metric,
    lower_riemann,
)
from rysoliton.scalar import Scalar, parse_scalar

HALF = Scalar(Fraction(1, 2))


def heisenberg(metric=None) -> FrameManifold:
    return FrameManifold.from_brackets(3, {(0, 1): {2: 1}}, metric, name="heisenberg3")


def six_dim() -> FrameManifold:
    return FrameManifold.from_brackets(6, {(i, 5): {i: 1} for i in range(5)}, name="six")


def _all_zero(res: dict) -> bool:
    return all(not v for v in res.values())


def test_heisenberg_connection():
    pkg = curvature(heisenberg())
    g = pkg.gamma
    assert g[0, 1, 2] == HALF and g[1, 0, 2] == -HALF
    assert g[0, 2, 1] == -HALF and g[2, 0, 1] == -HALF
    assert g[1, 2, 0] == HALF and g[2, 1, 0] == HALF
    nonzero = sum(1 for idx in np.ndindex(g.shape) if g[idx])
    assert nonzero == 6


def test_heisenberg_ricci_and_scalar():
    pkg = curvature(heisenberg())
    assert [pkg.ricci[i, i] for i in range(3)] == [-HALF, -HALF, HALF]
    assert linalg.is_zero(pkg.ricci - np.diag(np.diag(pkg.ricci)))
    assert pkg.scalar == -HALF


def test_abelian_is_flat():
    pkg = curvature(FrameManifold.from_brackets(3, {}))
    assert linalg.is_zero(pkg.gamma) and linalg.is_zero(pkg.riemann)
    assert pkg.scalar == 0


def test_six_dim_constant_curvature():
    m = six_dim()
    pkg = curvature(m)
    assert linalg.is_zero(pkg.ricci + 5 * m.metric)
    assert pkg.scalar == -30
    for i in range(5):
        assert list(pkg.gamma[i, i]) == [0, 0, 0, 0, 0, -1]
        assert pkg.gamma[i, 5, i] == 1
    # sectional curvature -1: R(Ei, Ej)Ei = Ej
    low = lower_riemann(m, pkg.riemann)
    for i in range(6):
        for j in range(6):
            if i != j:
                assert pkg.riemann[i, j, i, j] == 1
                assert low[i, j, j, i] == -1


def test_identities_on_bundled(bundled):
    for man in bundled.values():
        res = curvature_identity_residuals(man.frame, curvature(man.frame))
        assert _all_zero(res), (man.name, res)


def test_identities_random_nilpotent_with_random_metric():
    rng = random.Random(99)
    for _ in range(25):
        m = random_nilpotent3(rng, random_metric(rng, 3))
        assert _all_zero(curvature_identity_residuals(m, curvature(m)))


def test_jacobi_check_detects_violation():
    # [E1,E2] = E1, [E2,E3] = E1, [E1,E3] = E2 fails Jacobi
    m = FrameManifold.from_brackets(3, {(0, 1): {0: 1}, (1, 2): {0: 1}, (0, 2): {1: 1}})
    assert jacobi_check(m)
    with pytest.raises(FrameError, match="Jacobi"):
        FrameManifold.from_brackets(3, {(0, 1): {0: 1}, (1, 2): {0: 1}, (0, 2): {1: 1}}, strict=True)


@pytest.mark.parametrize(
    "metric, message",
    [
        ([[1, 2], [0, 1]], "symmetric"),
        ([[1, 2], [2, 1]], "positive definite"),
        ([[0, 0], [0, 1]], "positive definite"),
    ],
)
def test_bad_metric(metric, message):
    with pytest.raises(FrameError, match=message):
        FrameManifold.from_brackets(2, {}, linalg.scalar_array(metric))


def test_bad_brackets():
    with pytest.raises(FrameError):
        FrameManifold.from_brackets(2, {(0, 1): {5: 1}})
    with pytest.raises(FrameError):
        FrameManifold.from_brackets(2, {(0, 0): {1: 1}})
    with pytest.raises(FrameError):
        FrameManifold.from_brackets(2, {(0, 1): {1: 1}, (1, 0): {1: 1}})
    c = linalg.zeros(2, 2, 2)
    c[0, 1, 0] = Scalar(1)
    with pytest.raises(FrameError, match="antisymmetric"):
        FrameManifold(2, linalg.identity(2), c)


def test_killing_and_lie_derivative():
    m = heisenberg()
    pkg = curvature(m)
    assert linalg.is_zero(lie_derivative_metric(m, pkg.gamma, FrameVectorField.basis(3, 2)))
    six = six_dim()
    lie = lie_derivative_metric(six, curvature(six).gamma, FrameVectorField.basis(6, 5))
    assert [lie[i, i] for i in range(6)] == [2, 2, 2, 2, 2, 0]
    assert linalg.is_zero(lie - np.diag(np.diag(lie)))


def test_covariant_derivative_rows():
    pkg = curvature(six_dim())
    dv = covariant_derivative(pkg.gamma, FrameVectorField.basis(6, 5))
    for i in range(5):
        assert dv[i, i] == 1


def test_non_orthonormal_metric_scalar_invariance():
    # scaling the metric by c scales the scalar curvature by 1/c
    m = heisenberg(linalg.scalar_array([[2, 0, 0], [0, 2, 0], [0, 0, 2]]))
    assert curvature(m).scalar == parse_scalar("-1/4")


def test_vector_field_helpers():
    v = FrameVectorField((Scalar(0), parse_scalar("sqrt2"), Scalar(3)))
    assert v.support() == {1, 2}
    assert v.restrict([1, 2]) == FrameVectorField((parse_scalar("sqrt2"), Scalar(3)))
    assert FrameVectorField.zero(3).is_zero()
    assert hash(v) == hash(FrameVectorField(tuple(v.coeffs)))
    assert "E2" in repr(v)
