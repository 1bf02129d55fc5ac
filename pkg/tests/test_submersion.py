from __future__ import annotations

from fractions import Fraction

import pytest

from rysoliton import linalg
from rysoliton.frame import FrameManifold, FrameVectorField, curvature, levi_civita
from rysoliton.scalar import Scalar
from rysoliton.soliton import (
    Domain,
    HypothesisError,
    SolitonParams,
    almost_soliton_coefficient,
)
from rysoliton.submersion import (
    IntegrabilityError,
    SplitError,
    SubmersionSplit,
    base_geometry,
    fiber_frame,
    fiber_geometry,
    horizontal_divergence,
    horizontal_is_basic,
    mean_curvature,
    oneill_identity_residuals,
    oneill_tensors,
    structural_flags,
)

HALF = Scalar(Fraction(1, 2))


def _setup(man):
    m, split = man.frame, man.split
    return m, split, oneill_tensors(m, levi_civita(m), split)


def test_heisenberg_tensors(bundled):
    m, split, t = _setup(bundled["heisenberg3"])
    assert list(t.A[0, 1]) == [0, 0, HALF]
    assert list(t.A[1, 0]) == [0, 0, -HALF]
    assert list(t.A[0, 2]) == [0, -HALF, 0]
    assert linalg.is_zero(t.T)
    flags = structural_flags(m, split, t)
    assert not flags.horizontal_integrable
    assert flags.fibers_totally_geodesic and flags.fibers_minimal


def test_heisenberg_curvature_relations(bundled):
    m, split = bundled["heisenberg3"].frame, bundled["heisenberg3"].split
    res = oneill_identity_residuals(m, split)
    hor = res["curvature_horizontal"]
    assert hor.asserted and hor.max_abs == 0 and hor.evaluated == 16
    assert res["curvature_vertical"].max_abs == 0
    assert linalg.is_zero(base_geometry(m, split).riemann)


def test_six_dim_umbilical_fibers(bundled):
    m, split, t = _setup(bundled["example51"])
    for i in range(5):
        assert list(t.T[i, i]) == [0, 0, 0, 0, 0, -1]
    N, W = mean_curvature(m, t.T, split)
    assert N == FrameVectorField.basis(6, 5, -5)
    assert W == FrameVectorField.basis(6, 5, -1)
    flags = structural_flags(m, split, t).as_dict()
    assert flags == {
        "vertical_parallel": False,
        "horizontal_parallel": False,
        "horizontal_integrable": True,
        "fibers_minimal": False,
        "fibers_totally_umbilical": True,
        "fibers_totally_geodesic": False,
    }
    res = oneill_identity_residuals(m, split)
    assert res["curvature_vertical"].max_abs == 0
    assert res["curvature_vertical"].evaluated == 5**4
    assert res["curvature_horizontal"].max_abs == 0
    # divergence of W along the 1-dimensional horizontal block vanishes
    assert horizontal_divergence(m, levi_civita(m), W, split) == 0


def test_report_only_relations_are_recorded(bundled):
    res = oneill_identity_residuals(bundled["example51"].frame, bundled["example51"].split)
    for label in ("ricci_vertical_literal", "ricci_vertical_grouped", "ricci_horizontal_literal", "ricci_mixed_literal"):
        assert not res[label].asserted
    assert res["ricci_mixed_literal"].vanishes
    # worst entries carry 1-based indices
    worst = res["ricci_vertical_literal"].worst
    assert worst and all(min(ix) >= 1 for ix, _ in worst)


def test_abelian_split_all_flags(bundled):
    m, split, t = _setup(bundled["abelian3"])
    assert all(structural_flags(m, split, t).as_dict().values())
    assert all(r.vanishes for r in oneill_identity_residuals(m, split).values())


def test_fiber_geometry_of_six_dim_is_flat(bundled):
    man = bundled["example51"]
    fib = fiber_geometry(man.frame, man.split)
    assert fib.dim == 5 and fib.scalar == 0
    assert fib.indices == (0, 1, 2, 3, 4)


def test_split_validation():
    m = FrameManifold.from_brackets(3, {(0, 1): {2: 1}})
    with pytest.raises(SplitError):
        SubmersionSplit((0,), (0, 1, 2))
    with pytest.raises(SplitError):
        SubmersionSplit((0,), (1,)).validate(m)
    g = linalg.scalar_array([[2, 1, 0], [1, 2, 0], [0, 0, 1]])
    skew = FrameManifold.from_brackets(3, {}, g)
    with pytest.raises(SplitError):
        SubmersionSplit.from_vertical(3, [0]).validate(skew)
    # vertical {1, 2} in Heisenberg is not integrable
    with pytest.raises(IntegrabilityError):
        fiber_frame(m, SubmersionSplit.from_vertical(3, [0, 1]))


def test_horizontal_basic(bundled):
    assert horizontal_is_basic(bundled["heisenberg3"].frame, bundled["heisenberg3"].split)
    assert horizontal_is_basic(bundled["example51"].frame, bundled["example51"].split)
    m = FrameManifold.from_brackets(2, {(0, 1): {1: 1}})
    assert not horizontal_is_basic(m, SubmersionSplit.from_vertical(2, [0]))


def _fiber_params(n, xi_index, v=None):
    pot = v if v is not None else FrameVectorField.zero(n)
    return SolitonParams(0, 0, pot, FrameVectorField.basis(n, xi_index), Domain.FIBER)


def test_almost_soliton_abelian(bundled):
    man = bundled["abelian3"]
    m, split, t = _setup(man)
    rep = almost_soliton_coefficient(m, split, t, fiber_geometry(m, split), _fiber_params(3, 2), 0, 0)
    assert rep.coefficient == 0 and rep.exact


def test_almost_soliton_six_dim(bundled):
    man = bundled["example51"]
    m, split, t = _setup(man)
    fib = fiber_geometry(m, split)
    for lam in (Scalar(0), Scalar(Fraction(-5, 2)), Scalar(3)):
        rep = almost_soliton_coefficient(m, split, t, fib, _fiber_params(6, 0), lam, 0)
        assert rep.geometric_part == 5
        assert rep.coefficient == 5 + 2 * lam
    # coefficient vanishes at lambda = -5/2, making the fiber equation hold with V = 0, mu = 0
    rep = almost_soliton_coefficient(m, split, t, fib, _fiber_params(6, 0), Scalar(Fraction(-5, 2)), 0)
    assert rep.exact


def test_almost_soliton_refuses_without_hypotheses(bundled):
    m, split, t = _setup(bundled["heisenberg3"])
    with pytest.raises(HypothesisError) as info:
        almost_soliton_coefficient(m, split, t, fiber_geometry(m, split), _fiber_params(3, 2), 0, 0)
    assert info.value.hypothesis == "horizontal_integrable"
