from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from rysoliton import linalg
from rysoliton.frame import FrameManifold
from rysoliton.manifest import bundled_names, bundled_path, load_manifest
from rysoliton.scalar import Scalar

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def scalars(draw, nonzero: bool = False):
    s = Scalar(draw(small), draw(small))
    if nonzero and not s:
        s = Scalar(1)
    return s


def random_rational(rng: random.Random, lo: int = -5, hi: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_scalar(rng: random.Random) -> Scalar:
    return Scalar(random_rational(rng, -9, 9, 7), random_rational(rng, -9, 9, 7))


def random_nilpotent3(rng: random.Random, metric=None) -> FrameManifold:
    """Heisenberg-type algebra [E1, E2] = a E3 written in a random rational basis.

    A change of basis keeps the algebra nilpotent and Jacobi-satisfying while
    making every structure constant generically nonzero.
    """
    a = random_rational(rng)
    while True:
        P = linalg.scalar_array(
            [[random_rational(rng, -3, 3, 2) for _ in range(3)] for _ in range(3)], (3, 3)
        )
        try:
            Pinv = linalg.inverse(P)
            break
        except linalg.SingularMatrixError:
            continue
    base = linalg.zeros(3, 3, 3)
    base[0, 1, 2] = Scalar(a)
    base[1, 0, 2] = Scalar(-a)
    # F_i = sum_a P[i, a] E_a, so [F_i, F_j] = sum P[i,a] P[j,b] c_ab^m E_m, E_m = sum Pinv[m, k] F_k
    c = np.einsum("ia,jb,abm,mk->ijk", P, P, base, Pinv)
    brackets = {(i, j): {k: c[i, j, k] for k in range(3) if c[i, j, k]} for i in range(3) for j in range(i + 1, 3)}
    return FrameManifold.from_brackets(3, brackets, metric, strict=True)


def random_metric(rng: random.Random, n: int):
    """G = L L^T with L lower triangular, positive rational diagonal."""
    L = linalg.zeros(n, n)
    for i in range(n):
        for j in range(i):
            L[i, j] = Scalar(random_rational(rng, -2, 2, 3))
        L[i, i] = Scalar(Fraction(rng.randint(1, 3), rng.randint(1, 3)))
    return L.dot(L.T)


@pytest.fixture(scope="session")
def bundled():
    return {name: load_manifest(bundled_path(name)) for name in bundled_names()}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(RESULTS):
        ok, detail = RESULTS[i]
        terminalreporter.write_line(f"criterion {i}: {'PASS' if ok else 'FAIL'} - {detail}")
