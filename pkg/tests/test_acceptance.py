"""Acceptance criteria, one check per criterion.

Each check prints a single ``PASS``/``FAIL`` line. Run with pytest, or
directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import random_metric, random_nilpotent3, random_scalar  # noqa: E402
from rysoliton import linalg  # noqa: E402
from rysoliton.frame import FrameVectorField, curvature, curvature_identity_residuals, levi_civita  # noqa: E402
from rysoliton.harmonic import trace_identity  # noqa: E402
from rysoliton.manifest import bundled_names, bundled_path, load_manifest  # noqa: E402
from rysoliton.scalar import ZERO, Scalar, parse_scalar  # noqa: E402
from rysoliton.soliton import (  # noqa: E402
    Classification,
    Domain,
    SolitonParams,
    classify,
    eta_einstein_solve,
    prepare_domain,
    soliton_affine_form,
    soliton_residual,
    solve_on,
    solve_prepared,
)
from rysoliton.submersion import (  # noqa: E402
    base_geometry,
    mean_curvature,
    oneill_identity_residuals,
    oneill_tensors,
    structural_flags,
)
from rysoliton.verify import paper_ledger  # noqa: E402

S = parse_scalar
GOLDEN = Path(__file__).parent / "golden" / "paper_ledger.json"
RESULTS: dict[int, tuple[bool, str]] = {}


def _manifests():
    return {n: load_manifest(bundled_path(n)) for n in bundled_names()}


AXIOMS = ("torsion", "metric_compatibility", "riemann_antisymmetry", "first_bianchi", "pair_symmetry")


def criterion_1():
    start = time.perf_counter()
    frames = [m.frame for m in _manifests().values()]
    rng = random.Random(20261018)
    for k in range(100):
        frames.append(random_nilpotent3(rng, random_metric(rng, 3) if k % 2 else None))
    bad = []
    for f in frames:
        res = curvature_identity_residuals(f, curvature(f))
        if any(res[a] for a in AXIOMS):
            bad.append(f.name or "random")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    return ok, f"connection/curvature axioms exact on {len(frames)} frames in {elapsed:.2f}s" + (f"; failing: {bad}" if bad else "")


def criterion_2():
    man = _manifests()["heisenberg3"]
    m, split = man.frame, man.split
    pkg = curvature(m)
    half = Scalar(Fraction(1, 2))
    ricci_ok = linalg.is_zero(pkg.ricci - linalg.scalar_array([[-half, 0, 0], [0, -half, 0], [0, 0, half]]))
    t = oneill_tensors(m, levi_civita(m), split)
    a_ok = list(t.A[0, 1]) == [0, 0, half]
    res = oneill_identity_residuals(m, split)["curvature_horizontal"]
    base_ok = linalg.is_zero(base_geometry(m, split).riemann)
    ok = ricci_ok and pkg.scalar == -half and a_ok and res.max_abs == 0 and res.evaluated == 16 and base_ok
    return ok, f"Heisenberg S=diag(-1/2,-1/2,1/2), scalar {pkg.scalar}, A_E1 E2 = 1/2 E3, horizontal residual {res.max_abs} over {res.evaluated} tuples"


def criterion_3():
    man = _manifests()["example51"]
    m, split = man.frame, man.split
    t = oneill_tensors(m, levi_civita(m), split)
    res = oneill_identity_residuals(m, split)["curvature_vertical"]
    tii = all(list(t.T[i, i]) == [0, 0, 0, 0, 0, -1] for i in range(5))
    N, _ = mean_curvature(m, t.T, split)
    umb = structural_flags(m, split, t).fibers_totally_umbilical
    ok = res.max_abs == 0 and res.evaluated == 625 and tii and N == FrameVectorField.basis(6, 5, -5) and umb
    return ok, f"vertical Gauss residual {res.max_abs} over {res.evaluated} tuples, T_Ei Ei = -E6, N = -5 E6, umbilical {umb}"


def criterion_4():
    man = _manifests()["heisenberg3"]
    run = man.run("total")
    p = man.params(run, Scalar(1), ZERO)
    data = prepare_domain(man.frame, p, man.split)
    sol = solve_prepared(data, p)
    res = soliton_residual(data.geom, data.lie, p, sol.lam, sol.mu)
    aff = soliton_affine_form(data, p)
    forms = (aff.lam.c0, aff.lam.c_alpha, aff.lam.c_beta, aff.mu.c0, aff.mu.c_alpha, aff.mu.c_beta)
    ok = (
        (sol.lam, sol.mu) == (S("1/2"), S("-1"))
        and linalg.is_zero(res)
        and forms == (0, S("1/2"), S("-1/4"), 0, -1, 0)
        and aff.exact
    )
    return ok, f"(lambda, mu) = ({sol.lam}, {sol.mu}), residual zero {linalg.is_zero(res)}, affine lambda = {aff.lam}, mu = {aff.mu}, checked at (1,1) {aff.exact}"


def criterion_5():
    ledger = paper_ledger()
    text = ledger.to_json()
    stable = text == paper_ledger().to_json() == GOLDEN.read_text()
    agree = [
        "example51.total.riemann[R(E1,E6)E6]",
        "example52.soliton.fiber_claimed.mu_affine",
    ]
    flagged = [
        "example51.total.ricci",
        "example51.total.scalar",
        "example51.soliton.whole_space.lambda_affine",
        "example51.soliton.whole_space.mu_affine",
        "example52.fiber.scalar",
        "example52.horizontal.scalar",
    ]
    agree_ok = all(ledger.find(q).match for q in agree)
    flag_ok = all(not ledger.find(q).match and ledger.find(q).computed is not None for q in flagged)
    values_ok = (
        ledger.find("example51.total.scalar").computed == "-30"
        and ledger.find("example51.soliton.whole_space.lambda_affine").computed == {"c0": "-1", "c_alpha": "5", "c_beta": "-15"}
        and ledger.find("example52.fiber.scalar").computed == "0"
        and ledger.find("example52.horizontal.scalar").claimed == "-2*sqrt2"
    )
    s = ledger.summary()
    ok = stable and agree_ok and flag_ok and values_ok
    return ok, f"ledger {s['entries']} entries ({s['matches']} match, {s['mismatches']} mismatch), required agreements {agree_ok}, required flags {flag_ok}, byte-stable {stable}"


def criterion_6():
    fixed = (
        classify(S("1/2")) is Classification.SHRINKING
        and classify(S("-1*sqrt2")) is Classification.EXPANDING
        and classify(ZERO) is Classification.STEADY
    )
    rng = random.Random(6)
    sign_map = {1: Classification.SHRINKING, -1: Classification.EXPANDING, 0: Classification.STEADY}
    bad = sum(classify(x) is not sign_map[x.sign()] for x in (random_scalar(rng) for _ in range(1000)))
    return fixed and not bad, f"fixed examples {fixed}, {1000 - bad}/1000 random scalars consistent with the exact sign"


def criterion_7():
    mans = _manifests()
    checked = 0
    failures = []
    types = [(Scalar(1), ZERO), (ZERO, Scalar(1)), (Scalar(2), S("-1/3")), (S("1/2"), S("sqrt2"))]
    for man in mans.values():
        for run in man.runs:
            if run.domain is not Domain.FIBER:
                continue
            ricci = scal = None
            if run.claimed_tensors:
                ricci, scal = man.claimed_tensors(run.domain)
            for a, b in types:
                p = man.params(run, a, b)
                data = prepare_domain(man.frame, p, man.split, ricci, scal)
                sol = solve_prepared(data, p)
                if not sol.exact:
                    continue
                rep = trace_identity(data.geom, sol, p, data.geom.dim, scalar=data.scalar)
                checked += 1
                if rep.divergence_V != rep.engine_formula_value:
                    failures.append(f"{man.name}:{run.label}")
    six = mans["example51"]
    r1 = 0
    for a, b in types:
        p = SolitonParams(a, b, FrameVectorField.basis(6, 5), FrameVectorField.basis(6, 5), Domain.HORIZONTAL)
        data, sol = solve_on(six.frame, p, six.split)
        rep = trace_identity(data.geom, sol, p, 1, scalar=data.scalar)
        if sol.exact and rep.paper_formula_value == rep.engine_formula_value == rep.divergence_V:
            r1 += 1
    ok = checked > 0 and not failures and r1 == len(types)
    return ok, f"trace identity exact on {checked} fiber solves, r = 1 formulas coincide on {r1}/{len(types)}" + (f"; failing {failures}" if failures else "")


def criterion_8():
    rng = random.Random(8)
    good = 0
    for _ in range(100):
        n = rng.randint(2, 4)
        G = random_metric(rng, n)
        coeffs = [random_scalar(rng) for _ in range(n)]
        if not any(coeffs):
            coeffs[0] = Scalar(1)
        xi = FrameVectorField(tuple(coeffs))
        a, b = random_scalar(rng), random_scalar(rng)
        eta = G.dot(xi.as_array())
        S_ = a * G + b * linalg.scalar_array([[x * y for y in eta] for x in eta])
        if eta_einstein_solve(S_, G, xi) == (a, b, True):
            good += 1
    return good == 100, f"{good}/100 eta-Einstein round trips exact"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 9)}


def _record(i: int) -> tuple[bool, str]:
    try:
        ok, detail = CRITERIA[i]()
    except Exception as exc:  # a crash is a failure, reported like one
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    RESULTS[i] = (ok, detail)
    print(f"criterion {i}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok, detail


@pytest.mark.parametrize("i", sorted(CRITERIA))
def test_criterion(i):
    ok, detail = _record(i)
    assert ok, detail


if __name__ == "__main__":
    outcomes = [_record(i)[0] for i in sorted(CRITERIA)]
    sys.exit(0 if all(outcomes) else 1)
