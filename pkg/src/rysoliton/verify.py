"""Compare engine results with every claimed value in a manifest.

A mismatch is data, not failure: each claimed value yields exactly one
ledger entry, and computation errors are recorded as entry notes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable

from .frame import CurvaturePackage, FrameVectorField, curvature
from .manifest import ClaimedVector, Manifest, bundled_names, bundled_path, load_manifest
from .report import affine_map, vector_map
from .scalar import Scalar
from .soliton import Domain, classify, prepare_domain, soliton_affine_form, solve_prepared
from .submersion import base_geometry, fiber_geometry

__all__ = ["LedgerEntry", "VerificationLedger", "run_verify", "paper_ledger", "domain_geometry"]

MISMATCH_NOTE = "computed value differs from the claimed value"


@dataclass(frozen=True)
class LedgerEntry:
    quantity: str
    computed: Any
    claimed: Any
    match: bool
    note: str = ""

    def as_dict(self) -> dict[str, Any]:
        return {
            "quantity": self.quantity,
            "computed": self.computed,
            "claimed": self.claimed,
            "match": self.match,
            "note": self.note,
        }


@dataclass
class VerificationLedger:
    entries: list[LedgerEntry] = field(default_factory=list)

    @property
    def matches(self) -> int:
        return sum(e.match for e in self.entries)

    @property
    def mismatches(self) -> int:
        return len(self.entries) - self.matches

    def summary(self) -> dict[str, int]:
        return {"entries": len(self.entries), "matches": self.matches, "mismatches": self.mismatches}

    def extend(self, other: VerificationLedger) -> None:
        self.entries.extend(other.entries)

    def find(self, quantity: str) -> LedgerEntry:
        for e in self.entries:
            if e.quantity == quantity:
                return e
        raise KeyError(quantity)

    def as_dict(self) -> dict[str, Any]:
        return {"entries": [e.as_dict() for e in self.entries], "summary": self.summary()}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"

    def text(self) -> str:
        lines = []
        for e in self.entries:
            tag = "match   " if e.match else "MISMATCH"
            line = f"{tag} {e.quantity}: computed {_show(e.computed)}, claimed {_show(e.claimed)}"
            if e.note:
                line += f"  [{e.note}]"
            lines.append(line)
        s = self.summary()
        lines.append(f"{s['entries']} entries: {s['matches']} match, {s['mismatches']} mismatch")
        return "\n".join(lines)


def _show(v: Any) -> str:
    if v is None:
        return "n/a"
    if isinstance(v, str):
        return v
    return json.dumps(v, ensure_ascii=False)


def _join(*notes: str) -> str:
    return "; ".join(n for n in notes if n)


def domain_geometry(m: Manifest, domain: Domain) -> CurvaturePackage:
    if domain is Domain.TOTAL:
        return curvature(m.frame)
    if m.split is None:
        raise ValueError(f"domain {domain.value!r} needs a split")
    if domain is Domain.FIBER:
        return fiber_geometry(m.frame, m.split)
    return base_geometry(m.frame, m.split)


class _Builder:
    def __init__(self, prefix: str):
        self.prefix = prefix
        self.ledger = VerificationLedger()

    def compare(self, quantity: str, computed: Any, claimed: Any, note: str = "") -> None:
        match = computed == claimed
        if not match and computed is not None:
            note = _join(MISMATCH_NOTE, note)
        self.ledger.entries.append(LedgerEntry(f"{self.prefix}.{quantity}", computed, claimed, match, note))

    def guarded(self, quantity: str, claimed: Any, compute: Callable[[], Any], note: str = "") -> None:
        try:
            computed = compute()
        except (ValueError, ArithmeticError) as exc:
            self.compare(quantity, None, claimed, _join(f"computation failed: {exc}", note))
            return
        self.compare(quantity, computed, claimed, note)


def _matrix(a) -> list[list[str]]:
    return [[str(x) for x in row] for row in a]


def _vector_from(pkg: CurvaturePackage, row, n: int) -> dict[str, str]:
    coeffs = [Scalar(0)] * n
    for local, glob in enumerate(pkg.indices):
        coeffs[glob] = row[local]
    return vector_map(FrameVectorField(tuple(coeffs)))


def _slot_label(kind: str, slots: tuple[int, ...]) -> str:
    e = [f"E{s + 1}" for s in slots]
    if kind == "connection":
        return f"connection[nabla_{e[0]} {e[1]}]"
    return f"riemann[R({e[0]},{e[1]}){e[2]}]"


def _tensor_claim(pkg: CurvaturePackage, kind: str, cv: ClaimedVector, n: int) -> dict[str, str]:
    pos = {g: i for i, g in enumerate(pkg.indices)}
    missing = [s for s in cv.slots if s not in pos]
    if missing:
        raise ValueError(f"E{missing[0] + 1} is not a frame vector of this domain")
    local = tuple(pos[s] for s in cv.slots)
    row = (pkg.gamma if kind == "connection" else pkg.riemann)[local]
    return _vector_from(pkg, row, n)


def run_verify(m: Manifest) -> VerificationLedger:
    """One ledger entry per claimed value in ``m``."""
    b = _Builder(m.name)
    n = m.dimension
    for domain in Domain:
        claims = m.claimed.get(domain)
        if claims is None:
            continue
        d = domain.value
        try:
            pkg = domain_geometry(m, domain)
            err = None
        except ValueError as exc:
            pkg, err = None, exc

        def geo(f, pkg=pkg, err=err):
            if pkg is None:
                raise ValueError(str(err))
            return f(pkg)

        if claims.ricci is not None:
            b.guarded(f"{d}.ricci", _matrix(claims.ricci), lambda: geo(lambda p: _matrix(p.ricci)),
                      claims.notes.get("ricci", ""))
        if claims.scalar is not None:
            b.guarded(f"{d}.scalar", str(claims.scalar), lambda: geo(lambda p: str(p.scalar)),
                      claims.notes.get("scalar", ""))
        for kind in ("connection", "riemann"):
            for cv in getattr(claims, kind):
                b.guarded(
                    f"{d}.{_slot_label(kind, cv.slots)}",
                    vector_map(cv.vector),
                    lambda cv=cv, kind=kind: geo(lambda p: _tensor_claim(p, kind, cv, n)),
                    _join(cv.note, claims.notes.get(kind, "")),
                )

    for cs in m.claimed_solitons:
        run = m.run(cs.run)
        q = f"soliton.{run.label}"
        try:
            p = m.params(run, Scalar(0), Scalar(0))
            ricci = scal = None
            if run.claimed_tensors:
                ricci, scal = m.claimed_tensors(run.domain)
            data = prepare_domain(m.frame, p, m.split, ricci, scal)
            err = None
        except (ValueError, ArithmeticError) as exc:
            data, err = None, exc

        def need(data=data, err=err):
            if data is None:
                raise ValueError(str(err))
            return data

        affine_cache: dict[str, Any] = {}

        def affine(key, p_run=run):
            if "aff" not in affine_cache:
                d0 = need()
                affine_cache["aff"] = soliton_affine_form(d0, m.params(p_run, Scalar(0), Scalar(0)))
            a = affine_cache["aff"]
            return affine_map(a.lam if key == "lambda" else a.mu)

        if cs.lambda_affine is not None:
            b.guarded(f"{q}.lambda_affine", affine_map(cs.lambda_affine), lambda: affine("lambda"), cs.note)
        if cs.mu_affine is not None:
            b.guarded(f"{q}.mu_affine", affine_map(cs.mu_affine), lambda: affine("mu"), cs.note)
        for case in cs.cases:
            cq = f"{q}.case(alpha={case.alpha},beta={case.beta})"
            cache: dict[str, Any] = {}

            def sol(case=case, cache=cache, p_run=run):
                if "sol" not in cache:
                    cache["sol"] = solve_prepared(need(), m.params(p_run, case.alpha, case.beta))
                return cache["sol"]

            if case.lam is not None:
                b.guarded(f"{cq}.lambda", str(case.lam), lambda sol=sol: str(sol().lam), case.note)
            if case.mu is not None:
                b.guarded(f"{cq}.mu", str(case.mu), lambda sol=sol: str(sol().mu), case.note)
            if case.classification is not None:
                note = case.note
                if case.lam is not None and classify(case.lam).value != case.classification:
                    note = _join(
                        f"claimed label contradicts the claimed lambda = {case.lam} "
                        f"under the convention lambda > 0 shrinking, lambda < 0 expanding",
                        note,
                    )
                b.guarded(
                    f"{cq}.classification",
                    case.classification,
                    lambda sol=sol: sol().classification.value,
                    note,
                )
    return b.ledger


def paper_ledger() -> VerificationLedger:
    """Ledger over every bundled manifest, in a fixed order."""
    out = VerificationLedger()
    for name in bundled_names():
        out.extend(run_verify(load_manifest(bundled_path(name))))
    return out
