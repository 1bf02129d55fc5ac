"""JSON manifests describing a frame, an optional split, fields and soliton runs.

Indices in manifests are 1-based (``E1 .. En``); everything in memory is
0-based. Scalar values are literals in the scalar grammar (``"1/2*sqrt2"``).
A ``claimed`` block holds externally asserted values; it is only read by the
verification ledger and, for runs flagged ``claimed_tensors``, by the solver.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from . import linalg
from .frame import FrameError, FrameManifold, FrameVectorField, jacobi_check
from .scalar import Scalar, ScalarParseError, parse_scalar
from .soliton import AffineForm, Domain, SolitonParams
from .submersion import SubmersionSplit, SplitError

__all__ = [
    "ManifestError",
    "Manifest",
    "SolitonRun",
    "ClaimedVector",
    "ClaimedGeometry",
    "ClaimedCase",
    "ClaimedSoliton",
    "load_manifest",
    "parse_manifest",
    "dump_manifest",
    "bundled_names",
    "bundled_path",
    "resolve_manifest_path",
    "MANIFEST_SCHEMA",
]

BUNDLED = ("abelian3", "heisenberg3", "example51", "example52")

_literal = {"type": "string"}
_index = {"type": "integer", "minimum": 1}
_coeffs = {
    "type": "object",
    "patternProperties": {"^[1-9][0-9]*$": _literal},
    "additionalProperties": False,
}
_matrix = {"type": "array", "items": {"type": "array", "items": _literal}}
_affine = {
    "type": "object",
    "properties": {"c0": _literal, "c_alpha": _literal, "c_beta": _literal},
    "required": ["c0", "c_alpha", "c_beta"],
    "additionalProperties": False,
}
_claimed_geometry = {
    "type": "object",
    "properties": {
        "ricci": _matrix,
        "scalar": _literal,
        "connection": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"i": _index, "j": _index, "coeffs": _coeffs, "note": {"type": "string"}},
                "required": ["i", "j", "coeffs"],
                "additionalProperties": False,
            },
        },
        "riemann": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "i": _index,
                    "j": _index,
                    "k": _index,
                    "coeffs": _coeffs,
                    "note": {"type": "string"},
                },
                "required": ["i", "j", "k", "coeffs"],
                "additionalProperties": False,
            },
        },
        "notes": {"type": "object", "additionalProperties": {"type": "string"}},
    },
    "additionalProperties": False,
}

MANIFEST_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
        "dimension": {"type": "integer", "minimum": 1},
        "metric": {"oneOf": [{"const": "identity"}, _matrix]},
        "strict": {"type": "boolean"},
        "brackets": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"i": _index, "j": _index, "coeffs": _coeffs},
                "required": ["i", "j", "coeffs"],
                "additionalProperties": False,
            },
        },
        "split": {
            "type": "object",
            "properties": {
                "vertical": {"type": "array", "items": _index, "minItems": 1},
                "horizontal": {"type": "array", "items": _index, "minItems": 1},
                "map_note": {"type": "string"},
            },
            "required": ["vertical", "horizontal"],
            "additionalProperties": False,
        },
        "fields": {"type": "object", "additionalProperties": _coeffs},
        "soliton": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "label": {"type": "string", "minLength": 1},
                    "domain": {"enum": [d.value for d in Domain]},
                    "potential": {"type": "string"},
                    "xi": {"type": "string"},
                    "alpha": _literal,
                    "beta": _literal,
                    "claimed_tensors": {"type": "boolean"},
                },
                "required": ["label", "domain", "potential", "xi"],
                "additionalProperties": False,
            },
        },
        "claimed": {
            "type": "object",
            "properties": {
                **{d.value: _claimed_geometry for d in Domain},
                "solitons": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "run": {"type": "string"},
                            "lambda_affine": _affine,
                            "mu_affine": _affine,
                            "note": {"type": "string"},
                            "cases": {
                                "type": "array",
                                "items": {
                                    "type": "object",
                                    "properties": {
                                        "alpha": _literal,
                                        "beta": _literal,
                                        "lambda": _literal,
                                        "mu": _literal,
                                        "classification": {
                                            "enum": ["shrinking", "expanding", "steady"]
                                        },
                                        "note": {"type": "string"},
                                    },
                                    "required": ["alpha", "beta"],
                                    "additionalProperties": False,
                                },
                            },
                        },
                        "required": ["run"],
                        "additionalProperties": False,
                    },
                },
            },
            "additionalProperties": False,
        },
        "notes": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["name", "dimension", "metric"],
    "additionalProperties": False,
}


class ManifestError(ValueError):
    """Manifest failed validation; ``errors`` lists ``(field path, message)``."""

    def __init__(self, errors: list[tuple[str, str]], source: str = ""):
        self.errors = errors
        self.source = source
        head = f"invalid manifest {source}".rstrip()
        super().__init__(head + ":\n" + "\n".join(f"  {p}: {m}" for p, m in errors))


@dataclass(frozen=True, eq=False)
class SolitonRun:
    label: str
    domain: Domain
    potential: str
    xi: str
    alpha: Scalar | None = None
    beta: Scalar | None = None
    claimed_tensors: bool = False


@dataclass(frozen=True, eq=False)
class ClaimedVector:
    """Claimed ``nabla_{E_i} E_j`` or ``R(E_i, E_j) E_k`` (0-based ``slots``)."""

    slots: tuple[int, ...]
    vector: FrameVectorField
    note: str = ""


@dataclass(eq=False)
class ClaimedGeometry:
    ricci: np.ndarray | None = None
    scalar: Scalar | None = None
    connection: list[ClaimedVector] = field(default_factory=list)
    riemann: list[ClaimedVector] = field(default_factory=list)
    notes: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class ClaimedCase:
    alpha: Scalar
    beta: Scalar
    lam: Scalar | None = None
    mu: Scalar | None = None
    classification: str | None = None
    note: str = ""


@dataclass(eq=False)
class ClaimedSoliton:
    run: str
    lambda_affine: AffineForm | None = None
    mu_affine: AffineForm | None = None
    cases: list[ClaimedCase] = field(default_factory=list)
    note: str = ""


@dataclass(eq=False)
class Manifest:
    name: str
    frame: FrameManifold
    description: str = ""
    metric_is_identity: bool = True
    strict: bool = False
    split: SubmersionSplit | None = None
    map_note: str = ""
    fields: dict[str, FrameVectorField] = field(default_factory=dict)
    runs: list[SolitonRun] = field(default_factory=list)
    claimed: dict[Domain, ClaimedGeometry] = field(default_factory=dict)
    claimed_solitons: list[ClaimedSoliton] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return self.frame.dim

    def run(self, label: str) -> SolitonRun:
        for r in self.runs:
            if r.label == label:
                return r
        raise KeyError(f"manifest {self.name!r} has no soliton run {label!r}")

    def params(self, run: SolitonRun, alpha=None, beta=None) -> SolitonParams:
        a = run.alpha if alpha is None else alpha
        b = run.beta if beta is None else beta
        if a is None or b is None:
            raise ValueError(f"run {run.label!r} needs alpha and beta")
        return SolitonParams(a, b, self.fields[run.potential], self.fields[run.xi], run.domain)

    def claimed_tensors(self, domain: Domain) -> tuple[np.ndarray, Scalar]:
        block = self.claimed.get(domain)
        if block is None or block.ricci is None or block.scalar is None:
            raise ValueError(
                f"manifest {self.name!r} has no claimed Ricci tensor and scalar for domain {domain.value!r}"
            )
        return block.ricci, block.scalar


# -- parsing -------------------------------------------------------------


class _Errors:
    def __init__(self):
        self.items: list[tuple[str, str]] = []

    def add(self, path: str, msg: str) -> None:
        self.items.append((path, msg))

    def scalar(self, text: str, path: str) -> Scalar | None:
        try:
            return parse_scalar(text)
        except ScalarParseError as exc:
            self.add(path, str(exc))
            return None

    def index(self, i: int, n: int, path: str) -> int | None:
        if not 1 <= i <= n:
            self.add(path, f"index {i} out of range 1..{n}")
            return None
        return i - 1


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _vector(coeffs: dict[str, str], n: int, path: str, errs: _Errors) -> FrameVectorField:
    c = [Scalar(0)] * n
    for key, lit in coeffs.items():
        k = errs.index(int(key), n, f"{path}.{key}")
        v = errs.scalar(lit, f"{path}.{key}")
        if k is not None and v is not None:
            c[k] = v
    return FrameVectorField(tuple(c))


def _matrix_value(rows, shape, path: str, errs: _Errors) -> np.ndarray | None:
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        errs.add(path, f"expected a {shape[0]}x{shape[1]} matrix")
        return None
    out = linalg.zeros(*shape)
    for i, row in enumerate(rows):
        for j, lit in enumerate(row):
            v = errs.scalar(lit, f"{path}[{i}][{j}]")
            if v is not None:
                out[i, j] = v
    return out


def _affine(d: dict | None, path: str, errs: _Errors) -> AffineForm | None:
    if d is None:
        return None
    vals = [errs.scalar(d[k], f"{path}.{k}") for k in ("c0", "c_alpha", "c_beta")]
    if any(v is None for v in vals):
        return None
    return AffineForm(*vals)


def parse_manifest(data: Any, source: str = "") -> Manifest:
    """Validate decoded JSON and build a :class:`Manifest`; raises ManifestError."""
    validator = jsonschema.Draft202012Validator(MANIFEST_SCHEMA)
    schema_errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if schema_errors:
        raise ManifestError(
            [(_json_path(e.absolute_path), e.message) for e in schema_errors], source
        )
    errs = _Errors()
    n = data["dimension"]

    metric_raw = data["metric"]
    identity = metric_raw == "identity"
    metric = linalg.identity(n) if identity else _matrix_value(metric_raw, (n, n), "$.metric", errs)

    brackets: dict[tuple[int, int], dict[int, Scalar]] = {}
    for idx, b in enumerate(data.get("brackets", [])):
        path = f"$.brackets[{idx}]"
        i = errs.index(b["i"], n, path + ".i")
        j = errs.index(b["j"], n, path + ".j")
        if i is None or j is None:
            continue
        if i >= j:
            errs.add(path, "brackets must be listed with i < j")
            continue
        if (i, j) in brackets:
            errs.add(path, f"bracket [E{i + 1}, E{j + 1}] listed twice")
            continue
        vec = _vector(b["coeffs"], n, path + ".coeffs", errs)
        brackets[(i, j)] = {k: c for k, c in enumerate(vec.coeffs) if c}

    strict = data.get("strict", False)
    frame = None
    if metric is not None and not errs.items:
        try:
            frame = FrameManifold.from_brackets(n, brackets, metric, name=data["name"])
        except FrameError as exc:
            errs.add("$.metric" if "metric" in str(exc) else "$.brackets", str(exc))
        if frame is not None and strict:
            bad = jacobi_check(frame)
            if bad:
                v = bad[0]
                errs.add(
                    "$.brackets",
                    f"Jacobi identity fails for (E{v.i + 1}, E{v.j + 1}, E{v.k + 1}), "
                    f"component E{v.l + 1}: {v.value}",
                )

    split = None
    map_note = ""
    if "split" in data:
        s = data["split"]
        map_note = s.get("map_note", "")
        vert = [errs.index(i, n, "$.split.vertical") for i in s["vertical"]]
        hor = [errs.index(i, n, "$.split.horizontal") for i in s["horizontal"]]
        if None not in vert and None not in hor:
            try:
                split = SubmersionSplit(tuple(vert), tuple(hor))
                if frame is not None:
                    split.validate(frame)
            except SplitError as exc:
                errs.add("$.split", str(exc))
                split = None

    fields = {
        name: _vector(coeffs, n, f"$.fields.{name}", errs)
        for name, coeffs in data.get("fields", {}).items()
    }

    runs: list[SolitonRun] = []
    labels: set[str] = set()
    for idx, r in enumerate(data.get("soliton", [])):
        path = f"$.soliton[{idx}]"
        if r["label"] in labels:
            errs.add(path + ".label", f"duplicate run label {r['label']!r}")
        labels.add(r["label"])
        for key in ("potential", "xi"):
            if r[key] not in fields:
                errs.add(f"{path}.{key}", f"unknown field {r[key]!r}")
        domain = Domain(r["domain"])
        if domain is not Domain.TOTAL and "split" not in data:
            errs.add(path + ".domain", f"domain {domain.value!r} requires a split")
        if r.get("claimed_tensors"):
            block = data.get("claimed", {}).get(domain.value, {})
            if "ricci" not in block or "scalar" not in block:
                errs.add(
                    path + ".claimed_tensors",
                    f"claimed.{domain.value} needs 'ricci' and 'scalar' for claimed-tensor mode",
                )
        runs.append(
            SolitonRun(
                label=r["label"],
                domain=domain,
                potential=r["potential"],
                xi=r["xi"],
                alpha=errs.scalar(r["alpha"], path + ".alpha") if "alpha" in r else None,
                beta=errs.scalar(r["beta"], path + ".beta") if "beta" in r else None,
                claimed_tensors=r.get("claimed_tensors", False),
            )
        )

    claimed: dict[Domain, ClaimedGeometry] = {}
    claimed_solitons: list[ClaimedSoliton] = []
    cl = data.get("claimed", {})
    for domain in Domain:
        if domain.value not in cl:
            continue
        block = cl[domain.value]
        path = f"$.claimed.{domain.value}"
        if domain is Domain.TOTAL:
            size = n
        elif split is None:
            errs.add(path, f"claims on domain {domain.value!r} require a split")
            continue
        else:
            size = len(split.vertical if domain is Domain.FIBER else split.horizontal)
        geo = ClaimedGeometry(notes=dict(block.get("notes", {})))
        if "ricci" in block:
            geo.ricci = _matrix_value(block["ricci"], (size, size), path + ".ricci", errs)
        if "scalar" in block:
            geo.scalar = errs.scalar(block["scalar"], path + ".scalar")
        for key, arity in (("connection", 2), ("riemann", 3)):
            for idx, item in enumerate(block.get(key, [])):
                ipath = f"{path}.{key}[{idx}]"
                slots = tuple(errs.index(item[s], n, f"{ipath}.{s}") for s in "ijk"[:arity])
                vec = _vector(item["coeffs"], n, ipath + ".coeffs", errs)
                if None not in slots:
                    getattr(geo, key).append(ClaimedVector(slots, vec, item.get("note", "")))
        claimed[domain] = geo
    for idx, s in enumerate(cl.get("solitons", [])):
        path = f"$.claimed.solitons[{idx}]"
        if s["run"] not in labels:
            errs.add(path + ".run", f"unknown soliton run {s['run']!r}")
        cases = []
        for cidx, c in enumerate(s.get("cases", [])):
            cpath = f"{path}.cases[{cidx}]"
            cases.append(
                ClaimedCase(
                    alpha=errs.scalar(c["alpha"], cpath + ".alpha"),
                    beta=errs.scalar(c["beta"], cpath + ".beta"),
                    lam=errs.scalar(c["lambda"], cpath + ".lambda") if "lambda" in c else None,
                    mu=errs.scalar(c["mu"], cpath + ".mu") if "mu" in c else None,
                    classification=c.get("classification"),
                    note=c.get("note", ""),
                )
            )
        claimed_solitons.append(
            ClaimedSoliton(
                run=s["run"],
                lambda_affine=_affine(s.get("lambda_affine"), path + ".lambda_affine", errs),
                mu_affine=_affine(s.get("mu_affine"), path + ".mu_affine", errs),
                cases=cases,
                note=s.get("note", ""),
            )
        )

    if errs.items or frame is None:
        raise ManifestError(errs.items or [("$", "frame could not be built")], source)
    return Manifest(
        name=data["name"],
        frame=frame,
        description=data.get("description", ""),
        metric_is_identity=identity,
        strict=strict,
        split=split,
        map_note=map_note,
        fields=fields,
        runs=runs,
        claimed=claimed,
        claimed_solitons=claimed_solitons,
        notes=list(data.get("notes", [])),
    )


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError([("$", f"invalid JSON: {exc}")], str(path)) from None
    return parse_manifest(data, str(path))


# -- serialization -------------------------------------------------------


def _coeff_map(v: FrameVectorField) -> dict[str, str]:
    return {str(i + 1): str(c) for i, c in enumerate(v.coeffs) if c}


def _matrix_lits(a: np.ndarray) -> list[list[str]]:
    return [[str(x) for x in row] for row in a]


def _affine_lits(a: AffineForm) -> dict[str, str]:
    return {"c0": str(a.c0), "c_alpha": str(a.c_alpha), "c_beta": str(a.c_beta)}


def manifest_to_data(m: Manifest) -> dict[str, Any]:
    """Canonical JSON-ready form: literals canonical, keys fixed, defaults dropped."""
    f = m.frame
    n = f.dim
    out: dict[str, Any] = {"name": m.name}
    if m.description:
        out["description"] = m.description
    out["dimension"] = n
    out["metric"] = "identity" if m.metric_is_identity else _matrix_lits(f.metric)
    if m.strict:
        out["strict"] = True
    brackets = []
    for i in range(n):
        for j in range(i + 1, n):
            coeffs = {str(k + 1): str(f.brackets[i, j, k]) for k in range(n) if f.brackets[i, j, k]}
            if coeffs:
                brackets.append({"i": i + 1, "j": j + 1, "coeffs": coeffs})
    out["brackets"] = brackets
    if m.split is not None:
        split: dict[str, Any] = {
            "vertical": [i + 1 for i in m.split.vertical],
            "horizontal": [i + 1 for i in m.split.horizontal],
        }
        if m.map_note:
            split["map_note"] = m.map_note
        out["split"] = split
    if m.fields:
        out["fields"] = {k: _coeff_map(v) for k, v in m.fields.items()}
    if m.runs:
        runs = []
        for r in m.runs:
            d: dict[str, Any] = {
                "label": r.label,
                "domain": r.domain.value,
                "potential": r.potential,
                "xi": r.xi,
            }
            if r.alpha is not None:
                d["alpha"] = str(r.alpha)
            if r.beta is not None:
                d["beta"] = str(r.beta)
            if r.claimed_tensors:
                d["claimed_tensors"] = True
            runs.append(d)
        out["soliton"] = runs
    claimed: dict[str, Any] = {}
    for domain, geo in m.claimed.items():
        block: dict[str, Any] = {}
        if geo.ricci is not None:
            block["ricci"] = _matrix_lits(geo.ricci)
        if geo.scalar is not None:
            block["scalar"] = str(geo.scalar)
        for key, arity in (("connection", 2), ("riemann", 3)):
            items = []
            for cv in getattr(geo, key):
                item: dict[str, Any] = {s: cv.slots[p] + 1 for p, s in enumerate("ijk"[:arity])}
                item["coeffs"] = _coeff_map(cv.vector)
                if cv.note:
                    item["note"] = cv.note
                items.append(item)
            if items:
                block[key] = items
        if geo.notes:
            block["notes"] = dict(geo.notes)
        claimed[domain.value] = block
    if m.claimed_solitons:
        sols = []
        for s in m.claimed_solitons:
            d = {"run": s.run}
            if s.lambda_affine is not None:
                d["lambda_affine"] = _affine_lits(s.lambda_affine)
            if s.mu_affine is not None:
                d["mu_affine"] = _affine_lits(s.mu_affine)
            if s.cases:
                cases = []
                for c in s.cases:
                    cd: dict[str, Any] = {"alpha": str(c.alpha), "beta": str(c.beta)}
                    if c.lam is not None:
                        cd["lambda"] = str(c.lam)
                    if c.mu is not None:
                        cd["mu"] = str(c.mu)
                    if c.classification is not None:
                        cd["classification"] = c.classification
                    if c.note:
                        cd["note"] = c.note
                    cases.append(cd)
                d["cases"] = cases
            if s.note:
                d["note"] = s.note
            sols.append(d)
        claimed["solitons"] = sols
    if claimed:
        out["claimed"] = claimed
    if m.notes:
        out["notes"] = list(m.notes)
    return out


def dump_manifest(m: Manifest) -> str:
    return json.dumps(manifest_to_data(m), indent=2, ensure_ascii=False) + "\n"


# -- bundled manifests ---------------------------------------------------


def bundled_names() -> tuple[str, ...]:
    return BUNDLED


def bundled_path(name: str) -> Path:
    stem = name[:-5] if name.endswith(".json") else name
    if stem not in BUNDLED:
        raise KeyError(f"no bundled manifest named {name!r}")
    return Path(str(resources.files("rysoliton") / "data" / f"{stem}.json"))


def resolve_manifest_path(arg: str) -> Path:
    """A filesystem path if it exists, else the bundled manifest of that name."""
    p = Path(arg)
    if p.exists():
        return p
    try:
        return bundled_path(p.name)
    except KeyError:
        return p
