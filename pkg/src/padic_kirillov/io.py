"""Newform ingestion, CSV dumps and JSON reports."""

from __future__ import annotations

import csv
import json
from importlib import resources
from math import gcd
from pathlib import Path

from jsonschema import Draft7Validator

from .errors import SchemaError
from .profinite import KirillovFn
from .qexp import NewformData, QExpansion

NEWFORM_SCHEMA = {
    "type": "object",
    "required": ["level", "weight", "coeffs"],
    "properties": {
        "level": {"type": "integer", "minimum": 1},
        "weight": {"type": "integer", "minimum": 1},
        "eigenform": {"type": "boolean"},
        "nebentypus": {
            "type": "object",
            "required": ["modulus", "values"],
            "properties": {
                "modulus": {"type": "integer", "minimum": 1},
                "values": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "minItems": 2,
                        "maxItems": 2,
                        "items": {"type": ["integer", "string"]},
                    },
                },
            },
        },
        "coeffs": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "string", "pattern": "^-?[0-9]+$"},
        },
        "metadata": {"type": "object"},
    },
}

BUILTIN = {"delta": "delta_1000.json", "cm_32a": "cm_32a.json"}


def _field_path(err) -> str:
    return "/".join(str(x) for x in err.absolute_path) or "<root>"


def parse_newform(doc: dict, strict: bool = False, spot_checks: int = 200) -> NewformData:
    """Validate a newform document and build :class:`NewformData`.

    Schema violations raise :class:`SchemaError` naming the field.  A
    missing nebentypus defaults to the trivial character with a warning.
    Coprime multiplicativity is spot-checked; failures are warnings, or
    errors under ``strict``.
    """
    errors = sorted(Draft7Validator(NEWFORM_SCHEMA).iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise SchemaError(f"schema violation at {_field_path(e)}: {e.message}")
    notes = []
    coeffs = tuple(int(c) for c in doc["coeffs"])
    eigen = doc.get("eigenform", True)
    if eigen and coeffs[0] != 1:
        raise SchemaError(f"coeffs/0: eigenform must have a_1 = 1, got {coeffs[0]}")
    neb = doc.get("nebentypus")
    if neb is None:
        notes.append("nebentypus missing; using the trivial character")
        modulus, values = 1, {}
    else:
        modulus = neb["modulus"]
        values = {int(u) % modulus: int(v) for u, v in neb["values"]}
    if eigen:
        bad = _multiplicativity_failures(coeffs, spot_checks)
        if bad:
            msg = "multiplicativity fails for " + ", ".join(f"(m={m}, n={n})" for m, n in bad[:5])
            if strict:
                raise SchemaError(msg)
            notes.append(msg)
    return NewformData(
        level=doc["level"],
        weight=doc["weight"],
        coeffs=coeffs,
        nebentypus_modulus=modulus,
        nebentypus=values,
        eigenform=eigen,
        metadata=dict(doc.get("metadata", {})),
        warnings=tuple(notes),
    )


def _multiplicativity_failures(coeffs, limit):
    N = len(coeffs)
    bad, checked = [], 0
    for m in range(2, N + 1):
        if m * (m + 1) > N:
            break
        for n in range(m + 1, N // m + 1):
            if gcd(m, n) != 1:
                continue
            checked += 1
            if coeffs[m * n - 1] != coeffs[m - 1] * coeffs[n - 1]:
                bad.append((m, n))
            if checked >= limit:
                return bad
    return bad


def load_newform(path, strict: bool = False) -> NewformData:
    """Load a newform from a JSON file, or a bundled one by name (``delta``, ``cm_32a``)."""
    if str(path) in BUILTIN:
        text = resources.files("padic_kirillov").joinpath("data").joinpath(BUILTIN[str(path)]).read_text()
    else:
        text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    return parse_newform(doc, strict=strict)


def newform_to_doc(f: NewformData) -> dict:
    return {
        "level": f.level,
        "weight": f.weight,
        "nebentypus": {
            "modulus": f.nebentypus_modulus,
            "values": [[u, v] for u, v in sorted(f.nebentypus.items())],
        },
        "eigenform": f.eigenform,
        "metadata": f.metadata,
        "coeffs": [str(a) for a in f.coeffs],
    }


def _centered(x: int, q: int) -> int:
    x %= q
    return x - q if x > q // 2 else x


def dump_qexp_csv(f: QExpansion, path) -> None:
    """Rows ``n, a_n`` with ``a_n`` as the centred residue mod p^k."""
    if f.ring is not None:
        raise ValueError("CSV dumps are for plain q-expansions")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "a_n"])
        for n, a in enumerate(f.tolist(), start=1):
            w.writerow([n, _centered(a, f.modulus)])


KIR_HEADER = ["kind", "v", "u", "value", "conductor", "unit_values", "value_at_p", "a", "b", "coefficient"]


def dump_kirillov_csv(g: KirillovFn | None, path) -> None:
    """Explicit shells as ``shell`` rows, then the tail as ``tail`` rows."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(KIR_HEADER)
        if g is None:
            return
        for v, fn in g.shells:
            for u, val in fn.items():
                w.writerow(["shell", v, u, val, "", "", "", "", "", ""])
        for t in g.tail:
            w.writerow([
                "tail", "", "", "", t.chi.m, " ".join(str(x) for x in t.chi.table),
                t.chi.value_at_p, t.a, t.b, t.coefficient,
            ])


def write_json(report: dict, path=None) -> str:
    """Serialise with insertion order kept; writes to ``path`` when given."""
    text = json.dumps(report, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
