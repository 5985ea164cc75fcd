"""JSON Hamiltonian artifacts: canonical term list plus provenance."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .factoring import EquationSystem, load_system, system_to_hamiltonian
from .pbpoly import BinaryPolynomial, natural_key

FORMAT = "elmkit.hamiltonian/1"


class ArtifactError(ValueError):
    pass


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def hamiltonian_document(poly: BinaryPolynomial, variables, provenance: dict, **extra) -> dict:
    names = sorted(set(variables) | set(poly.variables()), key=natural_key)
    doc = {
        "format": FORMAT,
        "variables": names,
        "terms": [{"monomial": list(m), "coef": c} for m, c in poly.items()],
        "provenance": provenance,
    }
    doc.update(extra)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def read_hamiltonian(path: str | Path) -> tuple[BinaryPolynomial, tuple[str, ...], dict]:
    """Load ``(polynomial, variables, document)`` from an artifact.

    ``.eqs`` equation files are accepted too and give the unit-weight
    Hamiltonian over the system's variables.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".eqs":
        system: EquationSystem = load_system(path)
        poly = system_to_hamiltonian(system)
        doc = hamiltonian_document(poly, system.variables, {
            "source": path.name,
            "source_sha256": sha256_text(text),
            "transforms": [{"op": "system_to_hamiltonian", "weights": [1] * len(system)}],
        })
        return poly, tuple(doc["variables"]), doc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"{path}: not JSON ({exc})") from exc
    if doc.get("format") != FORMAT:
        raise ArtifactError(f"{path}: expected format {FORMAT!r}, got {doc.get('format')!r}")
    try:
        poly = BinaryPolynomial((tuple(t["monomial"]), int(t["coef"])) for t in doc["terms"])
        variables = tuple(doc["variables"])
    except (KeyError, TypeError) as exc:
        raise ArtifactError(f"{path}: malformed artifact ({exc})") from exc
    missing = set(poly.variables()) - set(variables)
    if missing:
        raise ArtifactError(f"{path}: terms use undeclared variables {sorted(missing)}")
    return poly, variables, doc
