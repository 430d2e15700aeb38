"""The complex document format and the codecs around it.

Faces are keyed by their sorted vertex ids joined with "-" ("0-1-2").
Rationals travel as strings ("3/2") so nothing is lost to floating point.
"""

from __future__ import annotations

import hashlib
import json
import sys
from collections.abc import Mapping
from fractions import Fraction
from pathlib import Path
from typing import Any

import pydantic
import yaml

from ih_derham.topology.complex import Simplex, SimplicialComplex, face_order, from_facets, make_simplex
from ih_derham.topology.domain.data_types import (
    ComplexDocument,
    NotFoundError,
    ParseError,
    Scalar,
    ValidationError,
)
from ih_derham.topology.flatnorm import Chain, MassWeights
from ih_derham.topology.intersection import Stratification

YAML_SUFFIXES = {".yaml", ".yml"}


# ----- face keys and rationals -----
def face_key(s: Simplex) -> str:
    return "-".join(str(v) for v in s)


def parse_face_key(key: str) -> Simplex:
    try:
        vertices = [int(part) for part in key.split("-")]
    except ValueError:
        raise ValidationError(f"bad face key {key!r}: expected vertex ids joined by '-'") from None
    return make_simplex(vertices)


def format_rational(value: Fraction) -> str:
    return str(value)


def parse_rational(value: Scalar) -> Fraction:
    if isinstance(value, bool):
        raise ValidationError(f"not a rational number: {value!r}")
    try:
        return Fraction(str(value).strip()) if isinstance(value, float | str) else Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"not a rational number: {value!r}") from None


# ----- raw documents -----
def _decode(text: str, *, yaml_input: bool, source: str) -> Any:
    try:
        return yaml.safe_load(text) if yaml_input else json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ParseError(f"cannot parse {source}: {e}") from e


def _read_text(ref: str) -> tuple[str, bool]:
    if ref == "-":
        return sys.stdin.read(), False
    path = Path(ref)
    if not path.is_file():
        raise NotFoundError(f"no such file: {ref}")
    return path.read_text(encoding="utf-8"), path.suffix.lower() in YAML_SUFFIXES


def read_document(ref: str) -> ComplexDocument:
    """Path to a .json/.yaml/.yml document, or "-" for JSON on stdin."""
    text, yaml_input = _read_text(ref)
    raw = _decode(text, yaml_input=yaml_input, source=ref)
    return parse_document(raw, source=ref)


def parse_document(raw: Any, *, source: str = "<input>") -> ComplexDocument:
    try:
        return ComplexDocument.model_validate(raw)
    except pydantic.ValidationError as e:
        raise ParseError(f"{source} is not a complex document: {e.errors()[0]['msg']}") from e


def document_digest(doc: ComplexDocument) -> str:
    payload = json.dumps(doc.model_dump(mode="json", exclude_none=True), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


# ----- documents <-> library objects -----
def document_to_complex(doc: ComplexDocument) -> SimplicialComplex:
    return from_facets(doc.facets)


def complex_to_document(complex: SimplicialComplex) -> ComplexDocument:
    return ComplexDocument(facets=[list(f) for f in complex.facets])


def document_stratification(doc: ComplexDocument, complex: SimplicialComplex) -> Stratification | None:
    if doc.strata is None:
        return None
    return Stratification.from_generators(complex, doc.strata)


def document_weights(doc: ComplexDocument, complex: SimplicialComplex, digits: int = 12) -> MassWeights:
    """Explicit weights first, then Euclidean volumes from coordinates, then unit weights."""
    if doc.coordinates:
        coordinates = {}
        for key, point in doc.coordinates.items():
            try:
                vertex = int(key)
            except ValueError:
                raise ValidationError(f"bad vertex id in coordinates: {key!r}") from None
            coordinates[vertex] = [parse_rational(x) for x in point]
        base = MassWeights.from_coordinates(complex, coordinates, digits)
    else:
        base = MassWeights.unit()
    if not doc.weights:
        return base
    explicit = {parse_face_key(k): parse_rational(v) for k, v in doc.weights.items()}
    stray = [face_key(s) for s in explicit if s not in complex]
    if stray:
        raise ValidationError(f"weights given for faces not in the complex: {stray[:5]}")
    return base.merged(explicit)


# ----- chains -----
def chain_from_mapping(raw: Mapping[str | int, Scalar], complex: SimplicialComplex) -> Chain:
    if not raw:
        raise ValidationError("empty chain: its degree cannot be inferred")
    coefficients = {parse_face_key(str(k)): parse_rational(v) for k, v in raw.items()}
    stray = [face_key(s) for s in coefficients if s not in complex]
    if stray:
        raise ValidationError(f"chain faces not in the complex: {stray[:5]}")
    return Chain.build(complex, coefficients)


def parse_chain(text: str, complex: SimplicialComplex) -> Chain:
    """Inline JSON object, or a path to a JSON/YAML file holding one."""
    stripped = text.strip()
    if stripped.startswith("{"):
        raw = _decode(stripped, yaml_input=False, source="--chain")
    else:
        body, yaml_input = _read_text(stripped)
        raw = _decode(body, yaml_input=yaml_input, source=stripped)
    if not isinstance(raw, dict):
        raise ParseError("a chain must be an object mapping face keys to rationals")
    return chain_from_mapping(raw, complex)


def chain_to_json(chain: Chain) -> dict[str, str]:
    return {
        face_key(s): format_rational(c)
        for s, c in sorted(chain.coefficients.items(), key=lambda kv: face_order(kv[0]))
    }
