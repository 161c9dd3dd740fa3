"""File formats and deterministic serialization for toolkit artifacts.

One text-based structured format (JSON) for everything, with rationals as
strings so exactness survives serialization and diffs stay reviewable.
Machine output is emitted with sorted keys and fixed indentation, making
reports byte-identical across runs for a fixed seed.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .elements import FreeElement, Molecule, canonicalize
from .errors import ParseError
from .extremal import ExposednessVerdict, PerturbationWitness
from .functions import (
    LipFunction,
    PartialFunction,
    WeightFunction,
    lip_function,
    partial_function,
    weight_function,
)
from .metric import PointedMetricSpace, validate_space
from .norms import FaceReport, NormCertificate
from .rationals import as_fraction, format_fraction

SCHEMA_VERSION = "1"


def machine_dumps(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(str(exc), path) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}", path) from exc
    if not isinstance(data, dict):
        raise ParseError("expected a JSON object at the top level", path)
    return data


def _parse_rational(raw, path) -> Fraction:
    try:
        return as_fraction(raw)
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc), path) from exc


# ---------------------------------------------------------------------------
# spaces


def load_space(path) -> PointedMetricSpace:
    """Read and validate a space file: labels, base label, distance matrix."""
    data = _read_json(path)
    try:
        labels = [str(x) for x in data["labels"]]
        base_label = str(data["base"])
        matrix = data["dist"]
    except KeyError as exc:
        raise ParseError(f"missing field {exc}", path) from exc
    if base_label not in labels:
        raise ParseError(f"base label {base_label!r} not among the labels", path)
    if not isinstance(matrix, list):
        raise ParseError("dist must be a list of rows", path)
    rows = []
    for row in matrix:
        if not isinstance(row, list):
            raise ParseError("malformed matrix row", path)
        rows.append([_parse_rational(v, path) for v in row])
    return validate_space(rows, base=labels.index(base_label), labels=labels)


def space_payload(space: PointedMetricSpace) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "space",
        "labels": list(space.labels),
        "base": space.labels[space.base],
        "dist": [[format_fraction(v) for v in row] for row in space.dist],
    }


# ---------------------------------------------------------------------------
# elements


def load_element(path, space: PointedMetricSpace) -> FreeElement:
    """Read an element file: a mapping from point label to rational string."""
    data = _read_json(path)
    mapping = data.get("coefficients", data)
    if not isinstance(mapping, Mapping):
        raise ParseError("expected a label -> rational mapping", path)
    out = {}
    for label, raw in mapping.items():
        if label in ("schema_version", "kind"):
            continue
        out[str(label)] = _parse_rational(raw, path)
    return canonicalize(space, out)


def element_payload(mu: FreeElement) -> dict:
    labels = mu.space.labels
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "element",
        "coefficients": {labels[p]: format_fraction(a) for p, a in mu.items},
    }


# ---------------------------------------------------------------------------
# functions


def load_function(path, space: PointedMetricSpace):
    """Read a function file; `kind` selects lip0, weight or partial."""
    data = _read_json(path)
    kind = data.get("kind", "lip0")
    values = data.get("values")
    if not isinstance(values, Mapping):
        raise ParseError("expected a `values` mapping", path)
    parsed = {str(label): _parse_rational(v, path) for label, v in values.items()}
    try:
        if kind == "lip0":
            return lip_function(space, parsed)
        if kind == "weight":
            return weight_function(space, parsed)
        if kind == "partial":
            return partial_function(space, parsed)
    except ValueError as exc:
        raise ParseError(str(exc), path) from exc
    raise ParseError(f"unknown function kind {kind!r}", path)


def function_payload(f) -> dict:
    labels = f.space.labels
    if isinstance(f, LipFunction):
        kind = "lip0"
        values = {labels[p]: format_fraction(v) for p, v in enumerate(f.values)}
    elif isinstance(f, WeightFunction):
        kind = "weight"
        values = {labels[p]: format_fraction(v) for p, v in enumerate(f.values)}
    elif isinstance(f, PartialFunction):
        kind = "partial"
        values = {labels[p]: format_fraction(v) for p, v in f.items}
    else:
        raise TypeError(f"not a function value: {type(f).__name__}")
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "values": values}


# ---------------------------------------------------------------------------
# reports


def _molecule_payload(space: PointedMetricSpace, mol: Molecule) -> list[str]:
    return [space.labels[mol.p], space.labels[mol.q]]


def certificate_payload(space: PointedMetricSpace, cert: NormCertificate) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "norm_certificate",
        "value": format_fraction(cert.value),
        "dual_witness": function_payload(cert.dual_witness)["values"],
        "primal_witness": [
            _molecule_payload(space, mol) + [format_fraction(w)]
            for mol, w in cert.primal_witness
        ],
    }


def face_payload(space: PointedMetricSpace, face: FaceReport) -> dict:
    out = {
        "is_unique_normer": face.is_unique_normer,
        "face_dimension": face.face_dimension,
        "tight_molecules": [
            _molecule_payload(space, mol) for mol in face.tight_molecules
        ],
    }
    if face.sample_distinct_normer is not None:
        out["sample_distinct_normer"] = element_payload(face.sample_distinct_normer)[
            "coefficients"
        ]
    return out


def verdict_payload(space: PointedMetricSpace, verdict: ExposednessVerdict) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "kind": "molecule_classification",
        "molecule": _molecule_payload(space, verdict.molecule),
        "verdict": verdict.verdict,
        "segment_trivial": verdict.segment_trivial,
        "face": face_payload(space, verdict.face),
    }
    if verdict.exposing_function is not None:
        out["exposing_function"] = function_payload(verdict.exposing_function)["values"]
    if verdict.counterexample_decomposition is not None:
        u, w = verdict.counterexample_decomposition
        out["counterexample_decomposition"] = [
            element_payload(u)["coefficients"],
            element_payload(w)["coefficients"],
        ]
    return out


def witness_payload(space: PointedMetricSpace, witness: PerturbationWitness | None) -> dict:
    if witness is None:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "perturbation_witness",
            "present": False,
        }
    labels = space.labels
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "perturbation_witness",
        "present": True,
        "chosen_points": [labels[p] for p in witness.chosen_points],
        "cell": sorted(labels[p] for p in witness.K),
        "coefficients": [format_fraction(c) for c in witness.c],
        "optimal_partial_function": function_payload(witness.f_star)["values"],
        "weight": function_payload(witness.h)["values"],
        "perturbation": element_payload(witness.v)["coefficients"],
    }


def check_results_payload(results) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "check_suite_report",
        "all_passed": all(r.passed for r in results),
        "checks": [
            {
                "name": r.name,
                "passed": r.passed,
                "cases": r.cases,
                "failures": r.failures,
            }
            for r in results
        ],
    }
