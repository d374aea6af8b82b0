"""JSON set descriptions and schedules.

Rationals are written as ``"p/q"`` strings so that documents round-trip
without loss::

    {"kind": "digit", "base": 3, "allowed": [[0, 2], [0, 2]]}
    {"kind": "finite", "points": [["0"], ["1/2"]]}
    {"kind": "harmonic", "n_max": 64}
    {"kind": "product", "left": {...}, "right": {...}}
    {"kind": "affine", "scale": "1/2", "offset": "0", "inner": {...}}

A digit set may also be given through a schedule,
``{"kind": "digit", "schedule": {"t": [...], "m": [...]}, "part": "A", "depth": 6}``,
and a uniform digit set as ``{"kind": "digit", "base": 3, "digits": [0, 2], "depth": 8}``.
"""
import json

import jsonschema

from .sets import (
    AffineImage,
    DigitSet,
    FinitePoints,
    HarmonicTail,
    Product,
    Schedule,
    schedule_to_digit_sets,
)
from .validation import as_fraction, format_fraction

_RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+|\.\d+)?\s*$"},
    ]
}

SCHEDULE_SCHEMA = {
    "type": "object",
    "required": ["t", "m"],
    "properties": {
        "t": {"type": "array", "items": _RATIONAL, "minItems": 1},
        "m": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2},
    },
    "additionalProperties": False,
}

SET_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$ref": "#/$defs/set",
    "$defs": {
        "rational": _RATIONAL,
        "digits": {
            "type": "array",
            "items": {"type": "integer", "minimum": 0},
            "minItems": 1,
        },
        "set": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["digit", "finite", "harmonic", "product", "affine"]}
            },
            "allOf": [
                {
                    "if": {"properties": {"kind": {"const": "finite"}}},
                    "then": {
                        "required": ["points"],
                        "properties": {
                            "points": {
                                "type": "array",
                                "items": {
                                    "type": "array",
                                    "items": {"$ref": "#/$defs/rational"},
                                    "minItems": 1,
                                    "maxItems": 2,
                                },
                            },
                            "dim": {"enum": [1, 2]},
                        },
                    },
                },
                {
                    "if": {"properties": {"kind": {"const": "harmonic"}}},
                    "then": {
                        "required": ["n_max"],
                        "properties": {"n_max": {"type": "integer", "minimum": 1}},
                    },
                },
                {
                    "if": {"properties": {"kind": {"const": "digit"}}},
                    "then": {
                        "oneOf": [
                            {
                                "required": ["base", "allowed"],
                                "properties": {
                                    "base": {"type": "integer", "minimum": 2},
                                    "allowed": {
                                        "oneOf": [
                                            {"type": "array", "items": {"$ref": "#/$defs/digits"}},
                                            {
                                                "type": "object",
                                                "patternProperties": {
                                                    r"^[1-9]\d*$": {"$ref": "#/$defs/digits"}
                                                },
                                                "additionalProperties": False,
                                            },
                                        ]
                                    },
                                },
                            },
                            {
                                "required": ["base", "digits", "depth"],
                                "properties": {
                                    "base": {"type": "integer", "minimum": 2},
                                    "digits": {"$ref": "#/$defs/digits"},
                                    "depth": {"type": "integer", "minimum": 0},
                                },
                            },
                            {
                                "required": ["schedule", "part", "depth"],
                                "properties": {
                                    "schedule": SCHEDULE_SCHEMA,
                                    "part": {"enum": ["A", "B"]},
                                    "depth": {"type": "integer", "minimum": 0},
                                },
                            },
                        ]
                    },
                },
                {
                    "if": {"properties": {"kind": {"const": "product"}}},
                    "then": {
                        "required": ["left", "right"],
                        "properties": {
                            "left": {"$ref": "#/$defs/set"},
                            "right": {"$ref": "#/$defs/set"},
                        },
                    },
                },
                {
                    "if": {"properties": {"kind": {"const": "affine"}}},
                    "then": {
                        "required": ["scale", "offset", "inner"],
                        "properties": {
                            "scale": {"$ref": "#/$defs/rational"},
                            "offset": {"$ref": "#/$defs/rational"},
                            "inner": {"$ref": "#/$defs/set"},
                        },
                    },
                },
            ],
        },
    },
}


class SchemaError(ValueError):
    """A document does not match the expected JSON layout."""


def _validate(doc, schema):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{path}: {exc.message}") from exc


def schedule_to_json(schedule):
    return {"t": [format_fraction(x) for x in schedule.t], "m": list(schedule.m)}


def schedule_from_json(doc):
    _validate(doc, SCHEDULE_SCHEMA)
    return Schedule(tuple(as_fraction(x) for x in doc["t"]), tuple(doc["m"]))


def model_to_json(model):
    if isinstance(model, HarmonicTail):
        return {"kind": "harmonic", "n_max": model.n_max}
    if isinstance(model, FinitePoints):
        return {
            "kind": "finite",
            "dim": model.dim,
            "points": [[format_fraction(c) for c in p] for p in model.points],
        }
    if isinstance(model, DigitSet):
        return {
            "kind": "digit",
            "base": model.base,
            "allowed": [sorted(d) for d in model.allowed],
        }
    if isinstance(model, Product):
        return {"kind": "product", "left": model_to_json(model.left), "right": model_to_json(model.right)}
    if isinstance(model, AffineImage):
        return {
            "kind": "affine",
            "scale": format_fraction(model.scale),
            "offset": format_fraction(model.offset),
            "inner": model_to_json(model.inner),
        }
    raise TypeError(f"cannot serialize {type(model).__name__}")


def _build(doc):
    kind = doc["kind"]
    if kind == "harmonic":
        return HarmonicTail(doc["n_max"])
    if kind == "finite":
        points = tuple(tuple(as_fraction(c) for c in p) for p in doc["points"])
        return FinitePoints(points, dim=doc.get("dim"))
    if kind == "digit":
        if "schedule" in doc:
            first, second = schedule_to_digit_sets(schedule_from_json(doc["schedule"]), doc["depth"])
            return first if doc["part"] == "A" else second
        if "digits" in doc:
            return DigitSet.uniform(doc["base"], doc["digits"], doc["depth"])
        allowed = doc["allowed"]
        if isinstance(allowed, dict):
            positions = sorted(int(r) for r in allowed)
            if positions != list(range(1, len(positions) + 1)):
                raise SchemaError("allowed positions must be exactly 1..depth")
            allowed = [allowed[str(r)] for r in positions]
        return DigitSet(doc["base"], tuple(allowed))
    if kind == "product":
        return Product(_build(doc["left"]), _build(doc["right"]))
    return AffineImage(as_fraction(doc["scale"]), as_fraction(doc["offset"]), _build(doc["inner"]))


def model_from_json(doc):
    """Build a set model from a parsed JSON document (validated first)."""
    _validate(doc, SET_SCHEMA)
    try:
        return _build(doc)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc)) from exc


def load_model(path):
    with open(path) as fh:
        return model_from_json(json.load(fh))


def dumps(doc):
    """Byte-stable JSON text."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
