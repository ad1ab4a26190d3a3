"""JSON schemas enforced on every structured model response.

The schemas mirror the canonical state layout and hard-restrict attribute
names to the fixed inventory, so invented attributes are rejected at the
gateway boundary rather than leaking into states.
"""

from __future__ import annotations

from .model import (
    COMPONENT_ATTRS,
    DESIGN_SYSTEM_ATTRS,
    FEATURE_ATTRS,
    PRODUCT_ATTRS,
)


def _level_object(attrs: tuple[str, ...]) -> dict:
    return {
        "type": "object",
        "properties": {a: {"type": "string", "minLength": 1} for a in attrs},
        "additionalProperties": False,
    }


_COMPONENT_ITEMS = {
    "type": "object",
    "properties": {
        "name": {"type": "string", "minLength": 1},
        **{a: {"type": "string", "minLength": 1} for a in COMPONENT_ATTRS},
    },
    "required": ["name"],
    "additionalProperties": False,
}

_SEMANTICS_PROPS = {
    "product": _level_object(PRODUCT_ATTRS),
    "design_system": _level_object(DESIGN_SYSTEM_ATTRS),
    "feature": _level_object(FEATURE_ATTRS),
    "components": {"type": "array", "items": _COMPONENT_ITEMS},
}

PARSE_SCHEMA = {
    "type": "object",
    "properties": {
        **_SEMANTICS_PROPS,
        "residue": {"type": "string"},
    },
    "additionalProperties": False,
}

ANALYZE_SCHEMA = {
    "type": "object",
    "properties": {
        **_SEMANTICS_PROPS,
        "evidence": {
            "type": "object",
            "additionalProperties": {"type": "string", "minLength": 1},
        },
    },
    "additionalProperties": False,
}

RELATIONS_SCHEMA = {
    "type": "object",
    "properties": {
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "from": {"type": "string", "minLength": 1},
                    "to": {"type": "string", "minLength": 1},
                    "kind": {"enum": ["match", "conflict", "needs_value"]},
                    "explanation": {"type": "string", "minLength": 1},
                    "suggestion": {"type": "string", "minLength": 1},
                },
                "required": ["from", "to", "kind", "explanation"],
                "additionalProperties": False,
            },
        }
    },
    "required": ["edges"],
    "additionalProperties": False,
}

DEFAULT_SCHEMAS = {
    "parse": PARSE_SCHEMA,
    "analyze": ANALYZE_SCHEMA,
    "relations": RELATIONS_SCHEMA,
}
