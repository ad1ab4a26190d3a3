"""Free-form brief parsing: natural language in, structured semantics out."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import EmptyPrompt
from .gateway import ProviderGateway, StructuredRequest, Task
from .model import (
    COMPONENT_ATTRS,
    FIXED_LEVELS,
    LEVEL_ATTRS,
    AttributePath,
    ComponentFragment,
    Level,
    Provenance,
    SemanticState,
    _apply_semantics,
)

PARSE_SCHEMA_ID = "parse"

PARSE_INSTRUCTIONS = (
    "You turn a free-form product brief into structured UI design semantics. "
    "Fill only the fixed attribute slots, quoting or closely paraphrasing the "
    "brief; use the components list for any concrete UI elements it names. "
    "Put brief text you cannot place into residue instead of dropping it. "
    "Respond with JSON conforming to the provided schema."
)


@dataclass(frozen=True)
class ParsedSemantics:
    """The structured reading of one brief."""

    entries: Mapping[AttributePath, str] = field(default_factory=dict)
    new_components: tuple[ComponentFragment, ...] = ()
    unparsed_residue: str | None = None


def semantics_payload_parts(
    payload: dict,
) -> tuple[dict[AttributePath, str], tuple[ComponentFragment, ...]]:
    """Split a schema-validated semantics payload into fixed-level entries and
    component fragments (duplicate fragment names keep the first occurrence)."""
    entries: dict[AttributePath, str] = {}
    for level in FIXED_LEVELS:
        for attr, text in (payload.get(level.value) or {}).items():
            if attr in LEVEL_ATTRS[level] and text:
                entries[AttributePath(level, attr)] = text
    fragments: list[ComponentFragment] = []
    seen: set[str] = set()
    for comp in payload.get("components") or []:
        name = comp.get("name")
        if not name or name in seen:
            continue
        seen.add(name)
        fragments.append(
            ComponentFragment(
                name=name,
                **{a: comp.get(a) or None for a in COMPONENT_ATTRS},
            )
        )
    return entries, tuple(fragments)


def parse_prompt(text: str, gateway: ProviderGateway) -> ParsedSemantics:
    """Parse a brief through the gateway's parse task."""
    if not text or not text.strip():
        raise EmptyPrompt("cannot parse an empty brief")
    payload = gateway.complete_structured(
        StructuredRequest(
            task=Task.PARSE,
            system_instructions=PARSE_INSTRUCTIONS,
            user_payload=text,
            schema_id=PARSE_SCHEMA_ID,
        )
    )
    entries, fragments = semantics_payload_parts(payload)
    residue = payload.get("residue") or None
    return ParsedSemantics(entries, fragments, residue)


def apply_parsed(
    state: SemanticState, parsed: ParsedSemantics, version: int
) -> tuple[SemanticState, list[str]]:
    """Write parse results into ``state`` with provenance=parsed.

    User-entered and suggestion-accepted slots are preserved. Components whose
    names already exist are not duplicated; their values land on the existing
    component and the skipped names are returned.
    """
    out, _, skipped = _apply_semantics(
        state, parsed.entries, parsed.new_components, Provenance.PARSED, version
    )
    return out, skipped
