"""Augmented-semantics extraction from generated artifacts."""

from __future__ import annotations

from .errors import EmptyArtifact
from .gateway import Attachment, ProviderGateway, StructuredRequest, Task
from .generation import GeneratedArtifact
from .model import (
    AttributePath,
    AugmentedSemantics,
    SemanticState,
    all_paths,
    get_attribute,
)
from .parsing import semantics_payload_parts

ANALYZE_SCHEMA_ID = "analyze"

ANALYZE_INSTRUCTIONS = (
    "You inspect generated UI component code (and a rendered screenshot when "
    "one is attached) and report the design semantics it actually implements: "
    "style, color, typography, structure, content, and per-component details. "
    "Include decisions the code embodies even if they were never requested. "
    "For each value you may add a short justification under evidence, keyed by "
    "the dotted attribute path. Respond with JSON conforming to the provided "
    "schema."
)


def extract_semantics(
    artifact: GeneratedArtifact,
    screenshot: bytes | None,
    gateway: ProviderGateway,
    screenshot_media_type: str = "image/png",
) -> tuple[AugmentedSemantics, dict[str, str]]:
    """Extract implemented semantics from an artifact.

    Returns the augmented semantics plus the per-path evidence map. Component
    data always comes back as named fragments; merge_augmented retargets names
    that already exist in the receiving state.
    """
    if not artifact.code:
        raise EmptyArtifact("artifact has no code to analyze")
    attachments = (
        (Attachment(screenshot_media_type, screenshot),) if screenshot else ()
    )
    payload = gateway.complete_structured(
        StructuredRequest(
            task=Task.ANALYZE_ARTIFACT,
            system_instructions=ANALYZE_INSTRUCTIONS,
            user_payload=artifact.code,
            schema_id=ANALYZE_SCHEMA_ID,
            attachments=attachments,
        )
    )
    entries, fragments = semantics_payload_parts(payload)
    evidence = dict(payload.get("evidence") or {})
    return AugmentedSemantics(entries, fragments), evidence


def newly_inferred(
    augmented: AugmentedSemantics, state: SemanticState
) -> list[AttributePath]:
    """Augmented entry paths whose slots are empty in ``state`` — the targets
    for new-inference highlighting — in canonical order."""
    valid = set(all_paths(state))
    hits = {
        path
        for path in augmented.entries
        if path in valid and get_attribute(state, path) is None
    }
    return [p for p in all_paths(state) if p in hits]
