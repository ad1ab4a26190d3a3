"""Prompt compilation and code generation.

The compiled prompt is a deterministic function of the state alone: one level
heading per non-empty level, one bullet per set slot, components as named
subsections. The exact byte form is frozen by golden files.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass

from .diffing import SemanticDiff, render_changelog
from .errors import EmptyDiff, EmptyState
from .gateway import GenerationRequest, ProviderGateway
from .model import (
    COMPONENT_ATTRS,
    FIXED_LEVELS,
    LEVEL_ATTRS,
    LEVEL_DISPLAY,
    AttributePath,
    Level,
    SemanticState,
    display_name,
    get_attribute,
    set_paths,
)

DEFAULT_CONSTRAINTS = (
    "Implement the screen as one self-contained React component. "
    "Style with Tailwind utility classes only; do not emit separate CSS files. "
    "Load any fonts from Google Fonts. "
    "The component must render standalone, without build-time configuration."
)

_REGEN_NOTE = (
    "This is a revision of an existing component. Apply only the changes "
    "listed in the semantic diff; keep the structure, layout, and content of "
    "all sections whose semantics did not change identical to the reference "
    "code."
)


@dataclass(frozen=True)
class PromptDoc:
    markdown: str
    state_version: int
    included_paths: tuple[AttributePath, ...]


@dataclass(frozen=True)
class GeneratedArtifact:
    code: str
    prompt: PromptDoc
    produced_from_version: int
    artifact_id: str


def compile_prompt(state: SemanticState, version: int) -> PromptDoc:
    """Compile ``state`` into the canonical markdown prompt."""
    included = tuple(set_paths(state))
    if not included:
        raise EmptyState("state has no set slots to generate from")

    blocks: list[str] = []
    for level in FIXED_LEVELS:
        bullets = []
        for attr in LEVEL_ATTRS[level]:
            value = get_attribute(state, AttributePath(level, attr))
            if value is not None:
                bullets.append(f"- {display_name(attr)}: {value.text}")
        if bullets:
            blocks.append(f"## {LEVEL_DISPLAY[level]}\n" + "\n".join(bullets))

    if state.components:
        subsections = []
        for i, comp in enumerate(state.components):
            lines = [f"### {comp.name}"]
            for attr in COMPONENT_ATTRS:
                value = comp.slot(attr)
                if value is not None:
                    lines.append(f"- {display_name(attr)}: {value.text}")
            subsections.append("\n".join(lines))
        blocks.append(
            f"## {LEVEL_DISPLAY[Level.COMPONENT]}\n\n" + "\n\n".join(subsections)
        )

    return PromptDoc("\n\n".join(blocks) + "\n", version, included)


def _prompt_document(
    prompt: PromptDoc, constraints_text: str | None, regenerating: bool
) -> str:
    parts = [prompt.markdown.rstrip("\n")]
    if constraints_text:
        parts.append("## Constraints\n" + constraints_text)
    if regenerating:
        parts.append("## Regeneration Instructions\n" + _REGEN_NOTE)
    return "\n\n".join(parts) + "\n"


def generate_initial(
    state: SemanticState,
    version: int,
    gateway: ProviderGateway,
    constraints_text: str | None = DEFAULT_CONSTRAINTS,
) -> GeneratedArtifact:
    """Generate a fresh component from the compiled prompt."""
    prompt = compile_prompt(state, version)
    code = gateway.generate_code(
        GenerationRequest(_prompt_document(prompt, constraints_text, False))
    )
    return GeneratedArtifact(code, prompt, version, uuid.uuid4().hex)


def regenerate_scoped(
    state: SemanticState,
    version: int,
    diff: SemanticDiff,
    previous: GeneratedArtifact,
    gateway: ProviderGateway,
    constraints_text: str | None = DEFAULT_CONSTRAINTS,
) -> GeneratedArtifact:
    """Regenerate with the previous code as the structural reference and the
    semantic diff as the change directive."""
    if diff.is_empty():
        raise EmptyDiff("nothing changed; scoped regeneration needs a non-empty diff")
    prompt = compile_prompt(state, version)
    request = GenerationRequest(
        prompt_document=_prompt_document(prompt, constraints_text, True),
        previous_code=previous.code,
        diff_summary="\n".join(render_changelog(diff)),
    )
    return GeneratedArtifact(gateway.generate_code(request), prompt, version, uuid.uuid4().hex)
