#!/usr/bin/env python3
"""Author the recorded-mode fixtures checked into fixtures/.

Recorded mode replays provider responses keyed by canonical request hash;
this script builds those requests exactly the way the engine does and writes
the pinned responses next to them. Rerun it after changing any instruction
text or the prompt template (hashes shift), then re-commit the outputs.
"""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "tests"))

from fixture_states import build_state, FIXTURES  # noqa: E402

from suif.diffing import compute_diff, render_changelog  # noqa: E402
from suif.gateway import (  # noqa: E402
    GenerationRequest,
    ProviderGateway,
    ProviderMode,
    StructuredRequest,
    Task,
    write_fixture,
)
from suif.generation import generate_initial, regenerate_scoped  # noqa: E402
from suif.analysis import ANALYZE_INSTRUCTIONS, ANALYZE_SCHEMA_ID  # noqa: E402
from suif.model import (  # noqa: E402
    AttributePath,
    Level,
    Provenance,
    canonical_json_bytes,
    format_path,
    list_empty_attributes,
    set_attribute,
    state_to_document,
)
from suif.parsing import PARSE_INSTRUCTIONS, PARSE_SCHEMA_ID  # noqa: E402
from suif.relations import RELATIONS_INSTRUCTIONS, RELATIONS_SCHEMA_ID  # noqa: E402

FIXTURE_DIR = REPO / "fixtures"
BRIEF_DIR = FIXTURE_DIR / "briefs"

LEARNING_APP_BRIEF = (
    "A mobile learning app for kids. It should feel playful and engaging, "
    "with bright, friendly colors. The home screen lets kids browse lessons "
    "and track their progress, with a card for each lesson.\n"
)

LEARNING_APP_PARSE_RESPONSE = {
    "product": {"description": "a mobile learning app for kids"},
    "design_system": {
        "design_style": "playful and engaging",
        "color": "bright, friendly colors",
    },
    "feature": {"function": "browse lessons and track progress"},
    "components": [{"name": "Card"}],
    "residue": "",
}

SHOPPING_RELATIONS_RESPONSE = {
    "edges": [
        {
            "from": "product.target_user",
            "to": "design_system.color",
            "kind": "match",
            "explanation": (
                "A high contrast palette keeps text and controls readable "
                "for the elderly target user."
            ),
        },
        {
            "from": "feature.content",
            "to": "design_system.design_style",
            "kind": "conflict",
            "explanation": (
                "Information-dense product listings work against a "
                "minimalist design style."
            ),
            "suggestion": "progressive disclosure of product details",
        },
        {
            "from": "product.target_user",
            "to": "design_system.typography",
            "kind": "needs_value",
            "explanation": (
                "Typography is unset; the elderly target user calls for "
                "legible type."
            ),
            "suggestion": "larger typography",
        },
        {
            "from": "product.target_user",
            "to": "feature.information_architecture",
            "kind": "needs_value",
            "explanation": (
                "No information architecture is set; keep navigation shallow "
                "for the elderly target user."
            ),
            "suggestion": "simplified navigation",
        },
        # deliberately invalid: needs_value targeting a slot that is set.
        # the engine must drop it with a warning, never surface it.
        {
            "from": "product.target_user",
            "to": "design_system.color",
            "kind": "needs_value",
            "explanation": "stale proposal against an already-set slot",
            "suggestion": "high contrast colors",
        },
    ]
}


def mock_capture_generation(request: GenerationRequest) -> str:
    """The recorded twin of a mock scenario: pin the deterministic template."""
    return ProviderGateway(ProviderMode.MOCK).generate_code(request)


class CapturingGateway(ProviderGateway):
    """Mock-mode gateway that also remembers each request it served."""

    def __init__(self):
        super().__init__(ProviderMode.MOCK)
        self.generation_requests: list[GenerationRequest] = []

    def generate_code(self, req: GenerationRequest) -> str:
        self.generation_requests.append(req)
        return super().generate_code(req)


def main() -> None:
    BRIEF_DIR.mkdir(parents=True, exist_ok=True)
    (BRIEF_DIR / "learning_app_brief.txt").write_text(LEARNING_APP_BRIEF)

    # 1. learning-app parse (brief text rstripped, matching the CLI reader)
    parse_req = StructuredRequest(
        task=Task.PARSE,
        system_instructions=PARSE_INSTRUCTIONS,
        user_payload=LEARNING_APP_BRIEF.rstrip(),
        schema_id=PARSE_SCHEMA_ID,
    )
    print("parse:", write_fixture(FIXTURE_DIR, parse_req, LEARNING_APP_PARSE_RESPONSE))

    # 2. habit-tracker initial generation
    habit = build_state(*FIXTURES["habit_tracker"])
    capture = CapturingGateway()
    artifact = generate_initial(habit, 1, capture)
    gen_req = capture.generation_requests[-1]
    print("generate:", write_fixture(FIXTURE_DIR, gen_req, artifact.code))

    # 3. shopping-app color-contrast regeneration (paired with the mock twin)
    shopping = build_state(*FIXTURES["shopping_app"])
    capture = CapturingGateway()
    previous = generate_initial(shopping, 1, capture)
    changed = set_attribute(
        shopping,
        AttributePath(Level.DESIGN_SYSTEM, "color"),
        "maximum contrast black on white",
        Provenance.USER,
        2,
    )
    diff = compute_diff(shopping, changed)
    regenerated = regenerate_scoped(changed, 2, diff, previous, capture)
    regen_req = capture.generation_requests[-1]
    assert regen_req.previous_code == previous.code
    assert regen_req.diff_summary == "\n".join(render_changelog(diff))
    print("regenerate:", write_fixture(FIXTURE_DIR, regen_req, regenerated.code))

    # 4. shopping-app relation analysis (includes one droppable bad edge)
    payload_doc = {
        "state": state_to_document(shopping),
        "empty_attributes": [
            format_path(shopping, p) for p in list_empty_attributes(shopping)
        ],
    }
    relations_req = StructuredRequest(
        task=Task.ANALYZE_RELATIONS,
        system_instructions=RELATIONS_INSTRUCTIONS,
        user_payload=canonical_json_bytes(payload_doc).decode("utf-8"),
        schema_id=RELATIONS_SCHEMA_ID,
    )
    print("relations:", write_fixture(FIXTURE_DIR, relations_req, SHOPPING_RELATIONS_RESPONSE))

    # 5. analysis of the habit-tracker artifact (code-only, no screenshot)
    analyze_req = StructuredRequest(
        task=Task.ANALYZE_ARTIFACT,
        system_instructions=ANALYZE_INSTRUCTIONS,
        user_payload=artifact.code,
        schema_id=ANALYZE_SCHEMA_ID,
    )
    analyze_response = {
        "design_system": {
            "design_style": "playful and engaging",
            "color": "warm pastel tones",
            "typography": "rounded sans-serif with large headings",
        },
        "feature": {
            "function": "track daily habits and streaks",
            "information_architecture": "single column of habit cards with a daily summary on top",
        },
        "product": {"description": "habit tracker app"},
        "components": [
            {
                "name": "Habit Card",
                "content": "habit name, current streak, completion state",
                "interactivity": "tap to mark complete",
                "state": "completed habits render dimmed",
            }
        ],
        "evidence": {
            "design_system.typography": "heading classes use a rounded display face",
            "feature.information_architecture": "cards are stacked in one scrollable column",
        },
    }
    print("analyze:", write_fixture(FIXTURE_DIR, analyze_req, analyze_response))


if __name__ == "__main__":
    main()
