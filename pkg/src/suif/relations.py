"""Typed relation graph over semantic attributes.

Edges are directed: the source influences the target. Three kinds mirror the
analysis vocabulary — values that match well, values in conflict, and empty
slots that need a value (those carry a suggestion). Graphs are immutable
snapshots tagged with the state version they were computed against.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import (
    InvalidPath,
    NothingToAnalyze,
    SlotOccupied,
    SuggestionMissing,
)
from .gateway import ProviderGateway, StructuredRequest, Task
from .model import (
    AttributePath,
    Provenance,
    SemanticState,
    all_paths,
    canonical_json_bytes,
    format_path,
    get_attribute,
    list_empty_attributes,
    parse_dotted,
    set_attribute,
    state_to_document,
)

RELATIONS_SCHEMA_ID = "relations"

RELATIONS_INSTRUCTIONS = (
    "You analyze a UI design's semantic attributes and report pairwise "
    "relationships between them as directed edges (the source influences the "
    "target). Use kind 'match' when two set values reinforce each other, "
    "'conflict' when they contradict, and 'needs_value' when a set value "
    "implies something for an attribute that is still empty — in that case "
    "target the empty attribute and propose a concrete value in suggestion. "
    "Explain every edge in one sentence. Respond with JSON conforming to the "
    "provided schema."
)


class EdgeKind(str, Enum):
    MATCH = "match"
    CONFLICT = "conflict"
    NEEDS_VALUE = "needs_value"


@dataclass(frozen=True)
class RelationEdge:
    """One directed relation: ``source`` affects ``target``."""

    source: AttributePath
    target: AttributePath
    kind: EdgeKind
    explanation: str
    suggestion: str | None = None


@dataclass(frozen=True)
class RelationGraph:
    subject_version: int
    edges: tuple[RelationEdge, ...] = ()


@dataclass(frozen=True)
class Violation:
    """One broken edge rule, pointing at the offending edge."""

    edge_index: int
    rule: str
    message: str


def _path_in_state(state: SemanticState, path: AttributePath) -> bool:
    try:
        get_attribute(state, path)
    except InvalidPath:
        return False
    return True


def validate_graph(graph: RelationGraph, state: SemanticState) -> list[Violation]:
    """Enumerate every edge-rule violation of ``graph`` against ``state``."""
    violations: list[Violation] = []
    seen: set[tuple[AttributePath, AttributePath, EdgeKind]] = set()
    for i, edge in enumerate(graph.edges):
        dangling = False
        for path in (edge.source, edge.target):
            if not _path_in_state(state, path):
                violations.append(
                    Violation(i, "dangling_path", f"path {format_path(None, path)} not in state")
                )
                dangling = True
        if edge.source == edge.target:
            violations.append(Violation(i, "self_edge", "edge connects a path to itself"))
        triple = (edge.source, edge.target, edge.kind)
        if triple in seen:
            violations.append(Violation(i, "duplicate_triple", "duplicate (from, to, kind)"))
        seen.add(triple)
        if dangling:
            continue
        if edge.kind is EdgeKind.NEEDS_VALUE:
            if get_attribute(state, edge.target) is not None:
                violations.append(
                    Violation(i, "needs_value_filled", "needs_value edge targets a set slot")
                )
            if not edge.suggestion:
                violations.append(
                    Violation(i, "missing_suggestion", "needs_value edge has no suggestion")
                )
        else:
            for role, path in (("from", edge.source), ("to", edge.target)):
                if get_attribute(state, path) is None:
                    violations.append(
                        Violation(
                            i,
                            "empty_endpoint",
                            f"{edge.kind.value} edge touches empty slot ({role})",
                        )
                    )
            if edge.kind is EdgeKind.MATCH and edge.suggestion:
                violations.append(
                    Violation(i, "illegal_suggestion", "match edges cannot carry a suggestion")
                )
    return violations


def analyze_relations(
    state: SemanticState, version: int, gateway: ProviderGateway
) -> tuple[RelationGraph, list[str]]:
    """Build the relation graph for ``state`` via the gateway.

    Model-proposed edges that break the edge rules are dropped, each noted in
    the returned warning list; the returned graph always validates clean.
    """
    non_empty = len(all_paths(state)) - len(list_empty_attributes(state))
    empty = len(list_empty_attributes(state))
    if not (non_empty >= 2 or (non_empty >= 1 and empty >= 1)):
        raise NothingToAnalyze("need at least one set attribute to analyze")

    payload_doc = {
        "state": state_to_document(state),
        "empty_attributes": [format_path(state, p) for p in list_empty_attributes(state)],
    }
    payload = gateway.complete_structured(
        StructuredRequest(
            task=Task.ANALYZE_RELATIONS,
            system_instructions=RELATIONS_INSTRUCTIONS,
            user_payload=canonical_json_bytes(payload_doc).decode("utf-8"),
            schema_id=RELATIONS_SCHEMA_ID,
        )
    )

    warnings: list[str] = []
    edges: list[RelationEdge] = []
    for edge_doc in payload["edges"]:
        try:
            edges.append(
                RelationEdge(
                    source=parse_dotted(state, edge_doc["from"]),
                    target=parse_dotted(state, edge_doc["to"]),
                    kind=EdgeKind(edge_doc["kind"]),
                    explanation=edge_doc["explanation"],
                    suggestion=edge_doc.get("suggestion"),
                )
            )
        except InvalidPath as exc:
            warnings.append(f"dropped edge {edge_doc.get('from')} -> {edge_doc.get('to')}: {exc}")

    candidate = RelationGraph(version, tuple(edges))
    violations = validate_graph(candidate, state)
    for v in violations:
        warnings.append(f"dropped edge #{v.edge_index} ({v.rule}): {v.message}")
    bad = {v.edge_index for v in violations}
    kept = tuple(e for i, e in enumerate(edges) if i not in bad)
    graph = RelationGraph(version, kept)
    assert not validate_graph(graph, state)
    return graph, warnings


def affected_by(graph: RelationGraph, path: AttributePath) -> list[RelationEdge]:
    """Edges pointing at ``path``: the semantics that influenced it."""
    return [e for e in graph.edges if e.target == path]


def affects(graph: RelationGraph, path: AttributePath) -> list[RelationEdge]:
    """Edges leaving ``path``: the semantics it influences."""
    return [e for e in graph.edges if e.source == path]


def list_by_kind(graph: RelationGraph, kind: EdgeKind) -> list[RelationEdge]:
    return [e for e in graph.edges if e.kind is kind]


def accept_suggestion(
    state: SemanticState, edge: RelationEdge, version: int
) -> SemanticState:
    """Apply an edge's suggested value to its target slot."""
    if not edge.suggestion:
        raise SuggestionMissing("edge carries no suggestion to accept")
    if edge.kind is EdgeKind.NEEDS_VALUE and get_attribute(state, edge.target) is not None:
        raise SlotOccupied(
            f"slot {format_path(state, edge.target)} was filled since analysis; re-analyze"
        )
    return set_attribute(
        state, edge.target, edge.suggestion, Provenance.SUGGESTION_ACCEPTED, version
    )


# --- JSON document form ------------------------------------------------------

def edge_to_document(edge: RelationEdge, state: SemanticState) -> dict:
    doc = {
        "from": format_path(state, edge.source),
        "to": format_path(state, edge.target),
        "kind": edge.kind.value,
        "explanation": edge.explanation,
    }
    if edge.suggestion is not None:
        doc["suggestion"] = edge.suggestion
    return doc


def graph_to_document(graph: RelationGraph, state: SemanticState) -> dict:
    return {
        "subject_version": graph.subject_version,
        "edges": [edge_to_document(e, state) for e in graph.edges],
    }


def edge_from_document(doc: dict, state: SemanticState) -> RelationEdge:
    return RelationEdge(
        source=parse_dotted(state, doc["from"]),
        target=parse_dotted(state, doc["to"]),
        kind=EdgeKind(doc["kind"]),
        explanation=doc["explanation"],
        suggestion=doc.get("suggestion"),
    )


def graph_from_document(doc: dict, state: SemanticState) -> RelationGraph:
    edges = tuple(edge_from_document(e, state) for e in doc.get("edges", []))
    return RelationGraph(doc.get("subject_version", 0), edges)
