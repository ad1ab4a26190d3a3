"""Relation graph: analysis, validation, queries, suggestion acceptance."""

import random

import pytest

from suif.errors import NothingToAnalyze, SlotOccupied, SuggestionMissing
from suif.gateway import ProviderGateway, ProviderMode
from suif.model import (
    AttributePath,
    Level,
    Provenance,
    get_attribute,
    new_state,
    set_attribute,
)
from suif.relations import (
    EdgeKind,
    RelationEdge,
    RelationGraph,
    accept_suggestion,
    affected_by,
    affects,
    analyze_relations,
    graph_from_document,
    graph_to_document,
    list_by_kind,
    validate_graph,
)

from fixture_states import shopping_app_state
from genstates import random_state

P_TARGET = AttributePath(Level.PRODUCT, "target_user")
P_TYPO = AttributePath(Level.DESIGN_SYSTEM, "typography")
P_COLOR = AttributePath(Level.DESIGN_SYSTEM, "color")
P_STYLE = AttributePath(Level.DESIGN_SYSTEM, "design_style")
P_CONTENT = AttributePath(Level.FEATURE, "content")


def elderly_state():
    state = set_attribute(new_state(), P_TARGET, "elderly users", Provenance.USER, 1)
    return set_attribute(state, P_COLOR, "high contrast palette", Provenance.USER, 1)


def elderly_graph():
    return RelationGraph(
        subject_version=1,
        edges=(
            RelationEdge(
                P_TARGET,
                P_COLOR,
                EdgeKind.MATCH,
                "High contrast palette keeps content readable for elderly users.",
            ),
            RelationEdge(
                P_TARGET,
                P_TYPO,
                EdgeKind.NEEDS_VALUE,
                "Typography is unset; elderly users need legible type.",
                suggestion="larger typography",
            ),
        ),
    )


class TestValidateGraph:
    def test_well_formed_graph(self):
        assert validate_graph(elderly_graph(), elderly_state()) == []

    def test_needs_value_on_filled_slot(self):
        state = elderly_state()
        graph = RelationGraph(
            1,
            (
                RelationEdge(
                    P_TARGET, P_COLOR, EdgeKind.NEEDS_VALUE, "stale", suggestion="x"
                ),
            ),
        )
        violations = validate_graph(graph, state)
        assert [v.rule for v in violations] == ["needs_value_filled"]
        assert violations[0].edge_index == 0

    def test_all_rules_detected(self):
        state = elderly_state()
        match = RelationEdge(P_TARGET, P_COLOR, EdgeKind.MATCH, "ok")
        edges = (
            match,
            match,  # duplicate triple
            RelationEdge(P_TARGET, P_TARGET, EdgeKind.MATCH, "self"),  # self edge
            RelationEdge(
                P_TARGET, AttributePath(Level.COMPONENT, "type", 5), EdgeKind.MATCH, "dangling"
            ),
            RelationEdge(P_TARGET, P_TYPO, EdgeKind.NEEDS_VALUE, "no suggestion"),
            RelationEdge(P_TARGET, P_TYPO, EdgeKind.CONFLICT, "empty endpoint"),
            RelationEdge(P_TARGET, P_COLOR, EdgeKind.MATCH, "extra", suggestion="nope"),
        )
        rules = {(v.edge_index, v.rule) for v in validate_graph(RelationGraph(1, edges), state)}
        assert (1, "duplicate_triple") in rules
        assert (2, "self_edge") in rules
        assert (3, "dangling_path") in rules
        assert (4, "missing_suggestion") in rules
        assert (5, "empty_endpoint") in rules
        assert (6, "illegal_suggestion") in rules

    def test_randomly_corrupted_graphs_match_rule_oracle(self):
        rng = random.Random(83)
        for _ in range(50):
            state, graph = random_graph(rng)
            expected = oracle_violations(graph, state)
            actual = {(v.edge_index, v.rule) for v in validate_graph(graph, state)}
            assert actual == expected


def random_graph(rng: random.Random):
    """A random state plus a graph with random (frequently invalid) edges."""
    state = random_state(rng)
    from suif.model import all_paths

    paths = list(all_paths(state))
    # sprinkle in paths that are structurally fine but dangle (bad indices)
    dangling = [
        AttributePath(Level.COMPONENT, "type", len(state.components) + 2),
        AttributePath(Level.COMPONENT, "content", len(state.components) + 5),
    ]
    pool = paths + dangling
    edges = []
    for _ in range(rng.randint(0, 10)):
        edges.append(
            RelationEdge(
                source=rng.choice(pool),
                target=rng.choice(pool),
                kind=rng.choice(list(EdgeKind)),
                explanation="generated",
                suggestion=rng.choice([None, "a suggestion"]),
            )
        )
    return state, RelationGraph(rng.randint(0, 5), tuple(edges))


def oracle_violations(graph: RelationGraph, state) -> set:
    """Independent per-edge rule check."""
    from suif.errors import InvalidPath

    def exists(path):
        try:
            get_attribute(state, path)
            return True
        except InvalidPath:
            return False

    expected = set()
    seen = set()
    for i, edge in enumerate(graph.edges):
        ok = True
        for path in (edge.source, edge.target):
            if not exists(path):
                expected.add((i, "dangling_path"))
                ok = False
        if edge.source == edge.target:
            expected.add((i, "self_edge"))
        triple = (edge.source, edge.target, edge.kind)
        if triple in seen:
            expected.add((i, "duplicate_triple"))
        seen.add(triple)
        if not ok:
            continue
        if edge.kind is EdgeKind.NEEDS_VALUE:
            if get_attribute(state, edge.target) is not None:
                expected.add((i, "needs_value_filled"))
            if not edge.suggestion:
                expected.add((i, "missing_suggestion"))
        else:
            if get_attribute(state, edge.source) is None:
                expected.add((i, "empty_endpoint"))
            if get_attribute(state, edge.target) is None:
                expected.add((i, "empty_endpoint"))
            if edge.kind is EdgeKind.MATCH and edge.suggestion:
                expected.add((i, "illegal_suggestion"))
    return expected


class TestAnalyzeRelations:
    def test_mock_mode_empty_graph(self):
        graph, warnings = analyze_relations(
            elderly_state(), 3, ProviderGateway(ProviderMode.MOCK)
        )
        assert graph.edges == () and graph.subject_version == 3
        assert warnings == []

    def test_nothing_to_analyze(self):
        with pytest.raises(NothingToAnalyze):
            analyze_relations(new_state(), 0, ProviderGateway(ProviderMode.MOCK))

    def test_recorded_shopping_graph(self, fixtures_dir):
        state = shopping_app_state()
        recorded = ProviderGateway(ProviderMode.RECORDED, fixture_dir=fixtures_dir)
        graph, warnings = analyze_relations(state, 2, recorded)
        assert validate_graph(graph, state) == []
        kinds = {e.kind for e in graph.edges}
        assert kinds == {EdgeKind.MATCH, EdgeKind.CONFLICT, EdgeKind.NEEDS_VALUE}
        # the deliberately bad edge (needs_value on a set slot) was dropped
        assert len(graph.edges) == 4
        assert len(warnings) == 1 and "needs_value_filled" in warnings[0]
        needs = list_by_kind(graph, EdgeKind.NEEDS_VALUE)
        assert {e.suggestion for e in needs} == {"larger typography", "simplified navigation"}
        conflict = list_by_kind(graph, EdgeKind.CONFLICT)[0]
        assert conflict.source == P_CONTENT and conflict.target == P_STYLE


class TestQueries:
    def test_affected_by_color_in_elderly_fixture(self):
        graph = elderly_graph()
        incoming = affected_by(graph, P_COLOR)
        assert len(incoming) == 1
        edge = incoming[0]
        assert edge.source == P_TARGET
        assert "readab" in edge.explanation  # readable/readability

    def test_isolated_node(self):
        graph = elderly_graph()
        path = AttributePath(Level.FEATURE, "function")
        assert affected_by(graph, path) == [] and affects(graph, path) == []

    def test_affects_partition(self):
        rng = random.Random(89)
        for _ in range(30):
            state, graph = random_graph(rng)
            from suif.model import all_paths

            nodes = set()
            for e in graph.edges:
                nodes.add(e.source)
                nodes.add(e.target)
            collected = []
            for node in nodes:
                collected.extend(affects(graph, node))
            assert sorted(map(id, collected)) == sorted(id(e) for e in graph.edges)

    def test_kind_filters_partition_edges(self):
        rng = random.Random(97)
        for _ in range(30):
            _, graph = random_graph(rng)
            combined = (
                list_by_kind(graph, EdgeKind.MATCH)
                + list_by_kind(graph, EdgeKind.CONFLICT)
                + list_by_kind(graph, EdgeKind.NEEDS_VALUE)
            )
            assert sorted(map(id, combined)) == sorted(id(e) for e in graph.edges)


class TestAcceptSuggestion:
    def test_accept_needs_value(self):
        state = elderly_state()
        edge = elderly_graph().edges[1]
        accepted = accept_suggestion(state, edge, 5)
        value = get_attribute(accepted, P_TYPO)
        assert value.text == "larger typography"
        assert value.provenance is Provenance.SUGGESTION_ACCEPTED
        assert value.version == 5

    def test_accept_without_suggestion(self):
        state = elderly_state()
        edge = elderly_graph().edges[0]
        with pytest.raises(SuggestionMissing):
            accept_suggestion(state, edge, 5)

    def test_stale_needs_value(self):
        state = elderly_state()
        edge = elderly_graph().edges[1]
        filled = set_attribute(state, P_TYPO, "already chosen", Provenance.USER, 4)
        with pytest.raises(SlotOccupied):
            accept_suggestion(filled, edge, 5)

    def test_only_target_slot_changes(self):
        state = elderly_state()
        edge = elderly_graph().edges[1]
        accepted = accept_suggestion(state, edge, 5)
        for path in (P_TARGET, P_COLOR):
            assert get_attribute(accepted, path) == get_attribute(state, path)

    def test_conflict_suggestion_replaces_value(self):
        state = elderly_state()
        edge = RelationEdge(
            P_TARGET, P_COLOR, EdgeKind.CONFLICT, "clashes", suggestion="muted contrast"
        )
        accepted = accept_suggestion(state, edge, 6)
        assert get_attribute(accepted, P_COLOR).text == "muted contrast"


class TestGraphDocuments:
    def test_round_trip(self):
        state = elderly_state()
        graph = elderly_graph()
        doc = graph_to_document(graph, state)
        assert doc["edges"][0]["from"] == "product.target_user"
        assert graph_from_document(doc, state) == graph
