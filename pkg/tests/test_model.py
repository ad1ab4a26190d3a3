"""Semantic model: slots, components, merging, canonical serialization."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from suif.errors import (
    DuplicateName,
    EmptyName,
    EmptyText,
    InvalidPath,
    MalformedDocument,
)
from suif.model import (
    COMPONENT_ATTRS,
    DESIGN_SYSTEM_ATTRS,
    FEATURE_ATTRS,
    FIXED_LEVELS,
    LEVEL_ATTRS,
    PRODUCT_ATTRS,
    AttributePath,
    AugmentedSemantics,
    ComponentFragment,
    Level,
    Provenance,
    add_component,
    all_paths,
    canonical_serialize,
    clear_attribute,
    deserialize,
    format_path,
    get_attribute,
    list_empty_attributes,
    merge_augmented,
    new_state,
    parse_dotted,
    set_attribute,
    set_paths,
)

from fixture_states import build_state, shuffled_orders, FIXTURES
from genstates import random_state

P_COLOR = AttributePath(Level.DESIGN_SYSTEM, "color")
P_GOAL = AttributePath(Level.PRODUCT, "goal")
P_TYPO = AttributePath(Level.DESIGN_SYSTEM, "typography")


class TestNewState:
    def test_all_slots_empty(self):
        state = new_state()
        assert len(list_empty_attributes(state)) == 12
        assert state.components == ()

    def test_empty_paths_cover_full_inventory(self):
        expected = [
            AttributePath(level, attr)
            for level in FIXED_LEVELS
            for attr in LEVEL_ATTRS[level]
        ]
        assert list_empty_attributes(new_state()) == expected
        assert len(PRODUCT_ATTRS) + len(DESIGN_SYSTEM_ATTRS) + len(FEATURE_ATTRS) == 12

    def test_serialize_round_trip(self):
        state = new_state()
        assert deserialize(canonical_serialize(state)) == state

    def test_empty_state_matches_golden(self, goldens_dir):
        golden = (goldens_dir / "states" / "empty_state.json").read_bytes()
        assert canonical_serialize(new_state()) == golden


class TestSetGetClear:
    def test_set_color_dark_mode(self):
        state = set_attribute(new_state(), P_COLOR, "Dark Mode", Provenance.USER, 3)
        value = get_attribute(state, P_COLOR)
        assert value.text == "Dark Mode"
        assert value.provenance is Provenance.USER
        assert value.version == 3

    def test_write_read_identity(self):
        state = set_attribute(new_state(), P_GOAL, "x", Provenance.PARSED, 0)
        assert get_attribute(state, P_GOAL) == get_attribute(state, P_GOAL)

    def test_set_does_not_mutate_input(self):
        state = new_state()
        before = canonical_serialize(state)
        set_attribute(state, P_COLOR, "Dark Mode", Provenance.USER, 0)
        assert canonical_serialize(state) == before

    def test_out_of_range_component_index(self):
        state, _ = add_component(new_state(), "Card")
        path = AttributePath(Level.COMPONENT, "type", 2)
        with pytest.raises(InvalidPath):
            set_attribute(state, path, "button", Provenance.USER, 0)

    def test_empty_text_rejected(self):
        with pytest.raises(EmptyText):
            set_attribute(new_state(), P_COLOR, "", Provenance.USER, 0)

    def test_get_fresh_state_absent(self):
        assert get_attribute(new_state(), P_GOAL) is None

    def test_get_after_set(self):
        text = "personalized and immersive audio experience"
        state = set_attribute(new_state(), P_GOAL, text, Provenance.USER, 0)
        assert get_attribute(state, P_GOAL).text == text

    def test_unknown_attribute_rejected(self):
        with pytest.raises(InvalidPath):
            AttributePath(Level.DESIGN_SYSTEM, "unknown_attr")

    def test_clear_after_set(self):
        state = set_attribute(new_state(), P_COLOR, "x", Provenance.USER, 0)
        assert get_attribute(clear_attribute(state, P_COLOR), P_COLOR) is None

    def test_clear_empty_is_noop(self):
        state = new_state()
        assert clear_attribute(state, P_COLOR) == state

    def test_clear_component_slot_on_empty_state(self):
        path = AttributePath(Level.COMPONENT, "content", 0)
        with pytest.raises(InvalidPath):
            clear_attribute(new_state(), path)


class TestComponents:
    def test_add_album_card(self):
        state, idx = add_component(new_state(), "Album Card")
        assert idx == 0
        assert len(state.components) == 1
        assert state.components[0].name == "Album Card"

    def test_duplicate_name(self):
        state, _ = add_component(new_state(), "Card")
        with pytest.raises(DuplicateName):
            add_component(state, "Card")

    def test_insertion_order(self):
        state, i0 = add_component(new_state(), "Search Bar")
        state, i1 = add_component(state, "Card")
        assert (i0, i1) == (0, 1)
        assert [c.name for c in state.components] == ["Search Bar", "Card"]

    def test_empty_name(self):
        with pytest.raises(EmptyName):
            add_component(new_state(), "")


class TestMergeAugmented:
    def test_user_value_retained_and_shadowed(self):
        state = set_attribute(new_state(), P_COLOR, "warm pastel tones", Provenance.USER, 1)
        augmented = AugmentedSemantics(entries={P_COLOR: "gradient backgrounds"})
        merged, shadows = merge_augmented(state, augmented, 2)
        assert get_attribute(merged, P_COLOR).text == "warm pastel tones"
        assert [(s.path, s.text) for s in shadows] == [(P_COLOR, "gradient backgrounds")]

    def test_empty_slot_filled_with_augmented_provenance(self):
        augmented = AugmentedSemantics(entries={P_TYPO: "bold typography"})
        merged, shadows = merge_augmented(new_state(), augmented, 2)
        value = get_attribute(merged, P_TYPO)
        assert value.text == "bold typography"
        assert value.provenance is Provenance.AUGMENTED
        assert shadows == []

    def test_merge_empty_is_identity(self):
        state = random_state(random.Random(7))
        merged, shadows = merge_augmented(state, AugmentedSemantics(), 2)
        assert merged == state and shadows == []

    def test_parsed_slot_overwritten(self):
        state = set_attribute(new_state(), P_TYPO, "serif", Provenance.PARSED, 1)
        merged, _ = merge_augmented(
            state, AugmentedSemantics(entries={P_TYPO: "sans-serif"}), 2
        )
        value = get_attribute(merged, P_TYPO)
        assert value.text == "sans-serif" and value.provenance is Provenance.AUGMENTED

    def test_new_component_fragment_appended_with_values(self):
        fragment = ComponentFragment(name="Card", content="lesson title")
        merged, _ = merge_augmented(
            new_state(), AugmentedSemantics(new_components=(fragment,)), 1
        )
        assert [c.name for c in merged.components] == ["Card"]
        value = merged.components[0].content
        assert value.text == "lesson title" and value.provenance is Provenance.AUGMENTED

    def test_fragment_retargets_existing_component(self):
        state, idx = add_component(new_state(), "Card")
        state = set_attribute(
            state, AttributePath(Level.COMPONENT, "content", idx), "mine", Provenance.USER, 1
        )
        fragment = ComponentFragment(name="Card", content="theirs", type="card")
        merged, shadows = merge_augmented(
            state, AugmentedSemantics(new_components=(fragment,)), 2
        )
        assert len(merged.components) == 1
        assert merged.components[0].content.text == "mine"  # user wins
        assert merged.components[0].type.text == "card"
        assert len(shadows) == 1

    def test_entry_index_remapped_after_dedup(self):
        # fragment "Card" dedupes onto index 0; an entry addressed at the
        # planned appended index must land on the existing component
        state, _ = add_component(new_state(), "Card")
        augmented = AugmentedSemantics(
            entries={AttributePath(Level.COMPONENT, "state", 1): "active"},
            new_components=(ComponentFragment(name="Card"),),
        )
        merged, _ = merge_augmented(state, augmented, 1)
        assert merged.components[0].state.text == "active"


class TestListEmpty:
    def test_with_one_component(self):
        state, _ = add_component(new_state(), "Card")
        assert len(list_empty_attributes(state)) == 17

    def test_only_description_set(self):
        state = set_attribute(
            new_state(),
            AttributePath(Level.PRODUCT, "description"),
            "x",
            Provenance.USER,
            0,
        )
        empty = list_empty_attributes(state)
        # oracle: enumerate the inventory minus the set slot
        expected = [
            AttributePath(level, attr)
            for level in FIXED_LEVELS
            for attr in LEVEL_ATTRS[level]
            if (level, attr) != (Level.PRODUCT, "description")
        ]
        assert empty == expected

    def test_partition_of_all_paths(self):
        rng = random.Random(13)
        for _ in range(25):
            state = random_state(rng)
            empty = list_empty_attributes(state)
            filled = set_paths(state)
            assert set(empty) | set(filled) == set(all_paths(state))
            assert set(empty) & set(filled) == set()


class TestCanonicalSerialization:
    def test_build_order_permutations_identical_bytes(self):
        for name, (components, slots) in FIXTURES.items():
            reference = canonical_serialize(build_state(components, slots))
            for order in shuffled_orders(len(slots), 10, seed=hash(name) % 10_000):
                assert canonical_serialize(build_state(components, slots, order)) == reference

    def test_round_trip_random_states(self):
        rng = random.Random(99)
        for _ in range(50):
            state = random_state(rng)
            assert deserialize(canonical_serialize(state)) == state

    def test_truncated_bytes(self):
        data = canonical_serialize(new_state())
        with pytest.raises(MalformedDocument):
            deserialize(data[: len(data) // 2])

    def test_unknown_attribute_rejected_on_load(self):
        bad = b'{"product": {"nope": {"text": "x", "provenance": "user", "version": 0}}, "design_system": {}, "feature": {}, "components": []}'
        with pytest.raises(MalformedDocument):
            deserialize(bad)

    def test_empty_text_rejected_on_load(self):
        bad = b'{"product": {"goal": {"text": "", "provenance": "user", "version": 0}}, "design_system": {}, "feature": {}, "components": []}'
        with pytest.raises(MalformedDocument):
            deserialize(bad)


class TestDottedPaths:
    def test_fixed_round_trip(self):
        state = new_state()
        for path in all_paths(state):
            assert parse_dotted(state, format_path(state, path)) == path

    def test_component_round_trip(self):
        state, _ = add_component(new_state(), "Album Card")
        path = AttributePath(Level.COMPONENT, "interactivity", 0)
        dotted = format_path(state, path)
        assert dotted == "component.Album Card.interactivity"
        assert parse_dotted(state, dotted) == path

    def test_unknown_component(self):
        with pytest.raises(InvalidPath):
            parse_dotted(new_state(), "component.Ghost.type")


# --- property tests ----------------------------------------------------------

_IDENTIFIER = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyz_", min_size=1, max_size=24
)


@settings(max_examples=60)
@given(level=st.sampled_from(list(Level)), attribute=_IDENTIFIER)
def test_inventory_closure(level, attribute):
    if attribute in LEVEL_ATTRS[level]:
        return  # in-inventory names are the legal ones
    with pytest.raises(InvalidPath):
        AttributePath(level, attribute, 0 if level is Level.COMPONENT else None)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_operations_never_mutate_inputs(seed):
    rng = random.Random(seed)
    state = random_state(rng)
    before = canonical_serialize(state)
    filled = set_paths(state)
    empty = list_empty_attributes(state)
    if filled:
        clear_attribute(state, rng.choice(filled))
    if empty:
        set_attribute(state, rng.choice(empty), "x", Provenance.USER, 1)
    merge_augmented(
        state, AugmentedSemantics(entries={P_TYPO: "serif"} if P_TYPO in empty else {}), 1
    )
    if all(c.name != "Probe" for c in state.components):
        add_component(state, "Probe")
    assert canonical_serialize(state) == before


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_merge_never_touches_user_slots(seed):
    rng = random.Random(seed)
    state = random_state(rng)
    augmented = AugmentedSemantics(
        entries={
            path: "proposal " + str(i)
            for i, path in enumerate(all_paths(state))
            if rng.random() < 0.4
        }
    )
    merged, _ = merge_augmented(state, augmented, 7)
    for path in set_paths(state):
        value = get_attribute(state, path)
        if value.provenance is Provenance.USER:
            assert get_attribute(merged, path) == value
