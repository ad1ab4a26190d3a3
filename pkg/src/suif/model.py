"""Canonical four-level semantic state and the pure operations over it.

The state is the single source of intent for a session: three fixed attribute
levels (product, design system, feature) plus an ordered list of named
components. All operations are pure: they never mutate their input state and
return a fresh one instead, so states are safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping

from .errors import DuplicateName, EmptyName, EmptyText, InvalidPath, MalformedDocument


class Level(str, Enum):
    PRODUCT = "product"
    DESIGN_SYSTEM = "design_system"
    FEATURE = "feature"
    COMPONENT = "component"


class Provenance(str, Enum):
    USER = "user"
    PARSED = "parsed"
    AUGMENTED = "augmented"
    SUGGESTION_ACCEPTED = "suggestion_accepted"


# Fixed attribute inventory. Only the components list is dynamic; attribute
# names outside these sets are rejected everywhere.
PRODUCT_ATTRS = ("description", "target_user", "goal")
DESIGN_SYSTEM_ATTRS = (
    "design_style",
    "color",
    "typography",
    "visual_properties",
    "visual_mood",
    "tone_of_voice",
)
FEATURE_ATTRS = ("function", "content", "information_architecture")
COMPONENT_ATTRS = ("type", "interactivity", "state", "content", "properties")

LEVEL_ATTRS: dict[Level, tuple[str, ...]] = {
    Level.PRODUCT: PRODUCT_ATTRS,
    Level.DESIGN_SYSTEM: DESIGN_SYSTEM_ATTRS,
    Level.FEATURE: FEATURE_ATTRS,
    Level.COMPONENT: COMPONENT_ATTRS,
}

FIXED_LEVELS = (Level.PRODUCT, Level.DESIGN_SYSTEM, Level.FEATURE)

LEVEL_DISPLAY = {
    Level.PRODUCT: "Product",
    Level.DESIGN_SYSTEM: "Design System",
    Level.FEATURE: "Feature",
    Level.COMPONENT: "Component",
}

_ATTR_DISPLAY = {
    "description": "Description",
    "target_user": "Target User",
    "goal": "Goal",
    "design_style": "Design Style",
    "color": "Color",
    "typography": "Typography",
    "visual_properties": "Visual Properties",
    "visual_mood": "Visual Mood",
    "tone_of_voice": "Tone of Voice",
    "function": "Function",
    "content": "Content",
    "information_architecture": "Information Architecture",
    "type": "Type",
    "interactivity": "Interactivity",
    "state": "State",
    "properties": "Properties",
}


def display_name(attribute: str) -> str:
    return _ATTR_DISPLAY[attribute]


@dataclass(frozen=True)
class AttributePath:
    """Address of one semantic slot: a level, an attribute, and for the
    component level the index of the component being addressed."""

    level: Level
    attribute: str
    component_index: int | None = None

    def __post_init__(self):
        if self.attribute not in LEVEL_ATTRS[self.level]:
            raise InvalidPath(
                f"unknown attribute {self.attribute!r} for level {self.level.value!r}"
            )
        if self.level is Level.COMPONENT:
            if self.component_index is None or self.component_index < 0:
                raise InvalidPath("component paths require a non-negative component_index")
        elif self.component_index is not None:
            raise InvalidPath(f"{self.level.value} paths must not carry a component_index")


@dataclass(frozen=True)
class AttributeValue:
    """One slot's text plus where it came from and when it was set.

    Absence of a value means "unspecified"; the empty string is never a value.
    Provenance is immutable: overwriting a slot creates a new AttributeValue.
    """

    text: str
    provenance: Provenance
    version: int

    def __post_init__(self):
        if not self.text:
            raise EmptyText("attribute value text must be non-empty")
        if self.version < 0:
            raise InvalidPath("value version must be non-negative")


@dataclass(frozen=True)
class ComponentSpec:
    """A named component and its five optional attribute slots."""

    name: str
    type: AttributeValue | None = None
    interactivity: AttributeValue | None = None
    state: AttributeValue | None = None
    content: AttributeValue | None = None
    properties: AttributeValue | None = None

    def __post_init__(self):
        if not self.name:
            raise EmptyName("component name must be non-empty")

    def slot(self, attribute: str) -> AttributeValue | None:
        if attribute not in COMPONENT_ATTRS:
            raise InvalidPath(f"unknown component attribute {attribute!r}")
        return getattr(self, attribute)


@dataclass(frozen=True)
class ComponentFragment:
    """A partially specified component proposal: a name plus raw slot texts.

    Fragments carry plain text because provenance and version are assigned at
    merge/apply time, not by the producer.
    """

    name: str
    type: str | None = None
    interactivity: str | None = None
    state: str | None = None
    content: str | None = None
    properties: str | None = None

    def __post_init__(self):
        if not self.name:
            raise EmptyName("component fragment name must be non-empty")
        for attr in COMPONENT_ATTRS:
            value = getattr(self, attr)
            if value is not None and not value:
                raise EmptyText(f"fragment slot {attr!r} must be non-empty when present")

    def slot_texts(self) -> list[tuple[str, str]]:
        return [(a, getattr(self, a)) for a in COMPONENT_ATTRS if getattr(self, a)]


@dataclass(frozen=True)
class SemanticState:
    """The four-level intent record. Slot maps hold only set slots."""

    product: Mapping[str, AttributeValue] = field(default_factory=dict)
    design_system: Mapping[str, AttributeValue] = field(default_factory=dict)
    feature: Mapping[str, AttributeValue] = field(default_factory=dict)
    components: tuple[ComponentSpec, ...] = ()


@dataclass(frozen=True)
class AugmentedSemantics:
    """Semantics extracted from a generated artifact, ready for merging."""

    entries: Mapping[AttributePath, str] = field(default_factory=dict)
    new_components: tuple[ComponentFragment, ...] = ()

    def __post_init__(self):
        for path, text in self.entries.items():
            if not text:
                raise EmptyText(f"augmented value for {path} must be non-empty")


@dataclass(frozen=True)
class ShadowProposal:
    """A proposal that lost a precedence collision against user intent."""

    path: AttributePath
    text: str


def new_state() -> SemanticState:
    return SemanticState()


def _slot_map(state: SemanticState, level: Level) -> Mapping[str, AttributeValue]:
    return {
        Level.PRODUCT: state.product,
        Level.DESIGN_SYSTEM: state.design_system,
        Level.FEATURE: state.feature,
    }[level]


def _check_component_index(state: SemanticState, path: AttributePath) -> None:
    assert path.component_index is not None
    if path.component_index >= len(state.components):
        raise InvalidPath(
            f"component index {path.component_index} out of range "
            f"(state has {len(state.components)} components)"
        )


def get_attribute(state: SemanticState, path: AttributePath) -> AttributeValue | None:
    """Return the slot content at ``path`` or None when unset."""
    if path.level is Level.COMPONENT:
        _check_component_index(state, path)
        return state.components[path.component_index].slot(path.attribute)
    return _slot_map(state, path.level).get(path.attribute)


def _with_slot(
    state: SemanticState, path: AttributePath, value: AttributeValue | None
) -> SemanticState:
    if path.level is Level.COMPONENT:
        _check_component_index(state, path)
        comps = list(state.components)
        comps[path.component_index] = replace(
            comps[path.component_index], **{path.attribute: value}
        )
        return replace(state, components=tuple(comps))
    slots = dict(_slot_map(state, path.level))
    if value is None:
        slots.pop(path.attribute, None)
    else:
        slots[path.attribute] = value
    return replace(state, **{path.level.value: slots})


def set_attribute(
    state: SemanticState,
    path: AttributePath,
    text: str,
    provenance: Provenance,
    version: int,
) -> SemanticState:
    """Write ``text`` into the slot at ``path``, returning a new state."""
    if not text:
        raise EmptyText(f"cannot set empty text at {format_path(state, path)}")
    return _with_slot(state, path, AttributeValue(text, provenance, version))


def clear_attribute(state: SemanticState, path: AttributePath) -> SemanticState:
    """Empty the slot at ``path``; clearing an empty slot is a no-op."""
    if get_attribute(state, path) is None:
        return state
    return _with_slot(state, path, None)


def add_component(state: SemanticState, name: str) -> tuple[SemanticState, int]:
    """Append an all-empty component, returning the new state and its index."""
    if not name:
        raise EmptyName("component name must be non-empty")
    if any(c.name == name for c in state.components):
        raise DuplicateName(f"component {name!r} already exists")
    comps = state.components + (ComponentSpec(name=name),)
    return replace(state, components=comps), len(comps) - 1


def remove_component(state: SemanticState, name: str) -> SemanticState:
    """Drop the named component; its slot values go with it."""
    if not any(c.name == name for c in state.components):
        raise InvalidPath(f"no component named {name!r}")
    return replace(
        state, components=tuple(c for c in state.components if c.name != name)
    )


def component_index(state: SemanticState, name: str) -> int | None:
    for i, comp in enumerate(state.components):
        if comp.name == name:
            return i
    return None


def fixed_paths() -> tuple[AttributePath, ...]:
    return tuple(
        AttributePath(level, attr)
        for level in FIXED_LEVELS
        for attr in LEVEL_ATTRS[level]
    )


def all_paths(state: SemanticState) -> tuple[AttributePath, ...]:
    """Every structurally valid path of ``state``, in canonical order."""
    paths = list(fixed_paths())
    for i in range(len(state.components)):
        for attr in COMPONENT_ATTRS:
            paths.append(AttributePath(Level.COMPONENT, attr, i))
    return tuple(paths)


def list_empty_attributes(state: SemanticState) -> list[AttributePath]:
    """All valid paths whose slots are unset, in canonical order."""
    return [p for p in all_paths(state) if get_attribute(state, p) is None]


def set_paths(state: SemanticState) -> list[AttributePath]:
    return [p for p in all_paths(state) if get_attribute(state, p) is not None]


def _resolve_fragments(
    state: SemanticState, fragments: Iterable[ComponentFragment]
) -> tuple[SemanticState, dict[int, int], list[str]]:
    """Append fragments to the component list, retargeting duplicates.

    Fragment j is nominally addressed by index len(state.components) + j; the
    returned map translates those planned indices to actual ones (an existing
    component of the same name keeps its index). Skipped duplicate names are
    reported so callers can surface them.
    """
    planned_base = len(state.components)
    index_map: dict[int, int] = {}
    skipped: list[str] = []
    out = state
    for j, frag in enumerate(fragments):
        existing = component_index(out, frag.name)
        if existing is not None:
            index_map[planned_base + j] = existing
            skipped.append(frag.name)
        else:
            out, idx = add_component(out, frag.name)
            index_map[planned_base + j] = idx
    return out, index_map, skipped


def _apply_semantics(
    state: SemanticState,
    entries: Mapping[AttributePath, str],
    fragments: Iterable[ComponentFragment],
    provenance: Provenance,
    version: int,
) -> tuple[SemanticState, list[ShadowProposal], list[str]]:
    """Shared write path for parsed and augmented semantics.

    Precedence: user > suggestion_accepted > parsed/augmented. Collisions with
    the protected provenances are returned as shadow proposals instead of
    overwriting; parsed/augmented slots are overwritten.
    """
    fragments = tuple(fragments)
    planned_base = len(state.components)
    out, index_map, skipped = _resolve_fragments(state, fragments)

    writes: list[tuple[AttributePath, str]] = []
    for j, frag in enumerate(fragments):
        actual = index_map[planned_base + j]
        for attr, text in frag.slot_texts():
            writes.append((AttributePath(Level.COMPONENT, attr, actual), text))
    for path, text in entries.items():
        if path.level is Level.COMPONENT:
            idx = path.component_index
            if idx in index_map:
                idx = index_map[idx]
            path = AttributePath(Level.COMPONENT, path.attribute, idx)
        writes.append((path, text))

    shadows: list[ShadowProposal] = []
    for path, text in writes:
        current = get_attribute(out, path)
        if current is not None and current.provenance in (
            Provenance.USER,
            Provenance.SUGGESTION_ACCEPTED,
        ):
            shadows.append(ShadowProposal(path, text))
            continue
        out = set_attribute(out, path, text, provenance, version)
    return out, shadows, skipped


def merge_augmented(
    state: SemanticState, augmented: AugmentedSemantics, version: int
) -> tuple[SemanticState, list[ShadowProposal]]:
    """Fold augmented semantics into ``state`` without disturbing user intent.

    Empty slots are filled with provenance=augmented; parsed/augmented slots
    are overwritten; user and suggestion_accepted slots are left untouched and
    the colliding proposals come back as shadows.
    """
    out, shadows, _ = _apply_semantics(
        state, augmented.entries, augmented.new_components, Provenance.AUGMENTED, version
    )
    return out, shadows


# --- dotted path rendering -------------------------------------------------

def format_path(state: SemanticState | None, path: AttributePath) -> str:
    """Dotted form: ``level.attribute`` or ``component.<name>.<attribute>``."""
    if path.level is Level.COMPONENT:
        if state is not None and path.component_index < len(state.components):
            name = state.components[path.component_index].name
            return f"component.{name}.{path.attribute}"
        return f"component[{path.component_index}].{path.attribute}"
    return f"{path.level.value}.{path.attribute}"


def parse_dotted(state: SemanticState, text: str) -> AttributePath:
    """Parse the dotted path form against ``state`` (component names resolve
    to indices)."""
    if text.startswith("component."):
        rest = text[len("component."):]
        if "." not in rest:
            raise InvalidPath(f"component path {text!r} is missing an attribute")
        name, attribute = rest.rsplit(".", 1)
        if attribute not in COMPONENT_ATTRS:
            raise InvalidPath(f"unknown component attribute {attribute!r}")
        idx = component_index(state, name)
        if idx is None:
            raise InvalidPath(f"no component named {name!r}")
        return AttributePath(Level.COMPONENT, attribute, idx)
    if "." not in text:
        raise InvalidPath(f"malformed path {text!r}")
    level_name, attribute = text.split(".", 1)
    try:
        level = Level(level_name)
    except ValueError:
        raise InvalidPath(f"unknown level {level_name!r}") from None
    if level is Level.COMPONENT:
        raise InvalidPath("component paths use the form component.<name>.<attribute>")
    return AttributePath(level, attribute)


# --- slot-text equality ----------------------------------------------------

def slot_texts(state: SemanticState) -> dict:
    """Texts of all set slots, components keyed by name (order-insensitive)."""
    doc: dict = {}
    for level in FIXED_LEVELS:
        slots = _slot_map(state, level)
        for attr in LEVEL_ATTRS[level]:
            if attr in slots:
                doc[(level.value, attr)] = slots[attr].text
    for comp in state.components:
        for attr in COMPONENT_ATTRS:
            value = comp.slot(attr)
            if value is not None:
                doc[("component", comp.name, attr)] = value.text
    for comp in state.components:
        doc.setdefault(("component", comp.name), comp.name)
    return doc


def states_slot_equal(a: SemanticState, b: SemanticState) -> bool:
    """Equality over slot texts and component names, ignoring provenance,
    versions, and component order."""
    return slot_texts(a) == slot_texts(b)


# --- canonical serialization ------------------------------------------------

def canonical_json_bytes(obj) -> bytes:
    """House JSON style: fixed key order as built, 2-space indent, UTF-8,
    trailing newline."""
    return (json.dumps(obj, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def _value_to_doc(value: AttributeValue) -> dict:
    return {
        "text": value.text,
        "provenance": value.provenance.value,
        "version": value.version,
    }


def _component_to_doc(comp: ComponentSpec) -> dict:
    doc: dict = {"name": comp.name}
    for attr in COMPONENT_ATTRS:
        value = comp.slot(attr)
        if value is not None:
            doc[attr] = _value_to_doc(value)
    return doc


def state_to_document(state: SemanticState) -> dict:
    doc: dict = {}
    for level in FIXED_LEVELS:
        slots = _slot_map(state, level)
        doc[level.value] = {
            attr: _value_to_doc(slots[attr])
            for attr in LEVEL_ATTRS[level]
            if attr in slots
        }
    doc["components"] = [_component_to_doc(c) for c in state.components]
    return doc


def canonical_serialize(state: SemanticState) -> bytes:
    """Canonical byte form: equal states always produce identical bytes."""
    return canonical_json_bytes(state_to_document(state))


def _value_from_doc(doc, where: str) -> AttributeValue:
    if not isinstance(doc, dict):
        raise MalformedDocument(f"{where}: value must be an object")
    extra = set(doc) - {"text", "provenance", "version"}
    if extra:
        raise MalformedDocument(f"{where}: unexpected keys {sorted(extra)}")
    text = doc.get("text")
    if not isinstance(text, str) or not text:
        raise MalformedDocument(f"{where}: text must be a non-empty string")
    try:
        provenance = Provenance(doc.get("provenance"))
    except ValueError:
        raise MalformedDocument(
            f"{where}: unknown provenance {doc.get('provenance')!r}"
        ) from None
    version = doc.get("version")
    if not isinstance(version, int) or isinstance(version, bool) or version < 0:
        raise MalformedDocument(f"{where}: version must be a non-negative integer")
    return AttributeValue(text, provenance, version)


def state_from_document(doc) -> SemanticState:
    if not isinstance(doc, dict):
        raise MalformedDocument("state document must be an object")
    expected = {level.value for level in FIXED_LEVELS} | {"components"}
    extra = set(doc) - expected
    if extra:
        raise MalformedDocument(f"unexpected top-level keys {sorted(extra)}")

    level_slots: dict[Level, dict[str, AttributeValue]] = {}
    for level in FIXED_LEVELS:
        slots_doc = doc.get(level.value, {})
        if not isinstance(slots_doc, dict):
            raise MalformedDocument(f"{level.value} must be an object")
        slots: dict[str, AttributeValue] = {}
        for attr, value_doc in slots_doc.items():
            if attr not in LEVEL_ATTRS[level]:
                raise MalformedDocument(f"unknown attribute {level.value}.{attr}")
            slots[attr] = _value_from_doc(value_doc, f"{level.value}.{attr}")
        level_slots[level] = slots

    comps_doc = doc.get("components", [])
    if not isinstance(comps_doc, list):
        raise MalformedDocument("components must be a list")
    components: list[ComponentSpec] = []
    seen_names: set[str] = set()
    for i, comp_doc in enumerate(comps_doc):
        if not isinstance(comp_doc, dict):
            raise MalformedDocument(f"components[{i}] must be an object")
        name = comp_doc.get("name")
        if not isinstance(name, str) or not name:
            raise MalformedDocument(f"components[{i}]: name must be a non-empty string")
        if name in seen_names:
            raise MalformedDocument(f"components[{i}]: duplicate name {name!r}")
        seen_names.add(name)
        extra = set(comp_doc) - ({"name"} | set(COMPONENT_ATTRS))
        if extra:
            raise MalformedDocument(f"components[{i}]: unexpected keys {sorted(extra)}")
        values = {
            attr: _value_from_doc(comp_doc[attr], f"components[{i}].{attr}")
            for attr in COMPONENT_ATTRS
            if attr in comp_doc
        }
        components.append(ComponentSpec(name=name, **values))

    return SemanticState(
        product=level_slots[Level.PRODUCT],
        design_system=level_slots[Level.DESIGN_SYSTEM],
        feature=level_slots[Level.FEATURE],
        components=tuple(components),
    )


def deserialize(data: bytes) -> SemanticState:
    try:
        doc = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise MalformedDocument(f"not valid UTF-8: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedDocument(
            f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    return state_from_document(doc)
