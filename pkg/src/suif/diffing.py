"""Path-level semantic diffs: compute, apply, invert, and render.

Diffs compare slot text only; provenance and version changes never produce
entries. Components are matched by name (a rename is a removal plus an
addition), so diff entries address component slots by component name — that
keeps apply and invert well-defined when indices shift.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import DiffConflict, MalformedDocument
from .model import (
    COMPONENT_ATTRS,
    FIXED_LEVELS,
    LEVEL_ATTRS,
    LEVEL_DISPLAY,
    AttributeValue,
    ComponentSpec,
    Level,
    Provenance,
    SemanticState,
    display_name,
)


class DiffKind(str, Enum):
    ADDED = "added"
    REMOVED = "removed"
    CHANGED = "changed"


class ComponentOpKind(str, Enum):
    ADDED = "added"
    REMOVED = "removed"


@dataclass(frozen=True)
class DiffEntry:
    level: Level
    attribute: str
    component: str | None  # component name, present iff level == COMPONENT
    kind: DiffKind
    old: str | None
    new: str | None

    def __post_init__(self):
        if (self.level is Level.COMPONENT) != (self.component is not None):
            raise MalformedDocument("component name present iff level is component")
        if self.attribute not in LEVEL_ATTRS[self.level]:
            raise MalformedDocument(f"unknown attribute {self.attribute!r}")
        if self.kind is DiffKind.ADDED and not (self.old is None and self.new):
            raise MalformedDocument("added entries carry new text only")
        if self.kind is DiffKind.REMOVED and not (self.old and self.new is None):
            raise MalformedDocument("removed entries carry old text only")
        if self.kind is DiffKind.CHANGED and not (
            self.old and self.new and self.old != self.new
        ):
            raise MalformedDocument("changed entries need old != new, both present")

    def dotted(self) -> str:
        if self.component is not None:
            return f"component.{self.component}.{self.attribute}"
        return f"{self.level.value}.{self.attribute}"


@dataclass(frozen=True)
class ComponentOp:
    name: str
    op: ComponentOpKind


@dataclass(frozen=True)
class SemanticDiff:
    entries: tuple[DiffEntry, ...] = ()
    component_ops: tuple[ComponentOp, ...] = ()

    def is_empty(self) -> bool:
        return not self.entries and not self.component_ops


def _slot_text(state: SemanticState, level: Level, attr: str) -> str | None:
    value = {
        Level.PRODUCT: state.product,
        Level.DESIGN_SYSTEM: state.design_system,
        Level.FEATURE: state.feature,
    }[level].get(attr)
    return value.text if value else None


def _component_by_name(state: SemanticState, name: str) -> ComponentSpec | None:
    for comp in state.components:
        if comp.name == name:
            return comp
    return None


def _entry(level, attr, component, old, new) -> DiffEntry | None:
    if old == new:
        return None
    if old is None:
        return DiffEntry(level, attr, component, DiffKind.ADDED, None, new)
    if new is None:
        return DiffEntry(level, attr, component, DiffKind.REMOVED, old, None)
    return DiffEntry(level, attr, component, DiffKind.CHANGED, old, new)


def compute_diff(a: SemanticState, b: SemanticState) -> SemanticDiff:
    """Minimal text-level diff taking ``a`` to ``b``."""
    entries: list[DiffEntry] = []
    for level in FIXED_LEVELS:
        for attr in LEVEL_ATTRS[level]:
            e = _entry(level, attr, None, _slot_text(a, level, attr), _slot_text(b, level, attr))
            if e:
                entries.append(e)

    b_names = {c.name for c in b.components}
    a_names = {c.name for c in a.components}
    ops: list[ComponentOp] = []

    for comp in a.components:
        other = _component_by_name(b, comp.name)
        if other is None:
            ops.append(ComponentOp(comp.name, ComponentOpKind.REMOVED))
            for attr in COMPONENT_ATTRS:
                value = comp.slot(attr)
                if value is not None:
                    entries.append(
                        DiffEntry(Level.COMPONENT, attr, comp.name, DiffKind.REMOVED, value.text, None)
                    )
        else:
            for attr in COMPONENT_ATTRS:
                old = comp.slot(attr)
                new = other.slot(attr)
                e = _entry(
                    Level.COMPONENT,
                    attr,
                    comp.name,
                    old.text if old else None,
                    new.text if new else None,
                )
                if e:
                    entries.append(e)

    for comp in b.components:
        if comp.name not in a_names:
            ops.append(ComponentOp(comp.name, ComponentOpKind.ADDED))
            for attr in COMPONENT_ATTRS:
                value = comp.slot(attr)
                if value is not None:
                    entries.append(
                        DiffEntry(Level.COMPONENT, attr, comp.name, DiffKind.ADDED, None, value.text)
                    )

    return SemanticDiff(tuple(entries), tuple(ops))


def apply_diff(a: SemanticState, diff: SemanticDiff, version: int = 0) -> SemanticState:
    """Apply ``diff`` to ``a``. Applied values carry provenance=user at
    ``version``. Raises DiffConflict when the diff does not fit ``a``."""
    removed_names = {op.name for op in diff.component_ops if op.op is ComponentOpKind.REMOVED}
    added_names = {op.name for op in diff.component_ops if op.op is ComponentOpKind.ADDED}

    for name in removed_names:
        if _component_by_name(a, name) is None:
            raise DiffConflict(f"cannot remove missing component {name!r}")
    for name in added_names:
        if _component_by_name(a, name) is not None:
            raise DiffConflict(f"cannot add component {name!r}: name already present")

    def check(entry: DiffEntry, current: str | None) -> None:
        if entry.kind is DiffKind.ADDED and current is not None:
            raise DiffConflict(
                f"{entry.dotted()}: added entry targets occupied slot {current!r}"
            )
        if entry.kind in (DiffKind.REMOVED, DiffKind.CHANGED) and current != entry.old:
            raise DiffConflict(
                f"{entry.dotted()}: expected old value {entry.old!r}, found {current!r}"
            )

    fixed: dict[Level, dict[str, AttributeValue]] = {
        Level.PRODUCT: dict(a.product),
        Level.DESIGN_SYSTEM: dict(a.design_system),
        Level.FEATURE: dict(a.feature),
    }
    surviving: dict[str, dict[str, AttributeValue]] = {}
    order: list[str] = []
    for comp in a.components:
        if comp.name in removed_names:
            continue
        surviving[comp.name] = {
            attr: comp.slot(attr) for attr in COMPONENT_ATTRS if comp.slot(attr)
        }
        order.append(comp.name)
    for op in diff.component_ops:
        if op.op is ComponentOpKind.ADDED:
            surviving[op.name] = {}
            order.append(op.name)

    for entry in diff.entries:
        if entry.component is None:
            current = fixed[entry.level].get(entry.attribute)
            check(entry, current.text if current else None)
            if entry.kind is DiffKind.REMOVED:
                fixed[entry.level].pop(entry.attribute, None)
            else:
                fixed[entry.level][entry.attribute] = AttributeValue(
                    entry.new, Provenance.USER, version
                )
        elif entry.component in removed_names:
            # the component goes away wholesale; just verify the old value
            comp = _component_by_name(a, entry.component)
            current = comp.slot(entry.attribute)
            check(entry, current.text if current else None)
        else:
            slots = surviving.get(entry.component)
            if slots is None:
                raise DiffConflict(f"{entry.dotted()}: unknown component")
            current = slots.get(entry.attribute)
            check(entry, current.text if current else None)
            if entry.kind is DiffKind.REMOVED:
                slots.pop(entry.attribute, None)
            else:
                slots[entry.attribute] = AttributeValue(entry.new, Provenance.USER, version)

    components = tuple(
        ComponentSpec(name=name, **surviving[name]) for name in order
    )
    return SemanticState(
        product=fixed[Level.PRODUCT],
        design_system=fixed[Level.DESIGN_SYSTEM],
        feature=fixed[Level.FEATURE],
        components=components,
    )


def invert_diff(diff: SemanticDiff) -> SemanticDiff:
    """The diff that undoes ``diff``; inverting twice is the identity."""
    entries = []
    for e in diff.entries:
        if e.kind is DiffKind.ADDED:
            entries.append(replace(e, kind=DiffKind.REMOVED, old=e.new, new=None))
        elif e.kind is DiffKind.REMOVED:
            entries.append(replace(e, kind=DiffKind.ADDED, old=None, new=e.old))
        else:
            entries.append(replace(e, old=e.new, new=e.old))
    ops = tuple(
        ComponentOp(
            op.name,
            ComponentOpKind.REMOVED if op.op is ComponentOpKind.ADDED else ComponentOpKind.ADDED,
        )
        for op in diff.component_ops
    )
    return SemanticDiff(tuple(entries), ops)


def render_changelog(diff: SemanticDiff) -> list[str]:
    """One human-readable line per entry and per component op."""
    lines = []
    for e in diff.entries:
        label = f"{LEVEL_DISPLAY[e.level]} · {display_name(e.attribute)}"
        if e.component is not None:
            label += f" · {e.component}"
        if e.kind is DiffKind.ADDED:
            lines.append(f'{label}: → "{e.new}"')
        elif e.kind is DiffKind.REMOVED:
            lines.append(f'{label}: "{e.old}" →')
        else:
            lines.append(f'{label}: "{e.old}" → "{e.new}"')
    for op in diff.component_ops:
        lines.append(f"Component · {op.name}: {op.op.value}")
    return lines


# --- JSON document form ------------------------------------------------------

def diff_to_document(diff: SemanticDiff) -> dict:
    entries = []
    for e in diff.entries:
        doc = {"path": e.dotted(), "kind": e.kind.value}
        if e.old is not None:
            doc["old"] = e.old
        if e.new is not None:
            doc["new"] = e.new
        entries.append(doc)
    ops = [{"name": op.name, "op": op.op.value} for op in diff.component_ops]
    return {"entries": entries, "component_ops": ops}


def _entry_from_document(doc) -> DiffEntry:
    if not isinstance(doc, dict):
        raise MalformedDocument("diff entry must be an object")
    path = doc.get("path")
    if not isinstance(path, str):
        raise MalformedDocument("diff entry path must be a string")
    component = None
    if path.startswith("component."):
        rest = path[len("component."):]
        if "." not in rest:
            raise MalformedDocument(f"malformed diff path {path!r}")
        component, attribute = rest.rsplit(".", 1)
        level = Level.COMPONENT
    else:
        if "." not in path:
            raise MalformedDocument(f"malformed diff path {path!r}")
        level_name, attribute = path.split(".", 1)
        try:
            level = Level(level_name)
        except ValueError:
            raise MalformedDocument(f"unknown level in path {path!r}") from None
    try:
        kind = DiffKind(doc.get("kind"))
    except ValueError:
        raise MalformedDocument(f"unknown diff kind {doc.get('kind')!r}") from None
    return DiffEntry(level, attribute, component, kind, doc.get("old"), doc.get("new"))


def diff_from_document(doc) -> SemanticDiff:
    if not isinstance(doc, dict):
        raise MalformedDocument("diff document must be an object")
    entries = tuple(_entry_from_document(e) for e in doc.get("entries", []))
    ops = []
    for op_doc in doc.get("component_ops", []):
        name = op_doc.get("name")
        if not isinstance(name, str) or not name:
            raise MalformedDocument("component op name must be a non-empty string")
        try:
            op = ComponentOpKind(op_doc.get("op"))
        except ValueError:
            raise MalformedDocument(f"unknown component op {op_doc.get('op')!r}") from None
        ops.append(ComponentOp(name, op))
    return SemanticDiff(entries, tuple(ops))
