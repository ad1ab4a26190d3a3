"""Orchestration of the generate–analyze–refine loop over the session store.

One engine instance serves many sessions. All mutations of a session run
under that session's lock, so histories are linear and gap-free no matter how
many callers race.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path

from .analysis import extract_semantics, newly_inferred
from .diffing import compute_diff, render_changelog
from .errors import ConfigInvalid, EmptyArtifact, InvalidPath, UnknownSession
from .gateway import ProviderGateway, ProviderMode
from .generation import DEFAULT_CONSTRAINTS, generate_initial, regenerate_scoped
from .model import (
    add_component,
    clear_attribute,
    component_index,
    format_path,
    merge_augmented,
    parse_dotted,
    remove_component,
    set_attribute,
    Provenance,
)
from .parsing import apply_parsed, parse_prompt
from .relations import accept_suggestion, analyze_relations, edge_from_document
from .store import Session, SessionStore


@dataclass
class ServiceConfig:
    """Runtime configuration; CLI flags and env vars map onto these fields."""

    data_dir: Path = Path("data")
    bind_address: str = "127.0.0.1:8787"
    provider_mode: str = "mock"
    fixture_dir: Path | None = None
    provider_url: str | None = None
    provider_key: str | None = None
    constraints_text: str = DEFAULT_CONSTRAINTS
    timeout: float = 120.0

    def validate(self) -> None:
        mode = ProviderMode(self.provider_mode)
        if mode is ProviderMode.RECORDED:
            if self.fixture_dir is None or not Path(self.fixture_dir).is_dir():
                raise ConfigInvalid(
                    f"recorded mode requires an existing fixture dir, got {self.fixture_dir}"
                )
        try:
            Path(self.data_dir).mkdir(parents=True, exist_ok=True)
            probe = Path(self.data_dir) / ".write-probe"
            probe.write_text("")
            probe.unlink()
        except OSError as exc:
            raise ConfigInvalid(f"data dir {self.data_dir} is not writable: {exc}") from exc

    def build_gateway(self, transport=None) -> ProviderGateway:
        return ProviderGateway(
            mode=self.provider_mode,
            fixture_dir=self.fixture_dir,
            credentials=self.provider_key,
            endpoint=self.provider_url,
            timeout=self.timeout,
            transport=transport,
        )


@dataclass
class MutationResult:
    version: int
    changelog: list[str]
    extra: dict = field(default_factory=dict)

    def to_document(self) -> dict:
        return {"version": self.version, "changelog": self.changelog, **self.extra}


class StudioEngine:
    def __init__(
        self,
        store: SessionStore,
        gateway: ProviderGateway,
        constraints_text: str = DEFAULT_CONSTRAINTS,
    ):
        self.store = store
        self.gateway = gateway
        self.constraints_text = constraints_text
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def session(self, session_id: str) -> Session:
        with self._registry_lock:
            cached = self._sessions.get(session_id)
        if cached is not None:
            return cached
        session = self.store.load_session(session_id)
        with self._registry_lock:
            return self._sessions.setdefault(session_id, session)

    def create_session(self, name: str) -> Session:
        session = self.store.create_session(name)
        with self._registry_lock:
            self._sessions[session.id] = session
        return session

    def open_by_name(self, name: str, create: bool = False) -> Session:
        with self._registry_lock:
            for session in self._sessions.values():
                if session.name == name:
                    return session
        session = self.store.find_by_name(name)
        if session is None:
            if not create:
                raise UnknownSession(f"no session named {name!r}")
            return self.create_session(name)
        with self._registry_lock:
            return self._sessions.setdefault(session.id, session)

    # --- mutations -------------------------------------------------------------

    def patch_slot(self, session_id: str, path_text: str, text: str | None) -> MutationResult:
        """Set or clear one slot. ``component.<Name>`` (no attribute) adds the
        component when text is given and removes it when text is null; setting
        a slot on a component that does not exist yet creates it first."""
        session = self.session(session_id)
        with self._lock(session_id):
            state = session.current_state
            version = session.current_version + 1
            if path_text.startswith("component.") and path_text.count(".") == 1:
                name = path_text[len("component."):]
                if not name:
                    raise InvalidPath("component path is missing a name")
                if text is None:
                    state = remove_component(state, name)
                    label = f"remove component {name}"
                else:
                    state, _ = add_component(state, name)
                    label = f"add component {name}"
            elif text is None:
                path = parse_dotted(state, path_text)
                state = clear_attribute(state, path)
                label = f"clear {path_text}"
            else:
                if path_text.startswith("component."):
                    name = path_text[len("component."):].rsplit(".", 1)[0]
                    if name and component_index(state, name) is None:
                        state, _ = add_component(state, name)
                path = parse_dotted(state, path_text)
                state = set_attribute(state, path, text, Provenance.USER, version)
                label = f"set {path_text}"
            record = self.store.commit(session, state, label=label)
            return MutationResult(record.version, render_changelog(record.diff_from_parent))

    def run_parse(self, session_id: str, text: str) -> MutationResult:
        session = self.session(session_id)
        parsed = parse_prompt(text, self.gateway)
        with self._lock(session_id):
            version = session.current_version + 1
            state, skipped = apply_parsed(session.current_state, parsed, version)
            record = self.store.commit(session, state, label="parse")
            extra = {"skipped_components": skipped}
            if parsed.unparsed_residue:
                extra["residue"] = parsed.unparsed_residue
            return MutationResult(record.version, render_changelog(record.diff_from_parent), extra)

    def run_generate(self, session_id: str) -> MutationResult:
        session = self.session(session_id)
        with self._lock(session_id):
            state = session.current_state
            version = session.current_version + 1
            previous = session.current_artifact()
            diff = None
            if previous is not None:
                prior_state = session.record_at(previous.produced_from_version).state
                diff = compute_diff(prior_state, state)
            if previous is not None and diff is not None and not diff.is_empty():
                artifact = regenerate_scoped(
                    state, version, diff, previous, self.gateway, self.constraints_text
                )
                label = "regenerate"
            else:
                artifact = generate_initial(state, version, self.gateway, self.constraints_text)
                label = "generate"
            record = self.store.commit(session, state, artifact=artifact, label=label)
            return MutationResult(
                record.version,
                render_changelog(record.diff_from_parent),
                {"artifact_id": artifact.artifact_id},
            )

    def run_analyze(self, session_id: str, screenshot: bytes | None = None) -> MutationResult:
        session = self.session(session_id)
        artifact = session.current_artifact()
        if artifact is None:
            raise EmptyArtifact("no artifact to analyze; generate first")
        augmented, evidence = extract_semantics(artifact, screenshot, self.gateway)
        with self._lock(session_id):
            state = session.current_state
            version = session.current_version + 1
            inferred = newly_inferred(augmented, state)
            merged, shadows = merge_augmented(state, augmented, version)
            record = self.store.commit(session, merged, label="analyze")
            return MutationResult(
                record.version,
                render_changelog(record.diff_from_parent),
                {
                    "newly_inferred": [format_path(state, p) for p in inferred],
                    "shadow_proposals": [
                        {"path": format_path(merged, s.path), "text": s.text}
                        for s in shadows
                    ],
                    "evidence": evidence,
                },
            )

    def run_relations(self, session_id: str) -> MutationResult:
        session = self.session(session_id)
        with self._lock(session_id):
            state = session.current_state
            version = session.current_version + 1
            graph, warnings = analyze_relations(state, version, self.gateway)
            record = self.store.commit(session, state, graph=graph, label="relations")
            return MutationResult(
                record.version,
                render_changelog(record.diff_from_parent),
                {"edges": len(graph.edges), "warnings": warnings},
            )

    def accept_edge(self, session_id: str, edge_doc: dict) -> MutationResult:
        session = self.session(session_id)
        with self._lock(session_id):
            state = session.current_state
            version = session.current_version + 1
            edge = edge_from_document(edge_doc, state)
            state = accept_suggestion(state, edge, version)
            record = self.store.commit(session, state, label="accept suggestion")
            return MutationResult(record.version, render_changelog(record.diff_from_parent))

    def rollback(self, session_id: str, version: int) -> MutationResult:
        session = self.session(session_id)
        with self._lock(session_id):
            record = self.store.rollback(session, version)
            return MutationResult(record.version, render_changelog(record.diff_from_parent))
