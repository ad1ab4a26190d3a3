"""Versioned, append-only persistence of sessions.

Layout under the data dir:

    sessions/<id>/session.json   metadata + version index
    sessions/<id>/v<k>.json      one immutable record per version
    blobs/<sha256>               content-addressed artifact code

Record files are written once and never touched again; rollback appends a new
version rather than truncating history.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .diffing import (
    SemanticDiff,
    compute_diff,
    diff_from_document,
    diff_to_document,
    render_changelog,
)
from .errors import (
    EmptyName,
    IoFailure,
    MalformedDocument,
    NoChange,
    UnknownSession,
    UnknownVersion,
)
from .generation import GeneratedArtifact, PromptDoc
from .model import (
    SemanticState,
    canonical_json_bytes,
    format_path,
    new_state,
    parse_dotted,
    state_from_document,
    state_to_document,
)
from .relations import RelationGraph, graph_from_document, graph_to_document


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class VersionRecord:
    version: int
    state: SemanticState
    artifact: GeneratedArtifact | None
    graph: RelationGraph | None
    diff_from_parent: SemanticDiff | None
    label: str
    created_at: str


@dataclass
class Session:
    id: str
    name: str
    records: list[VersionRecord] = field(default_factory=list)

    @property
    def current_version(self) -> int:
        return self.records[-1].version

    @property
    def current_state(self) -> SemanticState:
        return self.records[-1].state

    def record_at(self, version: int) -> VersionRecord:
        if version < 0 or version >= len(self.records):
            raise UnknownVersion(f"session has no version {version}")
        return self.records[version]

    def current_artifact(self) -> GeneratedArtifact | None:
        for record in reversed(self.records):
            if record.artifact is not None:
                return record.artifact
        return None

    def current_graph(self) -> RelationGraph | None:
        for record in reversed(self.records):
            if record.graph is not None:
                return record.graph
        return None


class SessionStore:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.sessions_dir = self.data_dir / "sessions"
        self.blobs_dir = self.data_dir / "blobs"
        try:
            self.sessions_dir.mkdir(parents=True, exist_ok=True)
            self.blobs_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IoFailure(f"cannot initialize data dir {data_dir}: {exc}") from exc

    # --- blobs ---------------------------------------------------------------

    def write_blob(self, data: bytes) -> str:
        digest = hashlib.sha256(data).hexdigest()
        path = self.blobs_dir / digest
        if not path.exists():
            tmp = path.parent / f".{digest}.tmp"
            tmp.write_bytes(data)
            os.replace(tmp, path)
        return digest

    def read_blob(self, digest: str) -> bytes:
        path = self.blobs_dir / digest
        if not path.exists():
            raise IoFailure(f"missing blob {digest}")
        return path.read_bytes()

    # --- record (de)serialization ---------------------------------------------

    def _record_to_document(self, record: VersionRecord) -> dict:
        artifact_doc = None
        if record.artifact is not None:
            artifact = record.artifact
            artifact_doc = {
                "artifact_id": artifact.artifact_id,
                "produced_from_version": artifact.produced_from_version,
                "code_sha256": self.write_blob(artifact.code.encode("utf-8")),
                "prompt": {
                    "markdown": artifact.prompt.markdown,
                    "state_version": artifact.prompt.state_version,
                    "included_paths": [
                        format_path(record.state, p) for p in artifact.prompt.included_paths
                    ],
                },
            }
        return {
            "version": record.version,
            "label": record.label,
            "created_at": record.created_at,
            "state": state_to_document(record.state),
            "diff_from_parent": (
                diff_to_document(record.diff_from_parent)
                if record.diff_from_parent is not None
                else None
            ),
            "artifact": artifact_doc,
            "graph": (
                graph_to_document(record.graph, record.state)
                if record.graph is not None
                else None
            ),
        }

    def _record_from_document(self, doc: dict) -> VersionRecord:
        state = state_from_document(doc["state"])
        artifact = None
        if doc.get("artifact"):
            a = doc["artifact"]
            prompt = PromptDoc(
                markdown=a["prompt"]["markdown"],
                state_version=a["prompt"]["state_version"],
                included_paths=tuple(
                    parse_dotted(state, p) for p in a["prompt"]["included_paths"]
                ),
            )
            artifact = GeneratedArtifact(
                code=self.read_blob(a["code_sha256"]).decode("utf-8"),
                prompt=prompt,
                produced_from_version=a["produced_from_version"],
                artifact_id=a["artifact_id"],
            )
        graph = graph_from_document(doc["graph"], state) if doc.get("graph") else None
        diff = (
            diff_from_document(doc["diff_from_parent"])
            if doc.get("diff_from_parent") is not None
            else None
        )
        return VersionRecord(
            version=doc["version"],
            state=state,
            artifact=artifact,
            graph=graph,
            diff_from_parent=diff,
            label=doc.get("label", ""),
            created_at=doc.get("created_at", ""),
        )

    # --- persistence -----------------------------------------------------------

    def _session_dir(self, session_id: str) -> Path:
        return self.sessions_dir / session_id

    def _write_session_meta(self, session: Session) -> None:
        doc = {
            "id": session.id,
            "name": session.name,
            "current_version": session.current_version,
            "versions": [
                {"version": r.version, "label": r.label, "created_at": r.created_at}
                for r in session.records
            ],
        }
        path = self._session_dir(session.id) / "session.json"
        tmp = path.parent / ".session.json.tmp"
        tmp.write_bytes(canonical_json_bytes(doc))
        os.replace(tmp, path)

    def _write_record(self, session: Session, record: VersionRecord) -> None:
        path = self._session_dir(session.id) / f"v{record.version}.json"
        if path.exists():
            raise IoFailure(f"record {path} already exists; records are append-only")
        path.write_bytes(canonical_json_bytes(self._record_to_document(record)))

    # --- operations --------------------------------------------------------------

    def create_session(self, name: str) -> Session:
        """New session whose version 0 is the empty state."""
        if not name:
            raise EmptyName("session name must be non-empty")
        session = Session(id=uuid.uuid4().hex[:12], name=name)
        record = VersionRecord(
            version=0,
            state=new_state(),
            artifact=None,
            graph=None,
            diff_from_parent=None,
            label="created",
            created_at=_now(),
        )
        session.records.append(record)
        try:
            self._session_dir(session.id).mkdir(parents=True)
            self._write_record(session, record)
            self._write_session_meta(session)
        except OSError as exc:
            raise IoFailure(f"cannot persist session: {exc}") from exc
        return session

    def load_session(self, session_id: str) -> Session:
        meta_path = self._session_dir(session_id) / "session.json"
        if not meta_path.exists():
            raise UnknownSession(f"no session {session_id!r}")
        try:
            meta = json.loads(meta_path.read_text("utf-8"))
        except (OSError, ValueError) as exc:
            raise MalformedDocument(f"cannot read session metadata: {exc}") from exc
        session = Session(id=meta["id"], name=meta["name"])
        for entry in meta["versions"]:
            record_path = self._session_dir(session_id) / f"v{entry['version']}.json"
            doc = json.loads(record_path.read_text("utf-8"))
            session.records.append(self._record_from_document(doc))
        return session

    def list_sessions(self) -> list[dict]:
        out = []
        for meta_path in sorted(self.sessions_dir.glob("*/session.json")):
            meta = json.loads(meta_path.read_text("utf-8"))
            out.append(
                {
                    "id": meta["id"],
                    "name": meta["name"],
                    "current_version": meta["current_version"],
                }
            )
        return out

    def find_by_name(self, name: str) -> Session | None:
        for meta in self.list_sessions():
            if meta["name"] == name:
                return self.load_session(meta["id"])
        return None

    def commit(
        self,
        session: Session,
        state: SemanticState,
        artifact: GeneratedArtifact | None = None,
        graph: RelationGraph | None = None,
        label: str = "",
    ) -> VersionRecord:
        """Append a new version. Raises NoChange when nothing new is recorded."""
        current = session.records[-1]
        diff = compute_diff(current.state, state)
        if (
            diff.is_empty()
            and state == current.state
            and artifact is None
            and graph is None
        ):
            raise NoChange("state unchanged and nothing newly attached")
        record = VersionRecord(
            version=current.version + 1,
            state=state,
            artifact=artifact,
            graph=graph,
            diff_from_parent=diff,
            label=label,
            created_at=_now(),
        )
        session.records.append(record)
        try:
            self._write_record(session, record)
            self._write_session_meta(session)
        except OSError as exc:
            session.records.pop()
            raise IoFailure(f"cannot persist record: {exc}") from exc
        return record

    def rollback(self, session: Session, version: int) -> VersionRecord:
        """Restore a past state as a new commit; history is never truncated."""
        target = session.record_at(version)
        return self.commit(session, target.state, label=f"rollback to v{version}")

    def history(self, session: Session) -> list[dict]:
        rows = []
        for record in session.records:
            changelog = (
                render_changelog(record.diff_from_parent)
                if record.diff_from_parent is not None
                else []
            )
            rows.append(
                {
                    "version": record.version,
                    "label": record.label,
                    "changelog": changelog,
                    "created_at": record.created_at,
                }
            )
        return rows

    # --- export / import -----------------------------------------------------------

    def export_session(self, session_id: str, out_path: str | Path) -> None:
        """Write a single-file bundle importable elsewhere with byte-equal records."""
        session_dir = self._session_dir(session_id)
        meta_path = session_dir / "session.json"
        if not meta_path.exists():
            raise UnknownSession(f"no session {session_id!r}")
        meta = json.loads(meta_path.read_text("utf-8"))
        records = []
        blobs: dict[str, str] = {}
        for entry in meta["versions"]:
            doc = json.loads((session_dir / f"v{entry['version']}.json").read_text("utf-8"))
            records.append(doc)
            artifact = doc.get("artifact")
            if artifact:
                digest = artifact["code_sha256"]
                blobs[digest] = base64.b64encode(self.read_blob(digest)).decode("ascii")
        bundle = {
            "format": "suif-session-bundle/v1",
            "session": meta,
            "records": records,
            "blobs": blobs,
        }
        try:
            Path(out_path).write_bytes(canonical_json_bytes(bundle))
        except OSError as exc:
            raise IoFailure(f"cannot write bundle {out_path}: {exc}") from exc

    def import_session(self, in_path: str | Path) -> Session:
        """Import a bundle; a colliding session id gets a fresh one."""
        try:
            bundle = json.loads(Path(in_path).read_text("utf-8"))
        except (OSError, ValueError) as exc:
            raise MalformedDocument(f"cannot read bundle {in_path}: {exc}") from exc
        if bundle.get("format") != "suif-session-bundle/v1":
            raise MalformedDocument("not a session bundle")
        meta = bundle["session"]
        session_id = meta["id"]
        if self._session_dir(session_id).exists():
            session_id = uuid.uuid4().hex[:12]
        for digest, encoded in bundle.get("blobs", {}).items():
            self.write_blob(base64.b64decode(encoded))
        session_dir = self._session_dir(session_id)
        try:
            session_dir.mkdir(parents=True)
            for doc in bundle["records"]:
                (session_dir / f"v{doc['version']}.json").write_bytes(
                    canonical_json_bytes(doc)
                )
            meta = dict(meta)
            meta["id"] = session_id
            (session_dir / "session.json").write_bytes(canonical_json_bytes(meta))
        except OSError as exc:
            raise IoFailure(f"cannot import bundle: {exc}") from exc
        return self.load_session(session_id)
