"""Single chokepoint for all model calls.

Three modes:

* ``live``     — real HTTP provider, optional recording of fixtures
* ``recorded`` — replay fixtures keyed by canonical request hash, no network
* ``mock``     — deterministic in-process behavior, no network

Every structured payload is validated against its registered JSON schema
before it crosses this boundary; callers never see raw invalid payloads.
"""

from __future__ import annotations

import base64
import hashlib
import os
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

import jsonschema

from .errors import (
    ConfigInvalid,
    EmptyGeneration,
    EmptyPrompt,
    FixtureMissing,
    IoFailure,
    ProviderUnavailable,
    SchemaViolation,
)
from .model import (
    COMPONENT_ATTRS,
    FIXED_LEVELS,
    LEVEL_ATTRS,
    LEVEL_DISPLAY,
    Level,
    canonical_json_bytes,
    display_name,
)
from .schemas import DEFAULT_SCHEMAS

import json


class Task(str, Enum):
    PARSE = "parse"
    ANALYZE_ARTIFACT = "analyze_artifact"
    ANALYZE_RELATIONS = "analyze_relations"


class ProviderMode(str, Enum):
    LIVE = "live"
    RECORDED = "recorded"
    MOCK = "mock"


@dataclass(frozen=True)
class Attachment:
    media_type: str
    data: bytes


@dataclass(frozen=True)
class StructuredRequest:
    task: Task
    system_instructions: str
    user_payload: str
    schema_id: str
    attachments: tuple[Attachment, ...] = ()

    def __post_init__(self):
        if self.attachments and self.task is not Task.ANALYZE_ARTIFACT:
            raise ValueError("attachments are only legal for analyze_artifact requests")


@dataclass(frozen=True)
class GenerationRequest:
    prompt_document: str
    previous_code: str | None = None
    diff_summary: str | None = None

    def __post_init__(self):
        if not self.prompt_document:
            raise EmptyPrompt("generation requires a non-empty prompt document")
        if self.diff_summary is not None and self.previous_code is None:
            raise ValueError("diff_summary requires previous_code as a reference")


class TransportError(Exception):
    """Transient transport failure; the gateway retries these."""


# --- canonical hashing -------------------------------------------------------

def request_document(req) -> dict:
    """Canonical form of a request: fixed field order, attachments by digest."""
    if isinstance(req, StructuredRequest):
        return {
            "kind": "structured",
            "task": req.task.value,
            "schema_id": req.schema_id,
            "system_instructions": req.system_instructions,
            "user_payload": req.user_payload,
            "attachments": [
                {
                    "media_type": a.media_type,
                    "sha256": hashlib.sha256(a.data).hexdigest(),
                }
                for a in req.attachments
            ],
        }
    if isinstance(req, GenerationRequest):
        return {
            "kind": "generation",
            "prompt_document": req.prompt_document,
            "previous_code": req.previous_code,
            "diff_summary": req.diff_summary,
        }
    raise TypeError(f"not a gateway request: {type(req).__name__}")


def canonical_request_hash(req) -> str:
    return hashlib.sha256(canonical_json_bytes(request_document(req))).hexdigest()


def _fixture_bucket(req) -> str:
    return req.schema_id if isinstance(req, StructuredRequest) else "gen"


def fixture_path(fixture_dir: Path, req) -> Path:
    return Path(fixture_dir) / _fixture_bucket(req) / f"{canonical_request_hash(req)}.json"


def write_fixture(fixture_dir: Path, req, response) -> Path:
    """Persist a fixture atomically (write-temp-then-rename)."""
    path = fixture_path(fixture_dir, req)
    doc = {
        "request_canonical": request_document(req),
        "response": response,
        "recorded_at": datetime.now(timezone.utc).isoformat(),
    }
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.parent / f".{path.name}.tmp"
        tmp.write_bytes(canonical_json_bytes(doc))
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write fixture {path}: {exc}") from exc
    return path


# --- mock provider -----------------------------------------------------------

MOCK_HEADER = "<!-- mock-ui v1 -->"
MOCK_FOOTER = "<!-- /mock-ui -->"

_HEADING_TO_LEVEL = {LEVEL_DISPLAY[level]: level for level in Level}
_DISPLAY_TO_ATTR = {
    level: {display_name(a): a for a in LEVEL_ATTRS[level]} for level in Level
}


def _sections_from_prompt(markdown: str) -> list[tuple[str, list[str]]]:
    """Recover (marker key, content lines) sections from a compiled prompt.

    Fixed-level bullets become one section each; every component subsection
    becomes one section whose lines are ``attr: text`` pairs. Unknown headings
    (constraints, instructions) are ignored.
    """
    sections: list[tuple[str, list[str]]] = []
    level: Level | None = None
    component: list[str] | None = None
    for line in markdown.splitlines():
        if line.startswith("## "):
            level = _HEADING_TO_LEVEL.get(line[3:].strip())
            component = None
        elif line.startswith("### ") and level is Level.COMPONENT:
            component = []
            sections.append((f"component.{line[4:].strip()}", component))
        elif line.startswith("- ") and level is not None and ": " in line:
            display, text = line[2:].split(": ", 1)
            attr = _DISPLAY_TO_ATTR[level].get(display)
            if attr is None or not text:
                continue
            if level is Level.COMPONENT:
                if component is not None:
                    component.append(f"{attr}: {text}")
            else:
                sections.append((f"{level.value}.{attr}", [text]))
    return sections


def mock_generate(prompt_document: str) -> str:
    """Deterministic sectioned template; section content is the slot text
    verbatim, so analysis can invert it."""
    parts = [MOCK_HEADER]
    for key, lines in _sections_from_prompt(prompt_document):
        parts.append(f"<!-- sem:{key} -->")
        parts.extend(lines)
    parts.append(MOCK_FOOTER)
    return "\n".join(parts) + "\n"


def split_marker_blocks(code: str) -> dict[str, str]:
    """Map of section marker key to its content block."""
    blocks: dict[str, str] = {}
    key: str | None = None
    lines: list[str] = []
    for line in code.splitlines():
        if line.startswith("<!-- sem:") and line.endswith(" -->"):
            if key is not None:
                blocks[key] = "\n".join(lines)
            key = line[len("<!-- sem:"):-len(" -->")]
            lines = []
        elif line == MOCK_FOOTER:
            if key is not None:
                blocks[key] = "\n".join(lines)
            key = None
        elif key is not None:
            lines.append(line)
    if key is not None:
        blocks[key] = "\n".join(lines)
    return blocks


def _mock_extract(code: str) -> dict:
    """Invert ``mock_generate``: rebuild a semantics payload from markers."""
    payload: dict = {}
    components: list[dict] = []
    for key, block in split_marker_blocks(code).items():
        if key.startswith("component."):
            comp: dict = {"name": key[len("component."):]}
            for line in block.splitlines():
                if ": " not in line:
                    continue
                attr, text = line.split(": ", 1)
                if attr in COMPONENT_ATTRS and text:
                    comp[attr] = text
            components.append(comp)
        elif "." in key:
            level_name, attr = key.split(".", 1)
            try:
                level = Level(level_name)
            except ValueError:
                continue
            if level in FIXED_LEVELS and attr in LEVEL_ATTRS[level] and block:
                payload.setdefault(level_name, {})[attr] = block
    if components:
        payload["components"] = components
    return payload


def _mock_structured(req: StructuredRequest) -> dict:
    if req.task is Task.PARSE:
        payload: dict = {"residue": ""}
        if req.user_payload:
            payload = {"product": {"description": req.user_payload}, "residue": ""}
        return payload
    if req.task is Task.ANALYZE_ARTIFACT:
        return _mock_extract(req.user_payload)
    return {"edges": []}


# --- live transport ----------------------------------------------------------

def _wire_document(req) -> dict:
    doc = request_document(req)
    if isinstance(req, StructuredRequest):
        doc["attachments"] = [
            {
                "media_type": a.media_type,
                "data": base64.b64encode(a.data).decode("ascii"),
            }
            for a in req.attachments
        ]
    return doc


class HttpTransport:
    """Minimal JSON-over-HTTP provider protocol.

    POST ``{endpoint}/structured`` -> ``{"payload": <object>}``;
    POST ``{endpoint}/generate``   -> ``{"code": <string>}``.
    """

    def __init__(self, endpoint: str, credentials: str | None = None, timeout: float = 120.0):
        import httpx

        self._client = httpx.Client(
            base_url=endpoint,
            timeout=timeout,
            headers={"Authorization": f"Bearer {credentials}"} if credentials else {},
        )
        self._httpx = httpx

    def _post(self, path: str, doc: dict) -> dict:
        try:
            response = self._client.post(path, json=doc)
        except self._httpx.HTTPError as exc:
            raise TransportError(str(exc)) from exc
        if response.status_code >= 500:
            raise TransportError(f"provider returned {response.status_code}")
        if response.status_code >= 400:
            raise ProviderUnavailable(
                f"provider rejected request: {response.status_code} {response.text[:200]}"
            )
        return response.json()

    def structured(self, doc: dict):
        return self._post("/structured", doc).get("payload")

    def generate(self, doc: dict) -> str:
        return self._post("/generate", doc).get("code", "")


class ProviderGateway:
    """Schema-enforcing facade over live, recorded, and mock providers."""

    def __init__(
        self,
        mode: ProviderMode | str = ProviderMode.MOCK,
        fixture_dir: str | Path | None = None,
        credentials: str | None = None,
        endpoint: str | None = None,
        timeout: float = 120.0,
        transport=None,
        recording: bool = False,
    ):
        self.mode = ProviderMode(mode)
        self.fixture_dir = Path(fixture_dir) if fixture_dir else None
        self.recording = recording
        self._schemas = dict(DEFAULT_SCHEMAS)
        self._transport = transport
        self._endpoint = endpoint
        self._credentials = credentials
        self.timeout = timeout
        if self.mode is ProviderMode.RECORDED and self.fixture_dir is None:
            raise ConfigInvalid("recorded mode requires a fixture_dir")
        if self.recording and self.fixture_dir is None:
            raise ConfigInvalid("recording requires a fixture_dir")

    def register_schema(self, schema_id: str, schema: dict) -> None:
        self._schemas[schema_id] = schema

    def _schema(self, schema_id: str) -> dict:
        try:
            return self._schemas[schema_id]
        except KeyError:
            raise ConfigInvalid(f"schema {schema_id!r} is not registered") from None

    def _validated(self, payload, schema_id: str):
        validator = jsonschema.Draft202012Validator(self._schema(schema_id))
        violations = [
            f"{error.json_path}: {error.message}"
            for error in sorted(validator.iter_errors(payload), key=str)
        ]
        if violations:
            raise SchemaViolation(
                f"provider payload violates schema {schema_id!r}", violations=violations
            )
        return payload

    def _transport_or_fail(self):
        if self._transport is None:
            if not self._endpoint:
                raise ProviderUnavailable(
                    "live mode needs an endpoint (SUIF_PROVIDER_URL) or an injected transport"
                )
            self._transport = HttpTransport(self._endpoint, self._credentials, self.timeout)
        return self._transport

    def _call_live(self, call, doc):
        last: Exception | None = None
        for attempt in range(3):  # 1 try + at most 2 retries on transient errors
            try:
                return call(doc)
            except TransportError as exc:
                last = exc
                if attempt < 2:
                    time.sleep(0.05 * (attempt + 1))
        raise ProviderUnavailable(f"provider unreachable after retries: {last}")

    def _read_fixture(self, req):
        path = fixture_path(self.fixture_dir, req)
        if not path.exists():
            digest = canonical_request_hash(req)
            raise FixtureMissing(
                f"no recorded fixture for request {digest}", request_hash=digest
            )
        try:
            doc = json.loads(path.read_text("utf-8"))
        except (OSError, ValueError) as exc:
            raise IoFailure(f"cannot read fixture {path}: {exc}") from exc
        return doc.get("response")

    def complete_structured(self, req: StructuredRequest):
        """Run a structured-completion task; the payload is schema-validated
        before it is returned."""
        self._schema(req.schema_id)  # registered-before-use
        if self.mode is ProviderMode.MOCK:
            payload = _mock_structured(req)
        elif self.mode is ProviderMode.RECORDED:
            payload = self._read_fixture(req)
        else:
            transport = self._transport_or_fail()
            payload = self._call_live(transport.structured, _wire_document(req))
            validated = self._validated(payload, req.schema_id)
            if self.recording:
                self.record(req, validated)
            return validated
        return self._validated(payload, req.schema_id)

    def generate_code(self, req: GenerationRequest) -> str:
        """Produce UI component source for a compiled prompt document."""
        if self.mode is ProviderMode.MOCK:
            return mock_generate(req.prompt_document)
        if self.mode is ProviderMode.RECORDED:
            code = self._read_fixture(req)
            if not isinstance(code, str) or not code:
                raise EmptyGeneration("recorded generation fixture is blank")
            return code
        transport = self._transport_or_fail()
        code = self._call_live(transport.generate, _wire_document(req))
        if not isinstance(code, str) or not code:
            raise EmptyGeneration("provider returned a blank generation")
        if self.recording:
            self.record(req, code)
        return code

    def record(self, req, response) -> None:
        """Persist a response so recorded mode can replay it byte-exactly."""
        if self.mode is not ProviderMode.LIVE or not self.recording:
            raise ConfigInvalid("record() requires live mode with recording enabled")
        write_fixture(self.fixture_dir, req, response)
