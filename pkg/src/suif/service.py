"""HTTP facade over the engine: REST endpoints plus a polling job registry.

Provider-bound phases (parse, generate, analyze, relations) run as jobs so the
UI stays responsive during model calls: the POST returns a job id immediately
and GET /jobs/:id reports pending/done/failed.
"""

from __future__ import annotations

import base64
import threading
import uuid

from fastapi import FastAPI, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .engine import MutationResult, ServiceConfig, StudioEngine
from .errors import SuifError
from .model import format_path, state_to_document
from .relations import graph_to_document
from .store import SessionStore

_STATUS_BY_CODE = {
    "UNKNOWN_SESSION": 404,
    "UNKNOWN_VERSION": 404,
    "NO_CHANGE": 409,
    "SLOT_OCCUPIED": 409,
    "DUPLICATE_NAME": 409,
    "PROVIDER_UNAVAILABLE": 502,
    "FIXTURE_MISSING": 502,
    "SCHEMA_VIOLATION": 502,
    "EMPTY_GENERATION": 502,
    "IO_FAILURE": 500,
}


class JobRegistry:
    """In-process job table with thread workers."""

    def __init__(self):
        self._jobs: dict[str, dict] = {}
        self._lock = threading.Lock()

    def submit(self, fn) -> str:
        job_id = uuid.uuid4().hex[:12]
        with self._lock:
            self._jobs[job_id] = {"status": "pending"}

        def run():
            try:
                result = fn()
            except SuifError as exc:
                with self._lock:
                    self._jobs[job_id] = {
                        "status": "failed",
                        "error": {"code": exc.code, "message": str(exc)},
                    }
            except Exception as exc:  # keep the job table consistent on bugs
                with self._lock:
                    self._jobs[job_id] = {
                        "status": "failed",
                        "error": {"code": "INTERNAL", "message": str(exc)},
                    }
            else:
                with self._lock:
                    self._jobs[job_id] = {"status": "done", "result": result}

        threading.Thread(target=run, daemon=True).start()
        return job_id

    def get(self, job_id: str) -> dict | None:
        with self._lock:
            return self._jobs.get(job_id)


class CreateSessionBody(BaseModel):
    name: str


class PatchSemanticsBody(BaseModel):
    path: str
    text: str | None = None


class ParseBody(BaseModel):
    text: str


class AnalyzeBody(BaseModel):
    screenshot_base64: str | None = None


class RelationsBody(BaseModel):
    pass


class GenerateBody(BaseModel):
    pass


class AcceptBody(BaseModel):
    edge: dict


class RollbackBody(BaseModel):
    version: int


def create_app(config: ServiceConfig, gateway=None) -> FastAPI:
    config.validate()
    store = SessionStore(config.data_dir)
    engine = StudioEngine(
        store, gateway or config.build_gateway(), config.constraints_text
    )
    jobs = JobRegistry()

    app = FastAPI(title="suif", version="0.1.0")
    app.state.engine = engine
    app.state.jobs = jobs
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(SuifError)
    async def on_domain_error(request, exc: SuifError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(
            status_code=status,
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    def mutation(result: MutationResult) -> dict:
        return result.to_document()

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        session = engine.create_session(body.name)
        return {"id": session.id}

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": store.list_sessions()}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = engine.session(session_id)
        return {
            "id": session.id,
            "name": session.name,
            "version": session.current_version,
            "state": state_to_document(session.current_state),
        }

    @app.patch("/sessions/{session_id}/semantics")
    def patch_semantics(session_id: str, body: PatchSemanticsBody):
        return mutation(engine.patch_slot(session_id, body.path, body.text))

    @app.post("/sessions/{session_id}/parse")
    def start_parse(session_id: str, body: ParseBody):
        engine.session(session_id)  # 404 before the job is queued
        job_id = jobs.submit(lambda: mutation(engine.run_parse(session_id, body.text)))
        return {"job_id": job_id}

    @app.post("/sessions/{session_id}/generate")
    def start_generate(session_id: str, body: GenerateBody | None = None):
        engine.session(session_id)
        job_id = jobs.submit(lambda: mutation(engine.run_generate(session_id)))
        return {"job_id": job_id}

    @app.post("/sessions/{session_id}/analyze")
    def start_analyze(session_id: str, body: AnalyzeBody | None = None):
        engine.session(session_id)
        screenshot = None
        if body and body.screenshot_base64:
            screenshot = base64.b64decode(body.screenshot_base64)
        job_id = jobs.submit(lambda: mutation(engine.run_analyze(session_id, screenshot)))
        return {"job_id": job_id}

    @app.post("/sessions/{session_id}/relations")
    def start_relations(session_id: str, body: RelationsBody | None = None):
        engine.session(session_id)
        job_id = jobs.submit(lambda: mutation(engine.run_relations(session_id)))
        return {"job_id": job_id}

    @app.post("/sessions/{session_id}/accept")
    def accept(session_id: str, body: AcceptBody):
        return mutation(engine.accept_edge(session_id, body.edge))

    @app.post("/sessions/{session_id}/rollback")
    def rollback(session_id: str, body: RollbackBody):
        return mutation(engine.rollback(session_id, body.version))

    @app.get("/sessions/{session_id}/history")
    def history(session_id: str):
        session = engine.session(session_id)
        return {"rows": store.history(session)}

    @app.get("/sessions/{session_id}/graph/current")
    def current_graph(session_id: str):
        session = engine.session(session_id)
        graph = session.current_graph()
        if graph is None:
            return JSONResponse(
                status_code=404,
                content={"error": {"code": "NO_GRAPH", "message": "no graph yet"}},
            )
        subject_state = session.record_at(
            min(graph.subject_version, session.current_version)
        ).state
        return graph_to_document(graph, subject_state)

    @app.get("/sessions/{session_id}/artifact/current")
    def current_artifact(session_id: str):
        session = engine.session(session_id)
        artifact = session.current_artifact()
        if artifact is None:
            return JSONResponse(
                status_code=404,
                content={"error": {"code": "NO_ARTIFACT", "message": "no artifact yet"}},
            )
        return Response(content=artifact.code, media_type="text/html; charset=utf-8")

    @app.get("/sessions/{session_id}/empty")
    def empty_slots(session_id: str):
        from .model import list_empty_attributes

        session = engine.session(session_id)
        state = session.current_state
        return {"paths": [format_path(state, p) for p in list_empty_attributes(state)]}

    @app.get("/jobs/{job_id}")
    def job_status(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            return JSONResponse(
                status_code=404,
                content={"error": {"code": "UNKNOWN_JOB", "message": "no such job"}},
            )
        return job

    return app


def serve(config: ServiceConfig, gateway=None) -> None:
    """Run the service until interrupted."""
    import uvicorn

    from .errors import BindFailure

    app = create_app(config, gateway)
    host, _, port = config.bind_address.partition(":")
    try:
        uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8787), log_level="info")
    except OSError as exc:
        raise BindFailure(f"cannot bind {config.bind_address}: {exc}") from exc
