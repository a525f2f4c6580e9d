"""HTTP/JSON API around the dialogue pipeline.

Endpoints:
    POST /api/sessions                    create a session, get the greeting
    GET  /api/sessions/{id}               session state summary
    POST /api/sessions/{id}/messages      apply one user turn
    GET  /api/sessions/{id}/artifacts     file list, or a zip with ?format=zip
    GET  /api/health

Per-session turns are serialized by an in-process lock; distinct sessions are
independent. All error bodies carry {"code", "message"}.
"""

from __future__ import annotations

import io
import zipfile
from threading import Lock

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import __version__
from .dialogue import BotTurn, Phase, start, step
from .serializer import serialize
from .store import FileSessionStore, MemorySessionStore, Session
from .validation import validate

DEFAULT_PORT = 8080


class MessageIn(BaseModel):
    text: str


def _draft_text(session: Session) -> str:
    draft = session.state.draft
    return serialize(draft) if draft.contract.is_complete else ""


def _issue_list(session: Session) -> list[dict[str, str]]:
    return [i.to_dict() for i in validate(session.state.draft)]


def _turn_payload(session: Session, turn: BotTurn) -> dict:
    return {
        "sessionId": session.id,
        "prompt": turn.prompt,
        "quickReplies": list(turn.quick_replies) if turn.quick_replies else None,
        "phase": session.state.phase.value,
        "draft": _draft_text(session),
        "issues": _issue_list(session),
        "done": session.state.phase is Phase.DONE,
        "artifacts": [a.rel_path for a in session.artifacts] if session.artifacts else None,
    }


def _error(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "message": message})


def create_app(
    store: FileSessionStore | MemorySessionStore | None = None,
    cors_origin: str = "*",
    web_dir: str | None = None,
) -> FastAPI:
    store = store if store is not None else MemorySessionStore()
    app = FastAPI(title="icb session service", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[cors_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    locks: dict[str, Lock] = {}
    locks_guard = Lock()

    def lock_for(session_id: str) -> Lock:
        with locks_guard:
            return locks.setdefault(session_id, Lock())

    def load_session(session_id: str) -> Session:
        session = store.get(session_id)
        if session is None:
            raise _error(404, "unknown_session", f"no session {session_id!r}")
        return session

    @app.exception_handler(HTTPException)
    async def http_error(_request: Request, exc: HTTPException) -> JSONResponse:
        detail = exc.detail
        if not isinstance(detail, dict):
            detail = {"code": "error", "message": str(detail)}
        return JSONResponse(status_code=exc.status_code, content=detail)

    @app.exception_handler(RequestValidationError)
    async def validation_error(_request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content={"code": "invalid_request", "message": str(exc.errors()[:1])},
        )

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/api/sessions", status_code=201)
    def create_session() -> dict:
        state, turn = start()
        session = Session.new(state)
        store.put(session)
        return _turn_payload(session, turn)

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        session = load_session(session_id)
        return {
            "sessionId": session.id,
            "phase": session.state.phase.value,
            "draft": _draft_text(session),
            "issues": _issue_list(session),
            "transcript": [list(t) for t in session.state.transcript],
            "createdAt": session.created_at,
            "updatedAt": session.updated_at,
            "done": session.state.phase is Phase.DONE,
            "artifacts": [a.rel_path for a in session.artifacts] if session.artifacts else None,
        }

    @app.post("/api/sessions/{session_id}/messages")
    def post_message(session_id: str, body: MessageIn) -> dict:
        if not body.text.strip():
            raise _error(422, "empty_message", "message text must not be empty")
        with lock_for(session_id):
            session = load_session(session_id)
            if session.state.phase is Phase.DONE:
                raise _error(409, "session_done", "this conversation is finished")
            state, turn = step(session.state, body.text)
            session = session.advanced(state, turn.artifact_offer)
            store.put(session)
        return _turn_payload(session, turn)

    @app.get("/api/sessions/{session_id}/artifacts")
    def get_artifacts(session_id: str, format: str | None = None) -> Response:
        session = load_session(session_id)
        if session.state.phase not in (Phase.GENERATE, Phase.DONE) or not session.artifacts:
            raise _error(409, "not_generated", "artifacts have not been generated yet")
        if format == "zip":
            buffer = io.BytesIO()
            with zipfile.ZipFile(buffer, "w", zipfile.ZIP_DEFLATED) as archive:
                for artifact in session.artifacts:
                    archive.writestr(artifact.rel_path, artifact.content)
            return Response(
                content=buffer.getvalue(),
                media_type="application/zip",
                headers={"Content-Disposition": 'attachment; filename="artifacts.zip"'},
            )
        return JSONResponse(content={"files": [a.to_dict() for a in session.artifacts]})

    if web_dir:
        app.mount("/", StaticFiles(directory=web_dir, html=True), name="webchat")

    return app
