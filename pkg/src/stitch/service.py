"""HTTP surface over the tutoring engine.

Endpoints mirror the session operations one to one; bodies are JSON except
project uploads: session creation takes multipart form data (teacher and
student containers plus an optional description) and revision upload takes
the raw container bytes. Multipart parsing is done here with the stdlib
email parser to stay dependency-light.
"""

from __future__ import annotations

from email.parser import BytesParser
from email.policy import HTTP as HTTP_POLICY

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import llm
from .model import StitchError
from .repair import AnchorNotFound, ConflictingEntity, UnsupportedItem
from .session import (
    COMPLETE,
    SUMMATIVE_MESSAGE,
    SessionComplete,
    SessionLoadError,
    SessionNotFound,
    SessionState,
    StaleHint,
    TutorEngine,
)

_ERROR_STATUS = {
    SessionNotFound: 404,
    SessionComplete: 409,
    StaleHint: 409,
    AnchorNotFound: 409,
    ConflictingEntity: 409,
    UnsupportedItem: 409,
    llm.EmptyQuestion: 400,
    SessionLoadError: 422,
}


def parse_multipart(body: bytes, content_type: str) -> dict[str, bytes | str]:
    """Minimal multipart/form-data parser: file parts come back as bytes,
    plain fields as str."""
    header = f"Content-Type: {content_type}\r\nMIME-Version: 1.0\r\n\r\n".encode()
    message = BytesParser(policy=HTTP_POLICY).parsebytes(header + body)
    parts: dict[str, bytes | str] = {}
    if not message.is_multipart():
        return parts
    for part in message.iter_parts():
        name = part.get_param("name", header="content-disposition")
        if not name:
            continue
        payload = part.get_payload(decode=True) or b""
        if part.get_filename():
            parts[str(name)] = payload
        else:
            parts[str(name)] = payload.decode("utf-8", errors="replace")
    return parts


def _report_payload(state: SessionState) -> dict:
    payload = {
        "sessionId": state.session_id,
        "revision": state.report_revision,
        "status": state.status,
        "report": state.report.to_json(),
    }
    if state.status == COMPLETE:
        payload["summativeMessage"] = SUMMATIVE_MESSAGE
    return payload


def create_app(engine: TutorEngine | None = None) -> FastAPI:
    engine = engine or TutorEngine()
    app = FastAPI(title="stitch tutoring service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(StitchError)
    async def stitch_error_handler(_request: Request, exc: StitchError):
        status = next(
            (code for cls, code in _ERROR_STATUS.items() if isinstance(exc, cls)), 422
        )
        return JSONResponse(
            status_code=status, content={"error": type(exc).__name__, "detail": str(exc)}
        )

    @app.post("/sessions")
    async def create_session(request: Request):
        content_type = request.headers.get("content-type", "")
        if "multipart/form-data" not in content_type:
            return JSONResponse(
                status_code=415,
                content={"error": "UnsupportedMediaType", "detail": "expected multipart/form-data"},
            )
        parts = parse_multipart(await request.body(), content_type)
        teacher = parts.get("teacher")
        student = parts.get("student")
        if teacher is None or student is None:
            return JSONResponse(
                status_code=422,
                content={"error": "MissingPart", "detail": "both teacher and student parts required"},
            )
        description = parts.get("description")
        state = engine.create_session(
            teacher, student, description if isinstance(description, str) else None
        )
        return _report_payload(state)

    @app.get("/sessions/{session_id}/hint")
    async def get_hint(session_id: str):
        return engine.next_hint(session_id).to_json()

    @app.post("/sessions/{session_id}/apply")
    async def apply_fix(session_id: str, body: dict):
        hint_id = str(body.get("hintId", ""))
        state = engine.apply_fix(session_id, hint_id)
        return _report_payload(state)

    @app.put("/sessions/{session_id}/project")
    async def submit_revision(session_id: str, request: Request):
        container = await request.body()
        state = engine.submit_revision(session_id, container)
        return _report_payload(state)

    @app.post("/sessions/{session_id}/chat")
    async def chat(session_id: str, body: dict):
        reply = engine.chat(session_id, str(body.get("question", "")))
        return {"reply": reply}

    @app.get("/sessions/{session_id}/report")
    async def get_report(session_id: str):
        return _report_payload(engine.get_report(session_id))

    return app
