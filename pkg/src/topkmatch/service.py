"""HTTP+JSON API over live elicitation sessions.

Routes:
  POST /sessions                                create (201)
  GET  /sessions/{id}                           status snapshot
  POST /sessions/{id}/start                     coordinator start
  GET  /sessions/{id}/agents/{token}/query      pending query (poll)
  POST /sessions/{id}/agents/{token}/answer     submit next-best answer
  GET  /sessions/{id}/result                    final matching

200/201 success, 400 protocol violation, 404 unknown ids, 409 out-of-turn
answer.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .core import InvalidInputError
from .elicitation import ProtocolError
from .session import Session


class CreateSessionRequest(BaseModel):
    n: int = Field(ge=1, le=500)
    goal: str = "npo"
    agents: list[str] | None = None


class AnswerRequest(BaseModel):
    object: str


def create_app(log_dir: str | None = None, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="topkmatch elicitation service")
    sessions: dict[str, Session] = {}
    log_path = Path(log_dir) if log_dir else None

    if log_path is not None and log_path.is_dir():
        for f in sorted(log_path.glob("*.jsonl")):
            try:
                session = Session.replay(f)
            except Exception:
                continue  # damaged log; skip rather than refuse to boot
            sessions[session.id] = session

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, "unknown session")
        return session

    def get_agent(session: Session, token: str) -> int:
        try:
            return session.agent_for_token(token)
        except KeyError:
            raise HTTPException(404, "unknown agent token") from None

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        try:
            session = Session.create(req.n, req.goal, req.agents, log_path)
        except InvalidInputError as e:
            raise HTTPException(400, str(e)) from None
        sessions[session.id] = session
        return {
            "id": session.id,
            "join_tokens": {
                name: tok
                for name, tok in zip(session.agent_names, session.tokens)
            },
            "objects": list(session.object_names),
        }

    @app.get("/sessions/{session_id}")
    def status(session_id: str):
        return get_session(session_id).snapshot()

    @app.post("/sessions/{session_id}/start")
    def start(session_id: str):
        session = get_session(session_id)
        try:
            session.start()
        except ProtocolError as e:
            raise HTTPException(400, str(e)) from None
        return {"state": session.state}

    @app.get("/sessions/{session_id}/agents/{token}/query")
    def pending_query(session_id: str, token: str):
        session = get_session(session_id)
        get_agent(session, token)
        if session.state in ("registering", "eliciting"):
            session.join(token)  # polling implies presence
        position = session.pending_query(token)
        agent = session.agent_for_token(token)
        revealed = [
            session.object_names[o] for o in session.engine.prefs[agent]
        ]
        return {
            "state": session.state,
            "pending": (
                {"position": position} if position is not None else None
            ),
            "objects": list(session.object_names),
            "revealed": revealed,
            "assigned": (
                session.snapshot()["result"].get(session.agent_names[agent])
                if session.state == "done"
                else None
            ),
        }

    @app.post("/sessions/{session_id}/agents/{token}/answer")
    def answer(session_id: str, token: str, req: AnswerRequest):
        session = get_session(session_id)
        agent = get_agent(session, token)
        if session.state != "eliciting" or agent not in session.pending:
            raise HTTPException(409, "no pending query for this agent")
        try:
            session.submit(token, req.object)
        except ProtocolError as e:
            raise HTTPException(400, str(e)) from None
        return {"ok": True, "state": session.state}

    @app.get("/sessions/{session_id}/result")
    def result(session_id: str):
        session = get_session(session_id)
        if session.state != "done":
            raise HTTPException(400, f"session is {session.state}")
        snap = session.snapshot()
        return {
            "assignment": snap["result"],
            "total_queries": snap["total_queries"],
            "k": snap["k"],
        }

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True))

    return app
