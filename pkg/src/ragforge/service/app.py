"""HTTP chat service: sessions, Q&A, feedback, category tagging, stats."""

from __future__ import annotations

import logging
import time
from dataclasses import asdict
from pathlib import Path

from fastapi import FastAPI, HTTPException

from ..chunking import tokens
from ..engine import RagEngine
from ..providers import ProviderError
from .models import FeedbackRecord
from .schemas import (
    Ack,
    CategoryRequest,
    FeedbackRequest,
    HealthResponse,
    MessageRequest,
    MessageResponse,
    SessionCreated,
    StatsResponse,
)
from .store import SessionStore

logger = logging.getLogger(__name__)


def create_app(engine: RagEngine, store: SessionStore, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="ragforge chat service")

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse()

    @app.post("/sessions", response_model=SessionCreated)
    def create_session() -> SessionCreated:
        return SessionCreated(session_id=store.create_session())

    @app.post("/sessions/{session_id}/messages", response_model=MessageResponse)
    def post_message(session_id: str, body: MessageRequest) -> MessageResponse:
        session = store.session(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        with store.lock_for(session_id):
            try:
                outcome = engine.ask(session, body.question)
            except ProviderError as exc:
                logger.error("provider failure on session %s: %s", session_id, exc)
                raise HTTPException(status_code=503, detail="service degraded: the language model is unavailable")
            turn_index = len(session.turns) - 1
            try:
                store.record_turn(session_id, turn_index, session.turns[turn_index], len(tokens(outcome.answer)))
            except Exception as exc:
                # A turn that was never persisted must not be reported as answered.
                session.turns.pop()
                logger.error("persistence failure on session %s: %s", session_id, exc)
                raise HTTPException(status_code=503, detail="service degraded: could not persist the conversation")
        return MessageResponse(answer=outcome.answer, sources=list(outcome.doc_ids), turn=turn_index)

    @app.post("/sessions/{session_id}/feedback", response_model=Ack)
    def post_feedback(session_id: str, body: FeedbackRequest) -> Ack:
        session = store.session(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        if len(body.per_answer_ratings) > len(session.turns):
            raise HTTPException(
                status_code=422,
                detail=f"{len(body.per_answer_ratings)} per-answer ratings for {len(session.turns)} turns",
            )
        store.add_feedback(
            FeedbackRecord(
                session_id=session_id,
                respondent_role=body.respondent_role,
                overall_rating=body.overall_rating,
                per_answer_ratings=tuple(body.per_answer_ratings),
                comment=body.comment,
                timestamp=time.time(),
            )
        )
        return Ack()

    @app.post("/sessions/{session_id}/turns/{turn}/category", response_model=Ack)
    def tag_question(session_id: str, turn: int, body: CategoryRequest) -> Ack:
        if store.session(session_id) is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        try:
            store.tag_question(session_id, turn, body.category)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"session {session_id!r} has no turn {turn}")
        return Ack()

    @app.get("/stats", response_model=StatsResponse)
    def get_stats() -> StatsResponse:
        return StatsResponse(**asdict(store.stats()))

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
