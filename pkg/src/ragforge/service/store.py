"""Append-only persistence for sessions, question log and feedback.

State lives in memory and every mutation is first appended to a line-delimited
JSON event log; replaying the log at startup rebuilds the exact state, which
makes crash recovery trivial at this traffic scale. Appends go through a
single writer lock.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from pathlib import Path

from ..engine import ChatSession, ChatTurn
from .models import (
    RATING_MAX,
    RATING_MIN,
    AnswerRating,
    FeedbackRecord,
    QuestionCategory,
    QuestionLogEntry,
    RespondentRole,
    UsageStats,
)


class StoreError(RuntimeError):
    pass


class SessionStore:
    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path is not None else None
        self._write_lock = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}
        self._sessions: dict[str, ChatSession] = {}
        self._log: list[QuestionLogEntry] = []
        self._feedback: list[FeedbackRecord] = []
        if self._path is not None and self._path.exists():
            self._replay()

    # -- event log ---------------------------------------------------------

    def _append(self, event: dict) -> None:
        if self._path is None:
            return
        line = json.dumps(event, ensure_ascii=False) + "\n"
        self._path.parent.mkdir(parents=True, exist_ok=True)
        with open(self._path, "a", encoding="utf-8") as handle:
            handle.write(line)
            handle.flush()

    def _replay(self) -> None:
        with open(self._path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    event = json.loads(line)
                    self._apply(event)
                except (json.JSONDecodeError, KeyError, ValueError) as exc:
                    raise StoreError(f"{self._path}:{lineno}: cannot replay event: {exc}") from exc

    def _apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "session":
            self._sessions[event["session_id"]] = ChatSession(session_id=event["session_id"])
        elif kind == "turn":
            session = self._sessions[event["session_id"]]
            session.turns.append(
                ChatTurn(
                    question=event["question"],
                    answer=event["answer"],
                    doc_ids=tuple(event["doc_ids"]),
                    asked_at=event["asked_at"],
                    latency_s=event["latency_s"],
                )
            )
            self._log.append(
                QuestionLogEntry(
                    session_id=event["session_id"],
                    turn=event["turn"],
                    question=event["question"],
                    doc_ids=tuple(event["doc_ids"]),
                    answer_tokens=event["answer_tokens"],
                    latency_s=event["latency_s"],
                    asked_at=event["asked_at"],
                )
            )
        elif kind == "category":
            entry = self._find_entry(event["session_id"], event["turn"])
            if entry is None:
                raise StoreError(f"category event for unknown turn {event['session_id']}/{event['turn']}")
            entry.category = QuestionCategory(event["category"])
        elif kind == "feedback":
            self._feedback.append(
                FeedbackRecord(
                    session_id=event["session_id"],
                    respondent_role=RespondentRole(event["respondent_role"]),
                    overall_rating=event["overall_rating"],
                    per_answer_ratings=tuple(AnswerRating(r) for r in event["per_answer_ratings"]),
                    comment=event.get("comment"),
                    timestamp=event["timestamp"],
                )
            )
        else:
            raise StoreError(f"unknown event type {kind!r}")

    # -- sessions ----------------------------------------------------------

    def create_session(self) -> str:
        session_id = uuid.uuid4().hex
        with self._write_lock:
            self._append({"type": "session", "session_id": session_id, "created_at": time.time()})
            self._sessions[session_id] = ChatSession(session_id=session_id)
        return session_id

    def session(self, session_id: str) -> ChatSession | None:
        return self._sessions.get(session_id)

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._write_lock:
            return self._session_locks.setdefault(session_id, threading.Lock())

    # -- log ---------------------------------------------------------------

    def record_turn(self, session_id: str, turn_index: int, turn: ChatTurn, answer_tokens: int) -> QuestionLogEntry:
        entry = QuestionLogEntry(
            session_id=session_id,
            turn=turn_index,
            question=turn.question,
            doc_ids=turn.doc_ids,
            answer_tokens=answer_tokens,
            latency_s=turn.latency_s,
            asked_at=turn.asked_at,
        )
        with self._write_lock:
            self._append(
                {
                    "type": "turn",
                    "session_id": session_id,
                    "turn": turn_index,
                    "question": turn.question,
                    "answer": turn.answer,
                    "doc_ids": list(turn.doc_ids),
                    "answer_tokens": answer_tokens,
                    "latency_s": turn.latency_s,
                    "asked_at": turn.asked_at,
                }
            )
            self._log.append(entry)
        return entry

    def _find_entry(self, session_id: str, turn_index: int) -> QuestionLogEntry | None:
        for entry in self._log:
            if entry.session_id == session_id and entry.turn == turn_index:
                return entry
        return None

    def tag_question(self, session_id: str, turn_index: int, category: QuestionCategory) -> None:
        with self._write_lock:
            entry = self._find_entry(session_id, turn_index)
            if entry is None:
                raise KeyError(f"no log entry for session {session_id!r} turn {turn_index}")
            self._append(
                {"type": "category", "session_id": session_id, "turn": turn_index, "category": category.value}
            )
            entry.category = category

    def log_entries(self) -> list[QuestionLogEntry]:
        return list(self._log)

    # -- feedback ----------------------------------------------------------

    def add_feedback(self, record: FeedbackRecord) -> None:
        with self._write_lock:
            self._append(
                {
                    "type": "feedback",
                    "session_id": record.session_id,
                    "respondent_role": record.respondent_role.value,
                    "overall_rating": record.overall_rating,
                    "per_answer_ratings": [r.value for r in record.per_answer_ratings],
                    "comment": record.comment,
                    "timestamp": record.timestamp,
                }
            )
            self._feedback.append(record)

    def feedback_records(self) -> list[FeedbackRecord]:
        return list(self._feedback)

    # -- stats -------------------------------------------------------------

    def stats(self) -> UsageStats:
        with self._write_lock:
            categories = {category.value: 0 for category in QuestionCategory}
            untagged = 0
            for entry in self._log:
                if entry.category is None:
                    untagged += 1
                else:
                    categories[entry.category.value] += 1
            ratings = {str(r): 0 for r in range(RATING_MIN, RATING_MAX + 1)}
            roles = {role.value: 0 for role in RespondentRole}
            for record in self._feedback:
                ratings[str(record.overall_rating)] += 1
                roles[record.respondent_role.value] += 1
            return UsageStats(
                total_questions=len(self._log),
                categories=categories,
                untagged=untagged,
                feedback_count=len(self._feedback),
                ratings=ratings,
                roles=roles,
            )
