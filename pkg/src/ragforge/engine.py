"""The conversational pipeline: condense, retrieve, prompt, generate.

Two prompting modes exist. In *condensed* mode a first generation call
rewrites the conversation plus the follow-up into one standalone question,
which then drives retrieval and fills the custom prompt. In *custom-only*
mode the conversation is inlined into the custom prompt as-is and the raw
question drives retrieval.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass, field
from enum import Enum

from .prompts import (
    condense_template,
    custom_template,
    join_context,
    render_prompt,
    serialize_history,
)
from .providers import LLMProvider, ProviderError
from .retrieval import RetrievedChunk, Retriever, dedup_doc_ids

logger = logging.getLogger(__name__)


class PromptProfile(str, Enum):
    CUSTOM_ONLY = "custom"
    CONDENSED = "condensed"


@dataclass(frozen=True)
class GenerationConfig:
    temperature: float = 0.0
    max_new_tokens: int | None = None
    prompt_profile: PromptProfile = PromptProfile.CONDENSED
    sharper_profile: bool = False

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.max_new_tokens is not None and self.max_new_tokens <= 0:
            raise ValueError(f"max_new_tokens must be positive, got {self.max_new_tokens}")


@dataclass(frozen=True)
class ChatTurn:
    question: str
    answer: str
    doc_ids: tuple[str, ...]
    asked_at: float
    latency_s: float


@dataclass
class ChatSession:
    session_id: str
    turns: list[ChatTurn] = field(default_factory=list)

    def history(self) -> list[tuple[str, str]]:
        return [(turn.question, turn.answer) for turn in self.turns]


@dataclass(frozen=True)
class TurnOutcome:
    answer: str
    chunks: tuple[RetrievedChunk, ...]
    doc_ids: tuple[str, ...]

    @property
    def chunk_ids(self) -> tuple[str, ...]:
        return tuple(piece.chunk_id for piece in self.chunks)


def condense(session: ChatSession, question: str, llm: LLMProvider, sharper: bool = False) -> str:
    """Rewrite history plus follow-up into one standalone question.

    An empty history short-circuits to the question itself with no provider
    call; otherwise exactly one call is made and its output trimmed.
    """
    if not question:
        raise ValueError("question must be non-empty")
    if not session.turns:
        return question
    prompt = render_prompt(
        condense_template(sharper),
        {"chat_history": serialize_history(session.history()), "question": question},
    )
    try:
        rewritten = llm.generate(prompt, temperature=0.0)
    except Exception as exc:
        raise ProviderError(f"condensation failed for session {session.session_id!r}: {exc}") from exc
    return rewritten.strip()


def answer(
    question: str,
    session: ChatSession,
    cfg: GenerationConfig,
    retriever: Retriever,
    llm: LLMProvider,
    k: int = 4,
) -> TurnOutcome:
    """Answer one user turn and append it to the session.

    Returns the answer plus the retrieved chunk references; the session turn
    records the deduplicated parent document ids.
    """
    if not question:
        raise ValueError("question must be non-empty")
    asked_at = time.time()
    started = time.monotonic()

    if cfg.prompt_profile is PromptProfile.CONDENSED:
        retrieval_query = condense(session, question, llm, sharper=cfg.sharper_profile)
        question_binding = retrieval_query
    else:
        retrieval_query = question
        if session.turns:
            question_binding = f"{serialize_history(session.history())}\nUtente: {question}"
        else:
            question_binding = question

    chunks = tuple(retriever.search(retrieval_query, k=k))
    if not chunks:
        logger.warning("retrieval returned no context for session %s; answering without documents", session.session_id)

    prompt = render_prompt(
        custom_template(cfg.sharper_profile),
        {"question": question_binding, "context": join_context(piece.text for piece in chunks)},
    )
    try:
        reply = llm.generate(prompt, temperature=cfg.temperature, max_new_tokens=cfg.max_new_tokens)
    except Exception as exc:
        raise ProviderError(f"generation failed for session {session.session_id!r}: {exc}") from exc

    doc_ids = tuple(dedup_doc_ids(chunks))
    session.turns.append(
        ChatTurn(
            question=question,
            answer=reply,
            doc_ids=doc_ids,
            asked_at=asked_at,
            latency_s=time.monotonic() - started,
        )
    )
    return TurnOutcome(answer=reply, chunks=chunks, doc_ids=doc_ids)


class RagEngine:
    """Binds a retriever, a provider and a config; serializes work per session."""

    def __init__(self, retriever: Retriever, llm: LLMProvider, cfg: GenerationConfig, k: int = 4):
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        self.retriever = retriever
        self.llm = llm
        self.cfg = cfg
        self.k = k
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def ask(self, session: ChatSession, question: str) -> TurnOutcome:
        with self._lock_for(session.session_id):
            return answer(question, session, self.cfg, self.retriever, self.llm, k=self.k)
