"""HTTP chat service built on the retrieval engine."""

from .app import create_app
from .models import (
    AnswerRating,
    FeedbackRecord,
    QuestionCategory,
    QuestionLogEntry,
    RespondentRole,
    UsageStats,
)
from .store import SessionStore, StoreError

__all__ = [
    "create_app",
    "AnswerRating",
    "FeedbackRecord",
    "QuestionCategory",
    "QuestionLogEntry",
    "RespondentRole",
    "UsageStats",
    "SessionStore",
    "StoreError",
]
