"""Request/response bodies of the HTTP interface."""

from __future__ import annotations

from pydantic import BaseModel, Field

from .models import RATING_MAX, RATING_MIN, AnswerRating, QuestionCategory, RespondentRole


class SessionCreated(BaseModel):
    session_id: str


class MessageRequest(BaseModel):
    question: str = Field(min_length=1)


class MessageResponse(BaseModel):
    answer: str
    sources: list[str]
    turn: int


class FeedbackRequest(BaseModel):
    respondent_role: RespondentRole
    overall_rating: int = Field(ge=RATING_MIN, le=RATING_MAX)
    per_answer_ratings: list[AnswerRating] = Field(default_factory=list)
    comment: str | None = None


class CategoryRequest(BaseModel):
    category: QuestionCategory


class Ack(BaseModel):
    status: str = "ok"


class StatsResponse(BaseModel):
    total_questions: int
    categories: dict[str, int]
    untagged: int
    feedback_count: int
    ratings: dict[str, int]
    roles: dict[str, int]


class HealthResponse(BaseModel):
    status: str = "ok"
