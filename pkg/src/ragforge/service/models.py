"""Domain records for the chat service: categories, feedback, question log."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class QuestionCategory(str, Enum):
    GENERIC_INFORMATION = "GenericInformation"
    COURSES_INFORMATION = "CoursesInformation"
    OTHER_UNIVERSITY_RELATED = "OtherUniversityRelated"
    OFF_TOPIC = "OffTopic"
    SERVICES_AND_STRUCTURES = "ServicesAndStructures"
    TAXES_AND_SCHOLARSHIPS = "TaxesAndScholarships"
    UNIVERSITY_ENVIRONMENT = "UniversityEnvironment"


class RespondentRole(str, Enum):
    SECONDARY_SCHOOL_STUDENT = "SecondarySchoolStudent"
    UNIVERSITY_STUDENT = "UniversityStudent"
    PROFESSOR = "Professor"
    OTHER = "Other"


class AnswerRating(str, Enum):
    EXCELLENT = "Excellent"
    GOOD = "Good"
    BAD = "Bad"


UNTAGGED = "untagged"

RATING_MIN = 1
RATING_MAX = 5


@dataclass
class QuestionLogEntry:
    session_id: str
    turn: int
    question: str
    doc_ids: tuple[str, ...]
    answer_tokens: int
    latency_s: float
    asked_at: float
    category: QuestionCategory | None = None


@dataclass(frozen=True)
class FeedbackRecord:
    session_id: str
    respondent_role: RespondentRole
    overall_rating: int
    per_answer_ratings: tuple[AnswerRating, ...]
    comment: str | None
    timestamp: float

    def __post_init__(self):
        if not RATING_MIN <= self.overall_rating <= RATING_MAX:
            raise ValueError(
                f"overall_rating must be in {RATING_MIN}..{RATING_MAX}, got {self.overall_rating}"
            )


@dataclass(frozen=True)
class UsageStats:
    total_questions: int
    categories: dict[str, int]
    untagged: int
    feedback_count: int
    ratings: dict[str, int]
    roles: dict[str, int]

    @staticmethod
    def empty() -> "UsageStats":
        return UsageStats(
            total_questions=0,
            categories={category.value: 0 for category in QuestionCategory},
            untagged=0,
            feedback_count=0,
            ratings={str(r): 0 for r in range(RATING_MIN, RATING_MAX + 1)},
            roles={role.value: 0 for role in RespondentRole},
        )
