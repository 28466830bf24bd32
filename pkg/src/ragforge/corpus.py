"""Course corpus construction: document variants, QA pair generation, exports.

The corpus has two sections. Education documents are derived from structured
course records: one *details* document and one *course outline* document per
course, where the outline comes in three renderings (the ``clear`` variant
omits class objectives, ``full`` puts each class's objectives in its own
document, ``emb`` appends them to the outline itself). Future-students
documents are free-form info pages that pass through every variant unchanged.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Protocol

from .fileio import atomic_write_text, read_jsonl, write_jsonl


class Level(str, Enum):
    BACHELOR = "Bachelor"
    MASTER = "Master"


class Section(str, Enum):
    EDUCATION = "Education"
    FUTURE_STUDENTS = "FutureStudents"


class DocKind(str, Enum):
    DETAILS = "Details"
    OUTLINE = "Outline"
    CLASS_OBJECTIVES = "ClassObjectives"
    INFO = "Info"


class Variant(str, Enum):
    CLEAR = "clear"
    FULL = "full"
    EMB = "emb"


class PairOrigin(str, Enum):
    AUTO_DETAILS = "AutoDetails"
    AUTO_OUTLINE = "AutoOutline"
    FAQ_EXTRACTED = "FaqExtracted"
    MANUAL = "Manual"


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class ClassRecord:
    class_name: str
    credits: int
    professor: str
    period: str
    sector: str
    year: int
    objectives: str

    def __post_init__(self):
        if self.credits < 0:
            raise CorpusError(f"class {self.class_name!r}: credits must be non-negative")
        if self.year < 1:
            raise CorpusError(f"class {self.class_name!r}: year must be >= 1")


@dataclass(frozen=True)
class CourseRecord:
    course_id: str
    name: str
    level: Level
    department: str
    curriculum: str
    description: str
    classes: tuple[ClassRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))

    @property
    def display_name(self) -> str:
        if self.curriculum:
            return f"{self.name}, curriculum {self.curriculum}"
        return self.name


@dataclass(frozen=True)
class RawDocument:
    doc_id: str
    section: Section
    kind: DocKind
    text: str
    source_url: str = ""

    def __post_init__(self):
        if not self.text:
            raise CorpusError(f"document {self.doc_id!r}: text must be non-empty")


@dataclass(frozen=True)
class FineTuneExample:
    """One (system prompt, question, answer) training triple.

    ``validation_eligible`` flags future-students pairs that the validation
    split may claim; it is carried in memory only and is not part of the
    export format.
    """

    system_prompt: str
    question: str
    answer: str
    origin: PairOrigin
    source_doc_id: str
    validation_eligible: bool = False

    def __post_init__(self):
        for label, value in (("system_prompt", self.system_prompt), ("question", self.question), ("answer", self.answer)):
            if not value:
                raise CorpusError(f"fine-tune example: {label} must be non-empty")


# Behaviour instruction used as the system prompt of every exported pair.
FINETUNE_SYSTEM_PROMPT = (
    "Sei unipa-gpt, il chatbot e assistente virtuale dell'Università degli Studi di Palermo.\n"
    "Rispondi cordialmente e in forma colloquiale alle domande che ti vengono poste.\n"
    "Se ricevi un saluto, rispondi salutando e presentandoti.\n"
    "Se ricevi una domanda riguardante l'università degli studi di Palermo,\n"
    "rispondi in base ai documenti che ti vengono dati insieme alla domanda.\n"
    "Se non sai rispondere, scusati e suggerisci di consultare il sito web, non inventare risposte."
)

DESCRIBE_QUESTION_TEMPLATE = "Descrivi il corso di laurea in {name}."
TOPICS_QUESTION_TEMPLATE = "Quali sono gli argomenti del corso di laurea in {name}?"

_DETAILS_HEADER = "Corso di laurea in "
_OUTLINE_HEADER = "Piano di studi del corso di laurea in "

_LEVEL_LABELS = {Level.BACHELOR: "Laurea triennale", Level.MASTER: "Laurea magistrale"}


def details_doc_id(course_id: str) -> str:
    return f"{course_id}::details"


def outline_doc_id(course_id: str) -> str:
    return f"{course_id}::outline"


def class_doc_id(course_id: str, position: int) -> str:
    return f"{course_id}::class::{position:03d}"


def _render_details(course: CourseRecord) -> str:
    lines = [
        f"{_DETAILS_HEADER}{course.display_name}",
        f"Tipologia: {_LEVEL_LABELS[course.level]}",
        f"Dipartimento: {course.department}",
        "",
        course.description,
    ]
    return "\n".join(lines)


def _render_outline(course: CourseRecord, include_objectives: bool) -> str:
    lines = [f"{_OUTLINE_HEADER}{course.display_name}"]
    for cls in course.classes:
        lines.append(
            f"Anno {cls.year}: {cls.class_name} ({cls.credits} CFU), "
            f"docente {cls.professor}, periodo {cls.period}, settore {cls.sector}"
        )
    if not course.classes:
        lines.append("Nessun insegnamento pubblicato per questo corso.")
    text = "\n".join(lines)
    if include_objectives and course.classes:
        objective_lines = ["", "Obiettivi formativi:"]
        objective_lines.extend(f"{cls.class_name}: {cls.objectives}" for cls in course.classes)
        text += "\n" + "\n".join(objective_lines)
    return text


def _render_class_objectives(course: CourseRecord, cls: ClassRecord) -> str:
    return (
        f"Obiettivi formativi di {cls.class_name}, corso di laurea in {course.display_name}\n"
        f"{cls.objectives}"
    )


def course_name_from_doc(doc: RawDocument) -> str:
    """Recover the course display name from a generated Education document."""
    first_line = doc.text.split("\n", 1)[0]
    for header in (_DETAILS_HEADER, _OUTLINE_HEADER):
        if first_line.startswith(header):
            return first_line[len(header) :]
    raise CorpusError(f"document {doc.doc_id!r} does not carry a course header line")


def build_variant(
    courses: list[CourseRecord],
    info_docs: list[RawDocument],
    variant: Variant,
) -> list[RawDocument]:
    """Render one corpus variant from course records plus pass-through info docs.

    Output order is deterministic: courses in input order with Details before
    Outline before per-class objective documents, then info docs in input
    order.
    """
    seen_courses: set[str] = set()
    for course in courses:
        if course.course_id in seen_courses:
            raise CorpusError(f"duplicate course_id: {course.course_id!r}")
        seen_courses.add(course.course_id)
    for doc in info_docs:
        if doc.section is not Section.FUTURE_STUDENTS:
            raise CorpusError(f"info document {doc.doc_id!r} must belong to the FutureStudents section")
        if doc.kind is not DocKind.INFO:
            raise CorpusError(f"info document {doc.doc_id!r} must have kind Info")

    needs_objectives = variant in (Variant.FULL, Variant.EMB)
    docs: list[RawDocument] = []
    for course in courses:
        if needs_objectives:
            for cls in course.classes:
                if not cls.objectives:
                    raise CorpusError(
                        f"course {course.course_id!r}, class {cls.class_name!r}: "
                        f"objectives are required for the {variant.value} variant"
                    )
        docs.append(
            RawDocument(
                doc_id=details_doc_id(course.course_id),
                section=Section.EDUCATION,
                kind=DocKind.DETAILS,
                text=_render_details(course),
            )
        )
        docs.append(
            RawDocument(
                doc_id=outline_doc_id(course.course_id),
                section=Section.EDUCATION,
                kind=DocKind.OUTLINE,
                text=_render_outline(course, include_objectives=variant is Variant.EMB),
            )
        )
        if variant is Variant.FULL:
            for position, cls in enumerate(course.classes):
                docs.append(
                    RawDocument(
                        doc_id=class_doc_id(course.course_id, position),
                        section=Section.EDUCATION,
                        kind=DocKind.CLASS_OBJECTIVES,
                        text=_render_class_objectives(course, cls),
                    )
                )
    docs.extend(info_docs)

    seen_docs: set[str] = set()
    for doc in docs:
        if doc.doc_id in seen_docs:
            raise CorpusError(f"duplicate doc_id in corpus: {doc.doc_id!r}")
        seen_docs.add(doc.doc_id)
    return docs


@dataclass(frozen=True)
class CorpusStats:
    """Document counts keyed by (section, kind), in stable declaration order."""

    counts: tuple[tuple[Section, DocKind, int], ...]

    @property
    def total(self) -> int:
        return sum(n for _, _, n in self.counts)

    def section_total(self, section: Section) -> int:
        return sum(n for sec, _, n in self.counts if sec is section)

    def count(self, section: Section, kind: DocKind) -> int:
        for sec, knd, n in self.counts:
            if sec is section and knd is kind:
                return n
        return 0

    def rows(self) -> list[tuple[str, str, int]]:
        return [(sec.value, knd.value, n) for sec, knd, n in self.counts]


def corpus_stats(docs: list[RawDocument]) -> CorpusStats:
    tally: dict[tuple[Section, DocKind], int] = {
        (section, kind): 0 for section in Section for kind in DocKind
    }
    for doc in docs:
        tally[(doc.section, doc.kind)] += 1
    return CorpusStats(counts=tuple((sec, knd, n) for (sec, knd), n in tally.items()))


class TextGenerator(Protocol):
    """Minimal generation interface used to author pair answers."""

    name: str

    def generate(self, prompt: str, temperature: float = 0.0, max_new_tokens: int | None = None) -> str: ...


@dataclass(frozen=True)
class PairGenerationFailure:
    doc_id: str
    question: str
    error: str


@dataclass
class PairGenerationResult:
    examples: list[FineTuneExample] = field(default_factory=list)
    failures: list[PairGenerationFailure] = field(default_factory=list)


def generate_finetune_pairs(
    docs: list[RawDocument],
    generator: TextGenerator,
    faq_pairs: list[FineTuneExample] | None = None,
) -> PairGenerationResult:
    """Author one QA pair per Education document of the clear corpus.

    Details documents get a describe-the-course question, outline documents a
    what-are-the-topics question; the generator receives the question followed
    by the document text and its output becomes the answer. FAQ and manual
    pairs are appended unchanged. Generator failures are collected in the
    result, never silently dropped.
    """
    if any(doc.kind is DocKind.CLASS_OBJECTIVES for doc in docs):
        raise CorpusError("pair generation expects the clear corpus variant (found per-class objective documents)")

    result = PairGenerationResult()
    for doc in docs:
        if doc.kind is DocKind.DETAILS:
            question = DESCRIBE_QUESTION_TEMPLATE.format(name=course_name_from_doc(doc))
            origin = PairOrigin.AUTO_DETAILS
        elif doc.kind is DocKind.OUTLINE:
            question = TOPICS_QUESTION_TEMPLATE.format(name=course_name_from_doc(doc))
            origin = PairOrigin.AUTO_OUTLINE
        else:
            continue
        prompt = f"{question}\n\n{doc.text}"
        try:
            answer = generator.generate(prompt, temperature=0.0)
        except Exception as exc:
            result.failures.append(PairGenerationFailure(doc_id=doc.doc_id, question=question, error=str(exc)))
            continue
        result.examples.append(
            FineTuneExample(
                system_prompt=FINETUNE_SYSTEM_PROMPT,
                question=question,
                answer=answer,
                origin=origin,
                source_doc_id=doc.doc_id,
            )
        )
    result.examples.extend(faq_pairs or [])
    return result


_COURSE_PAIR_SUFFIXES = {
    PairOrigin.AUTO_DETAILS: "::details",
    PairOrigin.AUTO_OUTLINE: "::outline",
}


def _course_key(pair: FineTuneExample) -> str:
    suffix = _COURSE_PAIR_SUFFIXES[pair.origin]
    if not pair.source_doc_id.endswith(suffix):
        raise CorpusError(
            f"pair for {pair.source_doc_id!r} has origin {pair.origin.value} "
            f"but its source document is not a {suffix.strip(':')} document"
        )
    return pair.source_doc_id[: -len(suffix)]


def split_validation(
    pairs: list[FineTuneExample],
    seed: int,
) -> tuple[list[FineTuneExample], list[FineTuneExample]]:
    """Carve a validation set out of the training pairs.

    Exactly one of the two Education pairs of each course (details or outline,
    chosen by the seeded RNG) goes to validation; future-students pairs go to
    validation iff flagged ``validation_eligible``. Train and validation
    partition the input.
    """
    by_course: dict[str, list[int]] = {}
    for position, pair in enumerate(pairs):
        if pair.origin in _COURSE_PAIR_SUFFIXES:
            by_course.setdefault(_course_key(pair), []).append(position)

    rng = random.Random(seed)
    chosen: set[int] = set()
    for course_id, positions in by_course.items():
        if not positions:
            raise CorpusError(f"course {course_id!r} has neither a details pair nor an outline pair")
        chosen.add(rng.choice(positions))

    train: list[FineTuneExample] = []
    valid: list[FineTuneExample] = []
    for position, pair in enumerate(pairs):
        if position in chosen:
            valid.append(pair)
        elif pair.origin not in _COURSE_PAIR_SUFFIXES and pair.validation_eligible:
            valid.append(pair)
        else:
            train.append(pair)
    return train, valid


def export_finetune(pairs: list[FineTuneExample], destination: str | Path) -> int:
    """Write pairs as line-delimited JSON objects and return the byte count.

    Each line carries exactly the keys ``system``, ``question`` and ``answer``
    in that order, LF terminated; the output is byte-stable across runs.
    """
    lines = []
    for pair in pairs:
        lines.append(
            json.dumps(
                {"system": pair.system_prompt, "question": pair.question, "answer": pair.answer},
                ensure_ascii=False,
            )
        )
    payload = "".join(line + "\n" for line in lines)
    try:
        return atomic_write_text(destination, payload)
    except OSError as exc:
        raise CorpusError(f"cannot write fine-tune export to {destination}: {exc}") from exc


def import_finetune(source: str | Path) -> list[FineTuneExample]:
    """Read an exported pair file back into memory.

    The export format carries only the three texts, so re-imported pairs come
    back with origin Manual and an empty source document reference.
    """
    pairs = []
    for lineno, record in enumerate(read_jsonl(source), start=1):
        missing = {"system", "question", "answer"} - record.keys()
        if missing:
            raise CorpusError(f"{source}:{lineno}: missing keys {sorted(missing)}")
        pairs.append(
            FineTuneExample(
                system_prompt=record["system"],
                question=record["question"],
                answer=record["answer"],
                origin=PairOrigin.MANUAL,
                source_doc_id="",
            )
        )
    return pairs


def course_to_record(course: CourseRecord) -> dict:
    return {
        "course_id": course.course_id,
        "name": course.name,
        "level": course.level.value,
        "department": course.department,
        "curriculum": course.curriculum,
        "description": course.description,
        "classes": [
            {
                "class_name": cls.class_name,
                "credits": cls.credits,
                "professor": cls.professor,
                "period": cls.period,
                "sector": cls.sector,
                "year": cls.year,
                "objectives": cls.objectives,
            }
            for cls in course.classes
        ],
    }


def course_from_record(record: dict) -> CourseRecord:
    try:
        return CourseRecord(
            course_id=record["course_id"],
            name=record["name"],
            level=Level(record["level"]),
            department=record["department"],
            curriculum=record["curriculum"],
            description=record["description"],
            classes=tuple(
                ClassRecord(
                    class_name=cls["class_name"],
                    credits=cls["credits"],
                    professor=cls["professor"],
                    period=cls["period"],
                    sector=cls["sector"],
                    year=cls["year"],
                    objectives=cls["objectives"],
                )
                for cls in record["classes"]
            ),
        )
    except KeyError as exc:
        raise CorpusError(f"course record is missing field {exc}") from exc


def load_courses(path: str | Path) -> list[CourseRecord]:
    return [course_from_record(record) for record in read_jsonl(path)]


def save_courses(path: str | Path, courses: list[CourseRecord]) -> int:
    return write_jsonl(path, (course_to_record(c) for c in courses))


def doc_to_record(doc: RawDocument) -> dict:
    return {
        "doc_id": doc.doc_id,
        "section": doc.section.value,
        "kind": doc.kind.value,
        "text": doc.text,
        "source_url": doc.source_url,
    }


def doc_from_record(record: dict) -> RawDocument:
    try:
        return RawDocument(
            doc_id=record["doc_id"],
            section=Section(record["section"]),
            kind=DocKind(record["kind"]),
            text=record["text"],
            source_url=record.get("source_url", ""),
        )
    except KeyError as exc:
        raise CorpusError(f"document record is missing field {exc}") from exc


def load_documents(path: str | Path) -> list[RawDocument]:
    return [doc_from_record(record) for record in read_jsonl(path)]


def save_documents(path: str | Path, docs: list[RawDocument]) -> int:
    return write_jsonl(path, (doc_to_record(d) for d in docs))


def with_validation_flag(pair: FineTuneExample, eligible: bool) -> FineTuneExample:
    return replace(pair, validation_eligible=eligible)
