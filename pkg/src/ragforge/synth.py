"""Seeded synthetic course catalog for tests, demos and fixtures.

The real scraped catalog is not redistributable, so tests run against a
generated stand-in: plausible-looking Italian course records, future-students
info pages and FAQ pairs, all deterministic under a seed.
"""

from __future__ import annotations

import random

from .corpus import (
    ClassRecord,
    CourseRecord,
    DocKind,
    FineTuneExample,
    Level,
    PairOrigin,
    RawDocument,
    Section,
)

_FIELDS = [
    "Ingegneria Informatica", "Ingegneria Meccanica", "Ingegneria Gestionale",
    "Chimica", "Fisica", "Matematica", "Biologia", "Scienze Naturali",
    "Lettere Moderne", "Filosofia", "Giurisprudenza", "Economia e Finanza",
    "Scienze Politiche", "Architettura", "Medicina Veterinaria", "Agraria",
    "Lingue e Letterature", "Psicologia", "Scienze Motorie", "Beni Culturali",
]

_CURRICULA = ["", "Base", "Avanzato", "Internazionale", "Professionale"]

_DEPARTMENTS = [
    "Dipartimento di Ingegneria", "Dipartimento di Scienze", "Dipartimento di Studi Umanistici",
    "Dipartimento di Giurisprudenza", "Dipartimento di Economia", "Dipartimento di Medicina",
]

_SUBJECTS = [
    "Analisi", "Algebra", "Programmazione", "Basi di Dati", "Meccanica", "Termodinamica",
    "Diritto Privato", "Storia Contemporanea", "Linguistica", "Statistica", "Elettronica",
    "Chimica Organica", "Botanica", "Microeconomia", "Progettazione", "Fisiologia",
]

_PROFESSORS = [
    "Rossi", "Bianchi", "Russo", "Ferrari", "Esposito", "Romano", "Colombo",
    "Ricci", "Marino", "Greco", "Bruno", "Gallo", "Conti", "De Luca",
]

_PERIODS = ["primo semestre", "secondo semestre", "annuale"]

_SECTORS = ["ING-INF/05", "MAT/05", "FIS/01", "CHIM/06", "IUS/01", "SECS-P/01", "L-LIN/12", "BIO/09"]

_INFO_TOPICS = [
    ("calendario", "Il calendario accademico fissa l'inizio delle lezioni e le sessioni d'esame per l'anno in corso."),
    ("tasse", "Le tasse universitarie si pagano in tre rate tramite il portale dei pagamenti dell'ateneo."),
    ("borse", "Le borse di studio sono assegnate per reddito e merito secondo il bando annuale."),
    ("immatricolazione", "La domanda di immatricolazione si presenta online entro le scadenze pubblicate nel bando."),
    ("alloggi", "Gli studenti fuori sede possono richiedere un posto letto nelle residenze universitarie."),
    ("segreteria", "La segreteria studenti riceve su appuntamento e gestisce le pratiche di carriera."),
    ("erasmus", "Il programma di mobilità internazionale consente di svolgere un periodo di studio all'estero."),
    ("mensa", "Il servizio di ristorazione è accessibile con la carta dello studente nelle sedi convenzionate."),
]

_FAQ_QUESTIONS = [
    "Quando scade la {topic}?",
    "Come funziona la {topic}?",
    "Dove trovo informazioni sulla {topic}?",
    "Chi posso contattare per la {topic}?",
]


def _class_counts(courses: int, total_classes: int) -> list[int]:
    base, extra = divmod(total_classes, courses)
    return [base + 1 if i < extra else base for i in range(courses)]


def synthetic_courses(
    count: int = 253,
    total_classes: int | None = None,
    seed: int = 7,
) -> list[CourseRecord]:
    """Generate ``count`` course records; class counts sum to ``total_classes``."""
    rng = random.Random(seed)
    if total_classes is None:
        counts = [rng.randint(3, 8) for _ in range(count)]
    else:
        counts = _class_counts(count, total_classes)
    courses = []
    for i in range(count):
        name = _FIELDS[i % len(_FIELDS)]
        curriculum = _CURRICULA[(i // len(_FIELDS)) % len(_CURRICULA)]
        level = Level.BACHELOR if i % 2 == 0 else Level.MASTER
        classes = tuple(
            ClassRecord(
                class_name=f"{rng.choice(_SUBJECTS)} {j + 1}",
                credits=rng.choice([6, 9, 12]),
                professor=rng.choice(_PROFESSORS),
                period=rng.choice(_PERIODS),
                sector=rng.choice(_SECTORS),
                year=1 + j % 3,
                objectives=(
                    f"L'insegnamento fornisce le basi di {rng.choice(_SUBJECTS).lower()} "
                    f"e le applica a casi di studio del settore."
                ),
            )
            for j in range(counts[i])
        )
        courses.append(
            CourseRecord(
                course_id=f"corso-{i:04d}",
                name=name,
                level=level,
                department=_DEPARTMENTS[i % len(_DEPARTMENTS)],
                curriculum=curriculum,
                description=(
                    f"Il corso di {name} forma figure professionali nel settore, "
                    f"con un percorso che unisce lezioni frontali, laboratori e tirocini. "
                    f"Gli sbocchi occupazionali includono aziende, enti pubblici e ricerca."
                ),
                classes=classes,
            )
        )
    return courses


def synthetic_info_docs(count: int = 104, seed: int = 11) -> list[RawDocument]:
    rng = random.Random(seed)
    docs = []
    for i in range(count):
        topic, base_text = _INFO_TOPICS[i % len(_INFO_TOPICS)]
        extra = rng.choice(
            [
                "Le informazioni complete sono pubblicate sul sito di ateneo.",
                "In caso di dubbi è possibile scrivere allo sportello studenti.",
                "Le scadenze possono variare di anno in anno.",
                "Il servizio è riservato agli studenti regolarmente iscritti.",
            ]
        )
        docs.append(
            RawDocument(
                doc_id=f"info-{i:04d}",
                section=Section.FUTURE_STUDENTS,
                kind=DocKind.INFO,
                text=f"Informazioni su {topic} ({i + 1}). {base_text} {extra}",
                source_url=f"https://example.edu/futuri-studenti/{topic}/{i}",
            )
        )
    return docs


def synthetic_faq_pairs(
    info_docs: list[RawDocument],
    count: int = 269,
    validation_count: int = 133,
    seed: int = 13,
) -> list[FineTuneExample]:
    """FAQ-style pairs over the info documents; the first ``validation_count``
    are flagged validation-eligible."""
    if not info_docs:
        raise ValueError("synthetic FAQ pairs need at least one info document")
    rng = random.Random(seed)
    pairs = []
    for i in range(count):
        doc = info_docs[i % len(info_docs)]
        topic = doc.text.split("(", 1)[0].removeprefix("Informazioni su ").strip()
        template = _FAQ_QUESTIONS[i % len(_FAQ_QUESTIONS)]
        origin = PairOrigin.FAQ_EXTRACTED if i % 2 == 0 else PairOrigin.MANUAL
        pairs.append(
            FineTuneExample(
                system_prompt="Rispondi alle domande degli studenti in modo chiaro e cortese.",
                question=f"{template.format(topic=topic)} ({i + 1})",
                answer=doc.text if rng.random() < 0.5 else doc.text.split(". ", 1)[-1],
                origin=origin,
                source_doc_id=doc.doc_id,
                validation_eligible=i < validation_count,
            )
        )
    return pairs
