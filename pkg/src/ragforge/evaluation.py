"""One-shot comparison harness: many providers, fixed contexts, all metrics.

Contexts are retrieved once per question and shared across providers so the
comparison isolates generation quality. Every provider answers with the
custom prompt only, capped at a fixed number of new tokens, and each answer is
scored with BLEU, ROUGE-L and the three judge-mediated ratios.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .embedding import EmbeddingProvider, cosine
from .fileio import read_jsonl, write_jsonl
from .judge import JudgeError
from .metrics import bleu, rouge_l, split_sentences
from .prompts import custom_template, join_context, render_prompt
from .providers import LLMProvider
from .retrieval import Retriever


@dataclass(frozen=True)
class GoldenPair:
    question: str
    golden_answer: str
    source_doc_ids: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.question or not self.golden_answer:
            raise ValueError("golden pair texts must be non-empty")
        object.__setattr__(self, "source_doc_ids", tuple(self.source_doc_ids))


def _in_unit_range(value: float | None) -> bool:
    return value is None or 0.0 <= value <= 1.0


@dataclass(frozen=True)
class MetricScores:
    bleu: float
    rouge_l_p: float
    rouge_l_r: float
    rouge_l_f: float
    context_relevancy: tuple[float | None, ...]
    faithfulness: float | None
    answer_correctness: float | None

    def __post_init__(self):
        values = [self.bleu, self.rouge_l_p, self.rouge_l_r, self.rouge_l_f,
                  self.faithfulness, self.answer_correctness, *self.context_relevancy]
        for value in values:
            if not _in_unit_range(value):
                raise ValueError(f"metric value out of [0, 1]: {value!r}")


@dataclass(frozen=True)
class EvalConfig:
    k: int = 4
    max_new_tokens: int | None = 256
    temperature: float = 0.0


@dataclass
class EvalRun:
    """One provider's results against the shared per-question contexts."""

    provider: str
    config: EvalConfig
    scores: dict[str, MetricScores | None] = field(default_factory=dict)
    contexts: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def context_hash(self, question_id: str) -> str:
        joined = join_context(self.contexts[question_id])
        return hashlib.sha256(joined.encode("utf-8")).hexdigest()


@dataclass
class ComparisonReport:
    question_ids: list[str]
    golden: list[GoldenPair]
    runs: list[EvalRun]

    def rows(self) -> list[dict]:
        out = []
        for run in sorted(self.runs, key=lambda r: r.provider):
            for question_id in self.question_ids:
                scores = run.scores[question_id]
                if scores is None:
                    out.append(
                        {
                            "provider": run.provider,
                            "question_id": question_id,
                            "bleu": None,
                            "rouge_l_f": None,
                            "context_relevancy": None,
                            "faithfulness": None,
                            "answer_correctness": None,
                            "status": "failed",
                        }
                    )
                    continue
                out.append(
                    {
                        "provider": run.provider,
                        "question_id": question_id,
                        "bleu": scores.bleu,
                        "rouge_l_f": scores.rouge_l_f,
                        "context_relevancy": list(scores.context_relevancy),
                        "faithfulness": scores.faithfulness,
                        "answer_correctness": scores.answer_correctness,
                        "status": "ok",
                    }
                )
        return out

    @property
    def failed_rows(self) -> int:
        return sum(1 for run in self.runs for scores in run.scores.values() if scores is None)


def context_relevancy(question: str, context: str, judge) -> float | None:
    """Share of context sentences the judge marks relevant to the question.

    Returns None (undefined) when the judge fails; the caller's run continues.
    """
    sentences = split_sentences(context)
    if not sentences:
        raise ValueError("context must contain at least one sentence")
    try:
        picked = judge.relevant_sentences(question, sentences)
        if any(i < 0 or i >= len(sentences) for i in picked):
            raise JudgeError(f"sentence indices out of range for {len(sentences)} sentences: {sorted(picked)}")
    except Exception:
        return None
    return len(set(picked)) / len(sentences)


def faithfulness(answer: str, contexts: Sequence[str], judge) -> float | None:
    """Share of answer statements supported by the retrieved contexts.

    Undefined (None) when the answer decomposes into zero statements or the
    judge fails; distinct from a score of 0.
    """
    if not answer:
        raise ValueError("answer must be non-empty")
    combined = join_context(contexts)
    try:
        statements = judge.decompose(answer)
        if not statements:
            return None
        supported = sum(1 for statement in statements if judge.verify(statement, combined))
    except Exception:
        return None
    return supported / len(statements)


def answer_correctness(
    answer: str,
    golden: GoldenPair,
    judge,
    embedder: EmbeddingProvider,
    weights: tuple[float, float] = (0.75, 0.25),
) -> float | None:
    """Blend of statement-level F1 against the golden answer and embedding similarity.

    F1 = TP / (TP + 0.5 * (FP + FN)) from the judge's classification; the
    similarity term is the clipped cosine of the two answer embeddings.
    """
    w_f1, w_sim = weights
    if w_f1 < 0 or w_sim < 0:
        raise ValueError(f"weights must be non-negative, got {weights}")
    try:
        answer_statements = judge.decompose(answer) if answer else []
        golden_statements = judge.decompose(golden.golden_answer)
        tp, fp, fn = judge.classify(answer_statements, golden_statements)
        if min(tp, fp, fn) < 0 or tp > len(answer_statements):
            raise JudgeError(f"inconsistent classification counts TP={tp} FP={fp} FN={fn}")
    except Exception:
        return None
    denominator = tp + 0.5 * (fp + fn)
    f1 = tp / denominator if denominator > 0 else 0.0
    vec_answer, vec_golden = embedder.embed([answer or "", golden.golden_answer])
    similarity = max(0.0, cosine(vec_answer, vec_golden))
    return w_f1 * f1 + w_sim * similarity


def score_answer(
    answer_text: str,
    golden: GoldenPair,
    contexts: Sequence[str],
    judge,
    embedder: EmbeddingProvider,
    correctness_weights: tuple[float, float] = (0.75, 0.25),
) -> MetricScores:
    rouge_p, rouge_r, rouge_f = rouge_l(answer_text, golden.golden_answer)
    relevancies = tuple(context_relevancy(golden.question, context, judge) for context in contexts)
    return MetricScores(
        bleu=bleu(answer_text, golden.golden_answer),
        rouge_l_p=rouge_p,
        rouge_l_r=rouge_r,
        rouge_l_f=rouge_f,
        context_relevancy=relevancies,
        faithfulness=faithfulness(answer_text, contexts, judge) if answer_text else None,
        answer_correctness=answer_correctness(answer_text, golden, judge, embedder, correctness_weights),
    )


def run_comparison(
    providers: Sequence[LLMProvider],
    golden: Sequence[GoldenPair],
    retriever: Retriever,
    judge,
    embedder: EmbeddingProvider,
    max_new_tokens: int | None = 256,
    k: int = 4,
    sharper_profile: bool = False,
    correctness_weights: tuple[float, float] = (0.75, 0.25),
) -> ComparisonReport:
    """Score every provider on every golden question over shared contexts."""
    if not providers:
        raise ValueError("at least one provider is required")
    if not golden:
        raise ValueError("the golden set must be non-empty")
    names = [provider.name for provider in providers]
    if len(set(names)) != len(names):
        raise ValueError(f"provider names must be unique, got {names}")

    question_ids = [f"q{i + 1}" for i in range(len(golden))]
    contexts: dict[str, tuple[str, ...]] = {}
    for question_id, pair in zip(question_ids, golden):
        chunks = retriever.search(pair.question, k=k)
        contexts[question_id] = tuple(piece.text for piece in chunks)

    config = EvalConfig(k=k, max_new_tokens=max_new_tokens, temperature=0.0)
    template = custom_template(sharper_profile)
    runs = []
    for provider in providers:
        run = EvalRun(provider=provider.name, config=config, contexts=dict(contexts))
        for question_id, pair in zip(question_ids, golden):
            prompt = render_prompt(
                template,
                {"question": pair.question, "context": join_context(contexts[question_id])},
            )
            try:
                answer_text = provider.generate(prompt, temperature=config.temperature, max_new_tokens=max_new_tokens)
            except Exception:
                run.scores[question_id] = None
                continue
            run.scores[question_id] = score_answer(
                answer_text, pair, contexts[question_id], judge, embedder, correctness_weights
            )
        runs.append(run)
    return ComparisonReport(question_ids=question_ids, golden=list(golden), runs=runs)


def golden_from_record(record: dict) -> GoldenPair:
    try:
        return GoldenPair(
            question=record["question"],
            golden_answer=record["golden_answer"],
            source_doc_ids=tuple(record.get("source_doc_ids", ())),
        )
    except KeyError as exc:
        raise ValueError(f"golden record is missing field {exc}") from exc


def load_golden(path: str | Path) -> list[GoldenPair]:
    return [golden_from_record(record) for record in read_jsonl(path)]


def bundled_golden_path() -> Path:
    return Path(__file__).parent / "data" / "golden_qa.jsonl"


def load_bundled_golden() -> list[GoldenPair]:
    return load_golden(bundled_golden_path())


def write_report(report: ComparisonReport, destination: str | Path) -> int:
    return write_jsonl(destination, report.rows())


def _fmt(value: float | None) -> str:
    return "  --  " if value is None else f"{value:6.4f}"


def format_report_table(report: ComparisonReport) -> str:
    """Human-readable summary table, one row per (provider, question)."""
    header = f"{'provider':<24} {'question':<9} {'bleu':>7} {'rougeL':>7} {'faith':>7} {'correct':>7}  status"
    lines = [header, "-" * len(header)]
    for row in report.rows():
        lines.append(
            f"{row['provider']:<24} {row['question_id']:<9} "
            f"{_fmt(row['bleu']):>7} {_fmt(row['rouge_l_f']):>7} "
            f"{_fmt(row['faithfulness']):>7} {_fmt(row['answer_correctness']):>7}  {row['status']}"
        )
    return "\n".join(lines)
