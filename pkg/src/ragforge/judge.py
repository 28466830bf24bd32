"""Judge providers for the judge-mediated metrics.

A judge performs four jobs: pick the context sentences relevant to a
question, decompose an answer into atomic statements, verify one statement
against a context, and classify answer statements against golden statements
into (TP, FP, FN). The scripted judge runs offline on deterministic
heuristics and accepts per-job overrides; the LLM judge delegates each job to
a generation provider.
"""

from __future__ import annotations

import re
from typing import Callable, Sequence

from .chunking import tokens
from .metrics import split_sentences
from .providers import LLMProvider


class JudgeError(RuntimeError):
    pass


RelevanceFn = Callable[[str, Sequence[str]], set[int]]
DecomposeFn = Callable[[str], list[str]]
VerifyFn = Callable[[str, str], bool]
ClassifyFn = Callable[[Sequence[str], Sequence[str]], tuple[int, int, int]]

_STOPWORDS = {
    "il", "lo", "la", "i", "gli", "le", "un", "una", "uno", "di", "a", "da", "in",
    "con", "su", "per", "tra", "fra", "e", "o", "che", "non", "si", "al", "del",
    "della", "dei", "delle", "degli", "è", "sono", "the", "a", "an", "of", "to",
    "and", "or", "is", "are", "in", "on", "for",
}


def content_tokens(text: str) -> set[str]:
    return {token.lower().strip(".,;:!?()\"'") for token in tokens(text)} - _STOPWORDS - {""}


def _default_relevance(question: str, sentences: Sequence[str]) -> set[int]:
    wanted = content_tokens(question)
    return {i for i, sentence in enumerate(sentences) if wanted & content_tokens(sentence)}


def _default_verify(statement: str, context: str) -> bool:
    needed = content_tokens(statement)
    if not needed:
        return False
    available = content_tokens(context)
    return len(needed & available) * 2 >= len(needed)


def _statement_match(a: str, b: str) -> bool:
    ta, tb = content_tokens(a), content_tokens(b)
    if not ta or not tb:
        return False
    return len(ta & tb) * 2 >= len(ta | tb)


def _default_classify(answer_statements: Sequence[str], golden_statements: Sequence[str]) -> tuple[int, int, int]:
    matched_golden: set[int] = set()
    tp = 0
    for statement in answer_statements:
        hit = next(
            (j for j, golden in enumerate(golden_statements) if j not in matched_golden and _statement_match(statement, golden)),
            None,
        )
        if hit is None:
            continue
        matched_golden.add(hit)
        tp += 1
    fp = len(answer_statements) - tp
    fn = len(golden_statements) - len(matched_golden)
    return tp, fp, fn


class ScriptedJudge:
    """Offline judge with deterministic defaults and per-job overrides."""

    def __init__(
        self,
        relevance: RelevanceFn | None = None,
        decompose: DecomposeFn | None = None,
        verify: VerifyFn | None = None,
        classify: ClassifyFn | None = None,
    ):
        self._relevance = relevance or _default_relevance
        self._decompose = decompose or split_sentences
        self._verify = verify or _default_verify
        self._classify = classify or _default_classify

    def relevant_sentences(self, question: str, sentences: Sequence[str]) -> set[int]:
        return set(self._relevance(question, sentences))

    def decompose(self, answer: str) -> list[str]:
        return list(self._decompose(answer))

    def verify(self, statement: str, context: str) -> bool:
        return bool(self._verify(statement, context))

    def classify(self, answer_statements: Sequence[str], golden_statements: Sequence[str]) -> tuple[int, int, int]:
        tp, fp, fn = self._classify(answer_statements, golden_statements)
        return int(tp), int(fp), int(fn)


_INT_RE = re.compile(r"-?\d+")


class LLMJudge:
    """Judge that delegates each job to a generation provider.

    Prompts ask for machine-parseable replies (index lists, one statement per
    line, yes/no, three counts); unparseable replies raise JudgeError.
    """

    def __init__(self, provider: LLMProvider):
        self._provider = provider
        self.name = f"judge-{provider.name}"

    def _ask(self, prompt: str) -> str:
        return self._provider.generate(prompt, temperature=0.0)

    def relevant_sentences(self, question: str, sentences: Sequence[str]) -> set[int]:
        numbered = "\n".join(f"{i}. {sentence}" for i, sentence in enumerate(sentences))
        reply = self._ask(
            "Given the question and the numbered context sentences, reply with the numbers of the "
            "sentences that are relevant to answering the question, comma separated, or NONE.\n"
            f"Question: {question}\nSentences:\n{numbered}\nRelevant numbers:"
        )
        if "NONE" in reply.upper() and not _INT_RE.search(reply):
            return set()
        picked = {int(m) for m in _INT_RE.findall(reply)}
        out_of_range = {i for i in picked if i < 0 or i >= len(sentences)}
        if out_of_range:
            raise JudgeError(f"judge returned sentence indices out of range: {sorted(out_of_range)}")
        return picked

    def decompose(self, answer: str) -> list[str]:
        reply = self._ask(
            "Rewrite the following answer as a list of short self-contained factual statements, "
            f"one per line, with no numbering:\n{answer}\nStatements:"
        )
        return [line.strip() for line in reply.splitlines() if line.strip()]

    def verify(self, statement: str, context: str) -> bool:
        reply = self._ask(
            "Does the context support the statement? Reply YES or NO.\n"
            f"Context:\n{context}\nStatement: {statement}\nReply:"
        )
        word = reply.strip().upper()
        if word.startswith("YES"):
            return True
        if word.startswith("NO"):
            return False
        raise JudgeError(f"judge verification reply not parseable: {reply[:80]!r}")

    def classify(self, answer_statements: Sequence[str], golden_statements: Sequence[str]) -> tuple[int, int, int]:
        answers = "\n".join(f"- {s}" for s in answer_statements)
        goldens = "\n".join(f"- {s}" for s in golden_statements)
        reply = self._ask(
            "Compare the answer statements with the golden statements. Reply exactly in the form "
            "TP=<n> FP=<n> FN=<n>, where TP counts answer statements supported by the golden "
            "statements, FP the unsupported answer statements, FN the golden statements missing "
            f"from the answer.\nAnswer statements:\n{answers}\nGolden statements:\n{goldens}\nReply:"
        )
        found = {key: int(value) for key, value in re.findall(r"(TP|FP|FN)\s*=\s*(-?\d+)", reply)}
        if set(found) != {"TP", "FP", "FN"}:
            raise JudgeError(f"judge classification reply not parseable: {reply[:80]!r}")
        return found["TP"], found["FP"], found["FN"]
