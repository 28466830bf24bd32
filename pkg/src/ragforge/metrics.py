"""Text-overlap metrics computed over whitespace tokens.

BLEU here is the classic corpus formula applied to a single pair: geometric
mean of clipped modified n-gram precisions (n = 1..4, uniform weights) times a
brevity penalty, with no smoothing, so any empty precision level zeroes the
score. ROUGE-L is longest-common-subsequence precision/recall with the
balanced F measure.
"""

from __future__ import annotations

import math
import re
from collections import Counter

from .chunking import tokens


def _ngram_counts(words: list[str], n: int) -> Counter:
    return Counter(tuple(words[i : i + n]) for i in range(len(words) - n + 1))


def bleu(candidate: str, reference: str, max_n: int = 4) -> float:
    """Single-reference BLEU with brevity penalty and no smoothing."""
    cand = tokens(candidate)
    ref = tokens(reference)
    if not cand:
        return 0.0
    log_precision_sum = 0.0
    for n in range(1, max_n + 1):
        cand_counts = _ngram_counts(cand, n)
        total = sum(cand_counts.values())
        if total == 0:
            return 0.0
        ref_counts = _ngram_counts(ref, n)
        clipped = sum(min(count, ref_counts[gram]) for gram, count in cand_counts.items())
        if clipped == 0:
            return 0.0
        log_precision_sum += math.log(clipped / total)
    score = math.exp(log_precision_sum / max_n)
    c, r = len(cand), len(ref)
    if c < r:
        score *= math.exp(1 - r / c)
    return score


def lcs_length(a: list[str], b: list[str]) -> int:
    """Longest common subsequence length, O(len(a) * len(b))."""
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for item_a in a:
        current = [0] * (len(b) + 1)
        for j, item_b in enumerate(b, start=1):
            if item_a == item_b:
                current[j] = previous[j - 1] + 1
            else:
                current[j] = max(previous[j], current[j - 1])
        previous = current
    return previous[len(b)]


def rouge_l(candidate: str, reference: str) -> tuple[float, float, float]:
    """ROUGE-L precision, recall and balanced F over whitespace tokens."""
    cand = tokens(candidate)
    ref = tokens(reference)
    if not cand or not ref:
        return 0.0, 0.0, 0.0
    lcs = lcs_length(cand, ref)
    precision = lcs / len(cand)
    recall = lcs / len(ref)
    if precision + recall == 0:
        return precision, recall, 0.0
    f_score = 2 * precision * recall / (precision + recall)
    return precision, recall, f_score


_SENTENCE_BOUNDARY_RE = re.compile(r"(?<=[.!?])\s+")


def split_sentences(text: str) -> list[str]:
    """Split on '.', '!' or '?' followed by whitespace or end of text.

    Abbreviations are not special-cased; a trailing fragment without a
    terminator still counts as a sentence.
    """
    stripped = text.strip()
    if not stripped:
        return []
    return [part for part in _SENTENCE_BOUNDARY_RE.split(stripped) if part]
