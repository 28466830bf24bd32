import math
import random
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ragforge.metrics import bleu, lcs_length, rouge_l, split_sentences

# Hand-counted n-gram example, frozen:
#   candidate "the cat sat on the mat" vs reference "the cat sat on a mat"
#   p1 = 5/6, p2 = 3/5, p3 = 2/4, p4 = 1/3, brevity penalty 1 (equal lengths)
HAND_COUNTED_BLEU = (5 / 6 * 3 / 5 * 2 / 4 * 1 / 3) ** 0.25


def recursive_lcs(a, b):
    """Independent memoized-recursion LCS oracle."""

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))

    return go(0, 0)


token_lists = st.lists(st.sampled_from("abcdefgh"), max_size=50)


# -- BLEU ---------------------------------------------------------------------


def test_bleu_identical_texts_is_one():
    text = "quattro parole bastano qui davvero"
    assert bleu(text, text) == pytest.approx(1.0, abs=1e-12)


def test_bleu_hand_counted_example():
    score = bleu("the cat sat on the mat", "the cat sat on a mat")
    assert score == pytest.approx(HAND_COUNTED_BLEU, abs=1e-12)
    assert score == pytest.approx(0.5372, abs=1e-4)


def test_bleu_zero_when_any_precision_level_is_empty():
    # Shares unigrams and bigrams but no 4-gram: hard zero, no smoothing.
    assert bleu("a b x c d", "a b y c d") == 0.0
    assert bleu("totalmente diverso", "nessuna parola condivisa") == 0.0


def test_bleu_empty_candidate_is_zero():
    assert bleu("", "qualcosa di vero") == 0.0
    assert bleu("   ", "qualcosa di vero") == 0.0


def test_bleu_brevity_penalty_applied_when_candidate_shorter():
    # All precisions are 1; only the brevity penalty remains.
    score = bleu("a b c d", "a b c d e")
    assert score == pytest.approx(math.exp(1 - 5 / 4), abs=1e-12)


def test_bleu_no_penalty_when_candidate_longer():
    reference = "a b c d e"
    candidate = "a b c d e f"
    p1, p2, p3, p4 = 5 / 6, 4 / 5, 3 / 4, 2 / 3
    assert bleu(candidate, reference) == pytest.approx((p1 * p2 * p3 * p4) ** 0.25, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from("abcdefgh"), min_size=4, max_size=40))
def test_bleu_self_similarity_is_one(words):
    text = " ".join(words)
    assert bleu(text, text) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.sampled_from("abcdefgh"), min_size=1, max_size=30),
    st.lists(st.sampled_from("abcdefgh"), min_size=1, max_size=30),
)
def test_bleu_invariant_under_token_relabeling(cand, ref):
    mapping = {ch: f"T{ord(ch)}" for ch in "abcdefgh"}
    orig = bleu(" ".join(cand), " ".join(ref))
    relabeled = bleu(" ".join(mapping[c] for c in cand), " ".join(mapping[r] for r in ref))
    assert relabeled == pytest.approx(orig, abs=1e-12)


# -- ROUGE-L -------------------------------------------------------------------


def test_rouge_identical_texts():
    assert rouge_l("uguale identico qui", "uguale identico qui") == (1.0, 1.0, 1.0)


def test_rouge_hand_counted_example():
    p, r, f = rouge_l("the cat sat", "the cat is on the mat")
    assert p == pytest.approx(2 / 3, abs=1e-12)
    assert r == pytest.approx(1 / 3, abs=1e-12)
    assert f == pytest.approx(4 / 9, abs=1e-9)


def test_rouge_disjoint_vocabularies():
    assert rouge_l("a b c", "x y z") == (0.0, 0.0, 0.0)


def test_rouge_empty_sides():
    assert rouge_l("", "x") == (0.0, 0.0, 0.0)
    assert rouge_l("x", "") == (0.0, 0.0, 0.0)


@settings(max_examples=150, deadline=None)
@given(token_lists, token_lists)
def test_rouge_matches_recursive_lcs_oracle(cand, ref):
    p, r, f = rouge_l(" ".join(cand), " ".join(ref))
    lcs = recursive_lcs(tuple(cand), tuple(ref))
    assert lcs == lcs_length(cand, ref)
    if cand and ref:
        assert p == pytest.approx(lcs / len(cand), abs=1e-12)
        assert r == pytest.approx(lcs / len(ref), abs=1e-12)
    else:
        assert (p, r, f) == (0.0, 0.0, 0.0)


def test_lcs_random_pairs_against_oracle():
    rng = random.Random(4)
    for _ in range(100):
        a = [rng.choice("abcde") for _ in range(rng.randint(0, 50))]
        b = [rng.choice("abcde") for _ in range(rng.randint(0, 50))]
        assert lcs_length(a, b) == recursive_lcs(tuple(a), tuple(b))


# -- sentence splitting --------------------------------------------------------


def test_split_sentences_on_terminators():
    assert split_sentences("Prima frase. Seconda! Terza?") == ["Prima frase.", "Seconda!", "Terza?"]


def test_split_keeps_unterminated_tail():
    assert split_sentences("Una frase. E una coda senza punto") == ["Una frase.", "E una coda senza punto"]


def test_split_empty_and_whitespace():
    assert split_sentences("") == []
    assert split_sentences("   \n ") == []


def test_split_does_not_break_inside_numbers_or_urls():
    # No whitespace after the dot, so no boundary.
    assert split_sentences("Vedi www.example.edu/info per i dettagli.") == [
        "Vedi www.example.edu/info per i dettagli."
    ]
    assert len(split_sentences("Costa 10.50 euro. Confermi?")) == 2
