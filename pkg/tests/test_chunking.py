import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ragforge.chunking import Chunk, chunk_count, chunk_text, tokenize, tokens


def enumerate_windows(total, size, overlap):
    """Independent window enumeration used as the chunking oracle."""
    if total == 0:
        return []
    stride = size - overlap
    windows, start = [], 0
    while True:
        end = min(start + size, total)
        windows.append((start, end))
        if end >= total:
            break
        start += stride
    return windows


def words(n):
    return " ".join(f"w{i}" for i in range(n))


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_mixed_whitespace():
    assert len(tokenize("a  b\nc")) == 3
    assert tokens("a  b\nc") == ["a", "b", "c"]


def test_tokenize_matches_split_oracle_on_long_text():
    rng = random.Random(0)
    pieces = []
    while sum(len(p) + 1 for p in pieces) < 10_000:
        pieces.append("x" * rng.randint(1, 12))
    text = " ".join(pieces)
    assert len(tokenize(text)) == len(text.split())


def test_spans_reconstruct_non_whitespace_content():
    text = "  ciao,\tmondo \n universo  "
    spans = tokenize(text)
    assert "".join(text[s:e] for s, e in spans) == "".join(text.split())


@pytest.mark.parametrize(
    "total,expected",
    [
        (0, []),
        (1000, [(0, 1000)]),
        (1950, [(0, 1000), (950, 1950)]),
        (2000, [(0, 1000), (950, 1950), (1900, 2000)]),
    ],
)
def test_chunk_boundaries(total, expected):
    pieces = chunk_text("doc", words(total))
    assert [(c.token_start, c.token_end) for c in pieces] == expected
    assert pieces == chunk_text("doc", words(total))  # deterministic
    assert expected == enumerate_windows(total, 1000, 50)


def test_chunk_text_slices_cover_their_tokens():
    text = words(120)
    pieces = chunk_text("doc", text, chunk_size=50, overlap=10)
    for piece in pieces:
        assert tokens(piece.text) == tokens(text)[piece.token_start : piece.token_end]
    assert [piece.seq for piece in pieces] == list(range(len(pieces)))


def test_overlap_must_be_smaller_than_chunk_size():
    with pytest.raises(ValueError):
        chunk_text("doc", "a b c", chunk_size=10, overlap=10)
    with pytest.raises(ValueError):
        chunk_text("doc", "a b c", chunk_size=10, overlap=-1)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 400), st.integers(1, 60), st.data())
def test_chunk_count_and_coverage_match_enumeration_oracle(total, size, data):
    overlap = data.draw(st.integers(0, size - 1))
    windows = enumerate_windows(total, size, overlap)
    pieces = chunk_text("doc", words(total), chunk_size=size, overlap=overlap)
    assert chunk_count(total, size, overlap) == len(windows)
    assert [(c.token_start, c.token_end) for c in pieces] == windows

    covered = set()
    for piece in pieces:
        covered.update(range(piece.token_start, piece.token_end))
    assert covered == set(range(total))

    stride = size - overlap
    for left, right in zip(pieces, pieces[1:]):
        assert right.token_start == left.token_start + stride


def test_chunk_dataclass_is_frozen():
    piece = chunk_text("doc", "a b", chunk_size=5, overlap=0)[0]
    assert isinstance(piece, Chunk)
    with pytest.raises(AttributeError):
        piece.seq = 1
