"""Text normalization, word tokenization, sentence-unit packing and n-grams.

Every other module goes through these helpers, so matching (TF-IDF, ROUGE,
title lookup, clone detection) always sees the same word tokens.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

DEFAULT_TARGET_WORDS = 100

_TERMINALS = frozenset(".!?")
# closing marks that may trail a terminal, e.g. `fim."`
_CLOSERS = "\"')]}»”’"

Ngram = Tuple[str, ...]


@dataclass(frozen=True)
class SentenceUnit:
    """A ~100-word extraction unit of one document."""

    doc_index: int
    sent_index: int
    text: str
    word_count: int
    tokens: Tuple[str, ...] = ()


@lru_cache(maxsize=None)
def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _strip_punct(piece: str) -> str:
    if piece[0].isalnum() and piece[-1].isalnum():
        return piece
    i, j = 0, len(piece)
    while i < j and _is_punct(piece[i]):
        i += 1
    while j > i and _is_punct(piece[j - 1]):
        j -= 1
    return piece[i:j]


def normalize(text: str) -> str:
    """Lowercase and collapse whitespace runs; accents are kept."""
    return " ".join(text.lower().split())


def tokenize_words(text: str) -> List[str]:
    """Whitespace split, then strip punctuation from token edges.

    >>> tokenize_words("1873, aviador")
    ['1873', 'aviador']
    """
    out = []
    for piece in text.split():
        tok = _strip_punct(piece)
        if tok:
            out.append(tok)
    return out


def _ends_sentence(piece: str) -> bool:
    core = piece.rstrip(_CLOSERS)
    return bool(core) and core[-1] in _TERMINALS


def split_sentences(
    text: str, target_words: int = DEFAULT_TARGET_WORDS, doc_index: int = 0
) -> List[SentenceUnit]:
    """Split at terminal punctuation, then greedily pack raw sentences.

    A unit is closed when adding the next raw sentence would push it past
    ``1.2 * target_words`` words and it already holds at least
    ``0.5 * target_words``.  Raw sentences without any word token ride
    along with their neighbours.
    """
    if target_words < 1:
        raise ValueError("target_words must be >= 1")
    upper = 1.2 * target_words
    lower = 0.5 * target_words

    units: List[Tuple[List[str], List[str]]] = []
    cur_pieces: List[str] = []
    cur_tokens: List[str] = []
    raw_pieces: List[str] = []
    raw_tokens: List[str] = []

    def flush_raw() -> None:
        nonlocal cur_pieces, cur_tokens
        if raw_tokens and cur_tokens and len(cur_tokens) + len(raw_tokens) > upper \
                and len(cur_tokens) >= lower:
            units.append((cur_pieces, cur_tokens))
            cur_pieces, cur_tokens = [], []
        cur_pieces.extend(raw_pieces)
        cur_tokens.extend(raw_tokens)
        raw_pieces.clear()
        raw_tokens.clear()

    for piece in text.split():
        raw_pieces.append(piece)
        tok = _strip_punct(piece)
        if tok:
            raw_tokens.append(tok)
        if _ends_sentence(piece):
            flush_raw()
    flush_raw()

    if cur_pieces:
        if cur_tokens:
            units.append((cur_pieces, cur_tokens))
        elif units:
            units[-1][0].extend(cur_pieces)

    return [
        SentenceUnit(doc_index, i, " ".join(pieces), len(tokens), tuple(tokens))
        for i, (pieces, tokens) in enumerate(units)
    ]


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    """Bag of n-grams (tuples) over a sliding window, with multiplicity."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Counter((t,) for t in tokens)
    return Counter(zip(*(tokens[i:] for i in range(n))))


def distinct_ngrams(tokens: Sequence[str], n: int) -> set:
    if n == 1:
        return {(t,) for t in tokens}
    return set(zip(*(tokens[i:] for i in range(n))))


def word_count(texts: Iterable[str]) -> int:
    """Total word tokens over already-normalized or raw texts."""
    return sum(len(tokenize_words(normalize(t))) for t in texts)
