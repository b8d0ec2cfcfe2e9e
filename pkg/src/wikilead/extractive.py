"""Extractive stage: TF-IDF ranking against the title, plus the Random and
Cheating (target-bigram recall) baselines.

All extractors pool the sentence units of every document, in document order,
into one super document and return the top ``L`` units joined as
``title [SEP] s1 [SEP] s2 ...``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

from wikilead.corpus import DatasetExample
from wikilead.text import (
    DEFAULT_TARGET_WORDS,
    SentenceUnit,
    distinct_ngrams,
    normalize,
    split_sentences,
    tokenize_words,
)

SEP = "[SEP]"
JOINER = f" {SEP} "
EXTRACTORS = ("random", "tfidf", "cheating")
# ranking key precision; keeps ties stable under a change of log base
_KEY_DIGITS = 9


@dataclass(frozen=True)
class ScoredSentence:
    unit: SentenceUnit
    score: Optional[float]


@dataclass(frozen=True)
class ExtractResult:
    title: str
    selected: List[ScoredSentence]
    assembled: str

    def extract_text(self) -> str:
        """Selected sentence texts only, without title or separators."""
        return " ".join(s.unit.text for s in self.selected)

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "assembled": self.assembled,
            "selected": [
                {"doc": s.unit.doc_index, "sent": s.unit.sent_index, "score": s.score}
                for s in self.selected
            ],
        }


def super_document(
    docs: Iterable[str], target_words: int = DEFAULT_TARGET_WORDS
) -> List[SentenceUnit]:
    units: List[SentenceUnit] = []
    for i, doc in enumerate(docs):
        units.extend(split_sentences(normalize(doc), target_words, doc_index=i))
    return units


def assemble(title: str, sentences: Sequence[str]) -> str:
    return JOINER.join([title, *sentences])


def _result(title: str, selected: List[ScoredSentence]) -> ExtractResult:
    title = normalize(title)
    return ExtractResult(title, selected, assemble(title, [s.unit.text for s in selected]))


def _check_l(L: int) -> None:
    if L < 0:
        raise ValueError(f"L must be >= 0, got {L}")


def rank(units: Sequence[SentenceUnit], scores: Sequence[float], L: int) -> List[ScoredSentence]:
    """Top ``L`` by score, ties broken by (doc_index, sent_index)."""
    order = sorted(
        range(len(units)),
        key=lambda i: (-round(scores[i], _KEY_DIGITS), units[i].doc_index, units[i].sent_index),
    )
    return [ScoredSentence(units[i], scores[i]) for i in order[:L]]


def tfidf_term(
    term: str,
    sentence: SentenceUnit,
    O: Sequence[SentenceUnit],
    log: Callable[[float], float] = math.log,
) -> float:
    """Occurrences of ``term`` in the sentence times log(|O| / sentences with term)."""
    if not O:
        raise ValueError("empty super document")
    tf = sentence.tokens.count(term)
    if tf == 0:
        return 0.0
    df = sum(1 for u in O if term in u.tokens)
    return tf * log(len(O) / df)


def tfidf_sentence(
    sentence: SentenceUnit,
    title: str,
    O: Sequence[SentenceUnit],
    log: Callable[[float], float] = math.log,
) -> float:
    """Sum of term scores over the title's words (repeated words count again)."""
    terms = tokenize_words(normalize(title))
    if not terms:
        raise ValueError("title has no word tokens")
    return sum(tfidf_term(t, sentence, O, log) for t in terms)


def tfidf_scores(
    units: Sequence[SentenceUnit],
    title_terms: Sequence[str],
    log: Callable[[float], float] = math.log,
) -> List[float]:
    """Scores of every unit at once; document frequencies are built once."""
    wanted = Counter(title_terms)
    tfs = []
    df: Counter = Counter()
    for u in units:
        tf = Counter(t for t in u.tokens if t in wanted)
        tfs.append(tf)
        df.update(tf.keys())
    n = len(units)
    idf = {t: log(n / d) for t, d in df.items()}
    return [
        float(sum(wanted[t] * c * idf[t] for t, c in tf.items())) if tf else 0.0
        for tf in tfs
    ]


def _units_or_raise(example: DatasetExample, target_words: int) -> List[SentenceUnit]:
    units = super_document(example.docs, target_words)
    if not units:
        raise ValueError(f"example {example.title!r} has no sentences")
    return units


def select_tfidf(
    example: DatasetExample,
    L: int,
    target_words: int = DEFAULT_TARGET_WORDS,
    log: Callable[[float], float] = math.log,
) -> ExtractResult:
    _check_l(L)
    terms = tokenize_words(normalize(example.title))
    if not terms:
        raise ValueError("title has no word tokens")
    units = _units_or_raise(example, target_words)
    return _result(example.title, rank(units, tfidf_scores(units, terms, log), L))


def select_random(
    example: DatasetExample, L: int, seed: int = 0, target_words: int = DEFAULT_TARGET_WORDS
) -> ExtractResult:
    """Uniform sample without replacement, kept in draw order.

    Draws come from numpy's PCG64 seeded with ``seed``: the first
    ``min(L, |O|)`` entries of a seeded permutation.
    """
    _check_l(L)
    units = _units_or_raise(example, target_words)
    order = np.random.default_rng(seed).permutation(len(units))[:L]
    return _result(example.title, [ScoredSentence(units[i], None) for i in order])


def cheating_score(sentence: SentenceUnit, target: str) -> float:
    """Share of the target's distinct bigrams that appear in the sentence."""
    target_bigrams = distinct_ngrams(tokenize_words(normalize(target)), 2)
    if not target_bigrams:
        raise ValueError("target needs at least two word tokens")
    return _bigram_recall(sentence.tokens, target_bigrams)


def _bigram_recall(tokens: Sequence[str], target_bigrams: set) -> float:
    return len(target_bigrams.intersection(zip(tokens, tokens[1:]))) / len(target_bigrams)


def select_cheating(
    example: DatasetExample,
    L: int,
    target: Optional[str] = None,
    target_words: int = DEFAULT_TARGET_WORDS,
) -> ExtractResult:
    """Rank by bigram recall of the target (the example summary by default)."""
    _check_l(L)
    target_bigrams = distinct_ngrams(
        tokenize_words(normalize(example.summary if target is None else target)), 2
    )
    if not target_bigrams:
        raise ValueError("target needs at least two word tokens")
    units = _units_or_raise(example, target_words)
    scores = [_bigram_recall(u.tokens, target_bigrams) for u in units]
    return _result(example.title, rank(units, scores, L))


def run_extractor(
    name: str,
    example: DatasetExample,
    L: int,
    seed: int = 0,
    target_words: int = DEFAULT_TARGET_WORDS,
) -> ExtractResult:
    if name == "tfidf":
        return select_tfidf(example, L, target_words)
    if name == "random":
        return select_random(example, L, seed, target_words)
    if name == "cheating":
        return select_cheating(example, L, target_words=target_words)
    raise ValueError(f"unknown extractor {name!r}; expected one of {', '.join(EXTRACTORS)}")


def strip_assembled(assembled: str) -> str:
    """Drop the leading title and all separators from an assembled extract."""
    parts = assembled.split(JOINER)
    return " ".join(parts[1:])
