"""Dataset construction: title matching, filtering, clone detection,
train/validation/test splitting and percentile statistics."""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np

from wikilead.corpus import CorpusRecord, DatasetExample
from wikilead.text import normalize, tokenize_words

PERCENTILES = (20, 40, 60, 80, 100)


@dataclass(frozen=True)
class FilterConfig:
    max_docs: int = 15
    min_total_input_words: int = 1000
    min_summary_words: int = 20
    clone_threshold: float = 0.5


class RejectReason(enum.Enum):
    TOO_FEW_INPUT_WORDS = "TooFewInputWords"
    SUMMARY_TOO_SHORT = "SummaryTooShort"
    NO_MATCHING_DOCS = "NoMatchingDocs"


def _title_tokens(title: str) -> List[str]:
    tokens = tokenize_words(normalize(title))
    if not tokens:
        raise ValueError(f"title {title!r} has no word tokens")
    return tokens


def match_documents(
    title: str, corpus: Iterable[CorpusRecord], max_docs: int = 15
) -> List[CorpusRecord]:
    """First ``max_docs`` records whose text holds every title word, any order."""
    wanted = set(_title_tokens(title))
    out = []
    for record in corpus:
        if len(out) >= max_docs:
            break
        if wanted.issubset(tokenize_words(normalize(record.text))):
            out.append(record)
    return out


class TitleMatcher:
    """Single-pass matcher of many titles against a streamed corpus.

    Each title is indexed under its longest word (a cheap rarity proxy), so a
    document only checks the titles keyed by one of its own words.
    """

    def __init__(self, titles: Iterable[str], max_docs: int = 15):
        self.max_docs = max_docs
        self.matches: Dict[str, List[CorpusRecord]] = {}
        self._wanted: Dict[str, frozenset] = {}
        self._index: Dict[str, List[str]] = defaultdict(list)
        for title in titles:
            if title in self._wanted:
                continue
            tokens = frozenset(_title_tokens(title))
            self._wanted[title] = tokens
            self.matches[title] = []
            key = max(sorted(tokens), key=len)
            self._index[key].append(title)

    def feed(self, record: CorpusRecord) -> None:
        words = set(tokenize_words(normalize(record.text)))
        for word in words:
            for title in self._index.get(word, ()):
                docs = self.matches[title]
                if len(docs) < self.max_docs and self._wanted[title] <= words:
                    docs.append(record)

    def feed_all(self, corpus: Iterable[CorpusRecord]) -> "TitleMatcher":
        for record in corpus:
            self.feed(record)
        return self


def clone_score(doc_tokens: Sequence[str], summary_tokens: Sequence[str]) -> float:
    """Share of the summary's distinct unigrams that also occur in the doc."""
    summary_vocab = set(summary_tokens)
    if not summary_vocab:
        raise ValueError("clone score undefined for an empty summary")
    return len(summary_vocab.intersection(doc_tokens)) / len(summary_vocab)


def apply_filters(
    candidate: DatasetExample, config: FilterConfig = FilterConfig()
) -> Union[DatasetExample, RejectReason]:
    """Accept a candidate (with clones dropped) or return why it was rejected.

    Checks run in this order: summary length, clone removal, empty doc
    list, total input words.
    """
    summary_tokens = tokenize_words(normalize(candidate.summary))
    if len(summary_tokens) < config.min_summary_words or not summary_tokens:
        return RejectReason.SUMMARY_TOO_SHORT

    kept = []
    total_words = 0
    for doc in candidate.docs[: config.max_docs]:
        doc_tokens = tokenize_words(normalize(doc))
        if clone_score(doc_tokens, summary_tokens) > config.clone_threshold:
            continue
        kept.append(doc)
        total_words += len(doc_tokens)

    if not kept:
        return RejectReason.NO_MATCHING_DOCS
    if total_words < config.min_total_input_words:
        return RejectReason.TOO_FEW_INPUT_WORDS
    return DatasetExample(candidate.title, candidate.summary, kept)


def build_dataset(
    corpus: Iterable[CorpusRecord],
    wiki: Iterable[Tuple[str, str]],
    config: FilterConfig = FilterConfig(),
    rejects: Dict[str, int] = None,
) -> Iterator[DatasetExample]:
    """Match every wiki title against one pass over the corpus and filter.

    Wiki entries are consumed first; the corpus is streamed once.  Reject
    counts are accumulated into ``rejects`` when given.
    """
    summaries: Dict[str, str] = {}
    for title, summary in wiki:
        if not tokenize_words(normalize(title)):
            if rejects is not None:
                rejects[RejectReason.NO_MATCHING_DOCS.value] = (
                    rejects.get(RejectReason.NO_MATCHING_DOCS.value, 0) + 1
                )
            continue
        summaries.setdefault(title, summary)
    matcher = TitleMatcher(summaries, config.max_docs).feed_all(corpus)
    for title, summary in summaries.items():
        docs = [r.text for r in matcher.matches[title]]
        outcome = apply_filters(DatasetExample(title, summary, docs), config)
        if isinstance(outcome, RejectReason):
            if rejects is not None:
                rejects[outcome.value] = rejects.get(outcome.value, 0) + 1
            continue
        yield outcome


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def split_dataset(
    examples: Sequence,
    ratios: Tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> Tuple[list, list, list]:
    """Seeded shuffle, then contiguous train/validation/test slices."""
    if len(ratios) != 3 or abs(sum(ratios) - 1.0) > 1e-9 or min(ratios) < 0:
        raise ValueError(f"ratios must be three non-negative fractions summing to 1, got {ratios}")
    n = len(examples)
    if n < 3:
        raise ValueError(f"need at least 3 examples to split, got {n}")
    order = np.random.default_rng(seed).permutation(n)
    n_train = _round_half_up(n * ratios[0])
    n_val = _round_half_up(n * ratios[1])
    if n_train + n_val > n:
        n_val = n - n_train
    shuffled = [examples[i] for i in order]
    return (
        shuffled[:n_train],
        shuffled[n_train : n_train + n_val],
        shuffled[n_train + n_val :],
    )


def nearest_rank(sorted_values: Sequence[float], pct: float) -> float:
    """Value at rank ceil(pct/100 * N) (1-indexed) of an ascending list."""
    n = len(sorted_values)
    if n == 0:
        raise ValueError("percentile of an empty sequence")
    rank = math.ceil(pct / 100.0 * n)
    return sorted_values[min(max(rank, 1), n) - 1]


def example_sizes(example: DatasetExample) -> Tuple[int, int, int]:
    input_words = sum(len(tokenize_words(normalize(d))) for d in example.docs)
    output_words = len(tokenize_words(normalize(example.summary)))
    return input_words, output_words, len(example.docs)


def compute_stats(
    examples: Iterable[DatasetExample], percentiles: Sequence[float] = PERCENTILES
) -> Dict[str, Dict[float, int]]:
    """Nearest-rank percentile table of input size, output size and doc count."""
    columns: Tuple[List[int], List[int], List[int]] = ([], [], [])
    for ex in examples:
        for col, value in zip(columns, example_sizes(ex)):
            col.append(value)
    if not columns[0]:
        raise ValueError("cannot compute statistics of an empty dataset")
    table = {}
    for name, col in zip(("input_size_words", "output_size_words", "n_documents"), columns):
        col.sort()
        table[name] = {p: nearest_rank(col, p) for p in percentiles}
    return table


def format_stats(table: Dict[str, Dict[float, int]]) -> str:
    labels = {
        "input_size_words": "Input size",
        "output_size_words": "Output size",
        "n_documents": "N. documents",
    }
    pcts = list(next(iter(table.values())))
    rows = [["Percentile (%)"] + [f"{p:g}" for p in pcts]]
    for key, label in labels.items():
        rows.append([label] + [str(table[key][p]) for p in pcts])
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(w) if i == 0 else cell.rjust(w) for i, (cell, w) in enumerate(zip(r, widths)))
        for r in rows
    )
