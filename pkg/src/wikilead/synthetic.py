"""Deterministic synthetic examples with planted target content.

Each example has a two-word title and a target built from fact phrases.
Fact phrases are planted in units of ~110 words:

* relevant units carry both title words and most of the phrases,
* hidden units carry the remaining phrases but no title word,
* weak units mention one title word and no phrase,
* filler units carry neither.

So TF-IDF against the title recovers most of the target, the bigram-recall
oracle recovers all of it, and a random pick recovers little.
"""

from __future__ import annotations

from typing import Iterator, List, Optional, Set

import numpy as np

from wikilead.corpus import DatasetExample
from wikilead.dataset import FilterConfig, apply_filters

_ONSETS = ["b", "c", "d", "f", "g", "l", "m", "n", "p", "r", "s", "t", "v", "br", "pr", "tr", "ch", "lh", "nh"]
_VOWELS = ["a", "e", "i", "o", "u", "ã", "é", "ó"]
_CONNECTORS = ["e", "de", "foi"]
_FUNCTION = ["o", "a", "que", "em", "um", "uma", "para", "com", "não", "os", "as", "do", "da", "no", "na", "por"]

UNIT_WORDS = 110
FACT_WORDS = 5
RELEVANT_FACTS = (2, 2, 1, 1)
HIDDEN_FACTS = (2, 1, 1)
N_WEAK = 3
N_FILLER = 14
FIXTURE_SIZE = 200
FIXTURE_SEED = 20211


class _Words:
    """Pseudo-Portuguese word factory that never repeats a word."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.used: Set[str] = set(_CONNECTORS) | set(_FUNCTION)

    def fresh(self, syllables: int = 3) -> str:
        while True:
            word = "".join(
                _ONSETS[self.rng.integers(len(_ONSETS))] + _VOWELS[self.rng.integers(len(_VOWELS))]
                for _ in range(syllables)
            )
            if word not in self.used:
                self.used.add(word)
                return word


class SyntheticGenerator:
    def __init__(self, seed: int = FIXTURE_SEED, filler_vocab: int = 2000):
        self.rng = np.random.default_rng(seed)
        self.words = _Words(self.rng)
        self.filler = list(_FUNCTION) + list(_CONNECTORS)
        self.filler += [self.words.fresh(int(self.rng.integers(2, 4))) for _ in range(filler_vocab)]
        # Zipf-like weights so function words dominate
        ranks = np.arange(1, len(self.filler) + 1)
        self.weights = 1.0 / ranks
        self.weights /= self.weights.sum()

    def _filler(self, n: int) -> List[str]:
        idx = self.rng.choice(len(self.filler), size=n, p=self.weights)
        return [self.filler[i] for i in idx]

    def _unit(self, planted: List[List[str]]) -> str:
        """~UNIT_WORDS words in sentences of >= 18 words, planted chunks kept intact."""
        n_planted = sum(len(p) for p in planted)
        words = self._filler(UNIT_WORDS - n_planted)
        for chunk in planted:
            at = int(self.rng.integers(0, len(words) + 1))
            words[at:at] = [chunk]
        flat: List[object] = words
        n_sent = UNIT_WORDS // 22
        sentences: List[List[str]] = [[] for _ in range(n_sent)]
        per = len(flat) / n_sent
        for i, item in enumerate(flat):
            sentences[min(int(i / per), n_sent - 1)].append(item)
        out = []
        for sent in sentences:
            toks = [w for item in sent for w in (item if isinstance(item, list) else [item])]
            out.append(" ".join(toks).capitalize() + ".")
        return " ".join(out)

    def example(self) -> DatasetExample:
        title = [self.words.fresh(), self.words.fresh()]
        n_facts = sum(RELEVANT_FACTS) + sum(HIDDEN_FACTS)
        facts = [[self.words.fresh(2) for _ in range(FACT_WORDS)] for _ in range(n_facts)]

        summary = list(title) + ["foi"]
        for i, fact in enumerate(facts):
            if i:
                summary.append(_CONNECTORS[i % len(_CONNECTORS)])
            summary.extend(fact)

        units = []
        k = 0
        for count in RELEVANT_FACTS:
            units.append(self._unit([[title[0]], [title[1]]] + facts[k : k + count]))
            k += count
        for count in HIDDEN_FACTS:
            units.append(self._unit(facts[k : k + count]))
            k += count
        for i in range(N_WEAK):
            units.append(self._unit([[title[i % 2]]]))
        units += [self._unit([]) for _ in range(N_FILLER)]

        order = self.rng.permutation(len(units))
        docs: List[str] = []
        i = 0
        while i < len(order):
            size = int(self.rng.integers(2, 5))
            docs.append(" ".join(units[j] for j in order[i : i + size]))
            i += size
        return DatasetExample(" ".join(title).title(), " ".join(summary).capitalize() + ".", docs)

    def examples(self, n: int, config: Optional[FilterConfig] = FilterConfig()) -> Iterator[DatasetExample]:
        """``n`` examples; with a config, only those passing it untouched."""
        made = 0
        while made < n:
            ex = self.example()
            if config is not None:
                out = apply_filters(ex, config)
                if not isinstance(out, DatasetExample) or len(out.docs) != len(ex.docs):
                    continue
            made += 1
            yield ex


def make_fixture(n: int = FIXTURE_SIZE, seed: int = FIXTURE_SEED) -> List[DatasetExample]:
    return list(SyntheticGenerator(seed).examples(n))
