"""ROUGE-1, ROUGE-2 and ROUGE-L with precision, recall and F1."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Sequence

from wikilead.text import ngrams, normalize, tokenize_words


@dataclass(frozen=True)
class PrfScore:
    precision: float = 0.0
    recall: float = 0.0
    f1: float = 0.0

    @classmethod
    def from_counts(cls, matches: int, n_candidate: int, n_reference: int) -> "PrfScore":
        p = matches / n_candidate if n_candidate else 0.0
        r = matches / n_reference if n_reference else 0.0
        return cls(p, r, f1(p, r))

    def to_dict(self) -> Dict[str, float]:
        return {"p": self.precision, "r": self.recall, "f": self.f1}


@dataclass(frozen=True)
class RougeReport:
    r1: PrfScore
    r2: PrfScore
    rl: PrfScore

    def to_dict(self) -> Dict[str, Dict[str, float]]:
        return {"r1": self.r1.to_dict(), "r2": self.r2.to_dict(), "rl": self.rl.to_dict()}


METRICS = ("r1", "r2", "rl")


def f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def rouge_n(candidate: Sequence[str], reference: Sequence[str], n: int) -> PrfScore:
    """Clipped n-gram overlap: each n-gram matches at most min(count_c, count_r)."""
    cand = ngrams(candidate, n)
    ref = ngrams(reference, n)
    if len(cand) > len(ref):
        cand, ref = ref, cand
    matches = sum(min(c, ref[g]) for g, c in cand.items() if g in ref)
    n_cand = max(0, len(candidate) - n + 1)
    n_ref = max(0, len(reference) - n + 1)
    return PrfScore.from_counts(matches, n_cand, n_ref)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Longest common subsequence length.

    Bit-parallel row DP (Hyyro 2004): one machine-word-packed row of the
    classic table is kept as a Python int and updated once per token of
    the longer sequence.
    """
    if len(a) > len(b):
        a, b = b, a
    m = len(a)
    if m == 0:
        return 0
    masks: Dict[str, int] = {}
    for i, tok in enumerate(a):
        masks[tok] = masks.get(tok, 0) | (1 << i)
    full = (1 << m) - 1
    row = full
    for tok in b:
        match = masks.get(tok)
        if match:
            u = row & match
            row = ((row + u) | (row - u)) & full
    return m - bin(row).count("1")


def rouge_l(candidate: Sequence[str], reference: Sequence[str]) -> PrfScore:
    return PrfScore.from_counts(lcs_length(candidate, reference), len(candidate), len(reference))


def score_tokens(candidate: Sequence[str], reference: Sequence[str]) -> RougeReport:
    return RougeReport(
        rouge_n(candidate, reference, 1),
        rouge_n(candidate, reference, 2),
        rouge_l(candidate, reference),
    )


def score_pair(predicted: str, target: str) -> RougeReport:
    """Normalize and tokenize both texts, then compute R1, R2 and RL."""
    return score_tokens(tokenize_words(normalize(predicted)), tokenize_words(normalize(target)))
