"""Corpus-level ROUGE, percentile bootstrap intervals, the L sweep and the
extractive ablation experiment."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from wikilead.corpus import DatasetExample
from wikilead.dataset import nearest_rank
from wikilead.extractive import EXTRACTORS, run_extractor
from wikilead.rouge import METRICS, PrfScore, RougeReport, rouge_n, score_pair, score_tokens
from wikilead.text import DEFAULT_TARGET_WORDS, normalize, tokenize_words

N_RESAMPLES = 1000
LO_PCT = 2.5
HI_PCT = 97.5
DEFAULT_L_VALUES = tuple(range(0, 20, 2))


@dataclass(frozen=True)
class BootstrapCI:
    lo: float
    mean: float
    hi: float
    n_resamples: int = N_RESAMPLES
    lo_pct: float = LO_PCT
    hi_pct: float = HI_PCT

    def to_dict(self) -> dict:
        return {
            "lo": self.lo,
            "mean": self.mean,
            "hi": self.hi,
            "n_resamples": self.n_resamples,
            "lo_pct": self.lo_pct,
            "hi_pct": self.hi_pct,
        }


@dataclass(frozen=True)
class SweepPoint:
    L: int
    r2_recall_mean: float


def _mean(values: np.ndarray) -> float:
    # shifting by the first value keeps the mean of a constant vector exact
    base = values[0]
    return float(base + np.mean(values - base))


def mean_report(reports: Sequence[RougeReport]) -> RougeReport:
    if not reports:
        raise ValueError("cannot average an empty list of reports")
    fields = []
    for metric in METRICS:
        scores = [getattr(r, metric) for r in reports]
        fields.append(
            PrfScore(
                _mean(np.array([s.precision for s in scores])),
                _mean(np.array([s.recall for s in scores])),
                _mean(np.array([s.f1 for s in scores])),
            )
        )
    return RougeReport(*fields)


def score_corpus(pairs: Sequence[Tuple[str, str]]) -> Tuple[List[RougeReport], RougeReport]:
    """Per-pair reports (predicted, target) and their field-wise mean."""
    if not pairs:
        raise ValueError("no pairs to score")
    reports = [score_pair(p, t) for p, t in pairs]
    return reports, mean_report(reports)


def bootstrap_ci(
    values: Sequence[float],
    n_resamples: int = N_RESAMPLES,
    lo_pct: float = LO_PCT,
    hi_pct: float = HI_PCT,
    seed: int = 0,
) -> BootstrapCI:
    """Percentile interval of resampled means.

    Resample ``i`` draws from its own PCG64 stream seeded with ``(seed, i)``,
    so results do not depend on how resamples are scheduled.
    """
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        raise ValueError("bootstrap of an empty sample")
    if not 0 <= lo_pct < hi_pct <= 100:
        raise ValueError(f"need 0 <= lo_pct < hi_pct <= 100, got {lo_pct}, {hi_pct}")
    if n_resamples < 1:
        raise ValueError("n_resamples must be >= 1")
    n = data.size
    base = data[0]
    shifted = data - base
    means = np.empty(n_resamples)
    for i in range(n_resamples):
        idx = np.random.default_rng([seed, i]).integers(0, n, size=n)
        means[i] = shifted[idx].mean()
    means = np.sort(means + base)
    return BootstrapCI(
        lo=float(nearest_rank(means, lo_pct)),
        mean=_mean(data),
        hi=float(nearest_rank(means, hi_pct)),
        n_resamples=n_resamples,
        lo_pct=lo_pct,
        hi_pct=hi_pct,
    )


def _example_seed(seed: int, index: int) -> List[int]:
    return [seed, index]


def l_sweep(
    examples: Sequence[DatasetExample],
    extractor: str = "tfidf",
    L_values: Sequence[int] = DEFAULT_L_VALUES,
    seed: int = 0,
    target_words: int = DEFAULT_TARGET_WORDS,
) -> List[SweepPoint]:
    """Mean bigram recall of the extract (title and separators removed) per L.

    Every extractor's selection for L is a prefix of its selection for a
    larger L, so each example is extracted once at the largest L.
    """
    if not examples:
        raise ValueError("no examples to sweep")
    if list(L_values) != sorted(L_values) or (L_values and L_values[0] < 0):
        raise ValueError("L_values must be non-negative and ascending")
    if not L_values:
        return []
    L_max = L_values[-1]
    totals = np.zeros(len(L_values))
    for i, ex in enumerate(examples):
        result = run_extractor(extractor, ex, L_max, _example_seed(seed, i), target_words)
        target = tokenize_words(normalize(ex.summary))
        for j, L in enumerate(L_values):
            tokens = [t for s in result.selected[:L] for t in s.unit.tokens]
            totals[j] += rouge_n(tokens, target, 2).recall
    return [SweepPoint(L, float(t / len(examples))) for L, t in zip(L_values, totals)]


def extractive_reports(
    examples: Sequence[DatasetExample],
    extractor: str,
    L: int,
    seed: int = 0,
    target_words: int = DEFAULT_TARGET_WORDS,
) -> List[RougeReport]:
    reports = []
    for i, ex in enumerate(examples):
        result = run_extractor(extractor, ex, L, _example_seed(seed, i), target_words)
        tokens = [t for s in result.selected for t in s.unit.tokens]
        reports.append(score_tokens(tokens, tokenize_words(normalize(ex.summary))))
    return reports


def run_experiment1(
    examples: Sequence[DatasetExample],
    L: int = 5,
    seed: int = 0,
    n_resamples: int = N_RESAMPLES,
    lo_pct: float = LO_PCT,
    hi_pct: float = HI_PCT,
    extractors: Sequence[str] = EXTRACTORS,
    target_words: int = DEFAULT_TARGET_WORDS,
) -> Dict[str, Dict[str, BootstrapCI]]:
    """Mean and bootstrap interval of R1/R2/RL F1 for each extractor."""
    if not examples:
        raise ValueError("no examples for the experiment")
    table: Dict[str, Dict[str, BootstrapCI]] = {}
    for name in extractors:
        reports = extractive_reports(examples, name, L, seed, target_words)
        table[name] = {
            metric: bootstrap_ci(
                [getattr(r, metric).f1 for r in reports], n_resamples, lo_pct, hi_pct, seed
            )
            for metric in METRICS
        }
    return table


_DISPLAY = {"tfidf": "TFIDF", "random": "Random", "cheating": "Cheating"}


def format_experiment(table: Dict[str, Dict[str, BootstrapCI]]) -> str:
    """Aligned text table, percentages with [lo, hi] bounds."""
    rows = [["Model", "R1 F (%)", "R2 F (%)", "RL F (%)"]]
    for name, cis in table.items():
        cells = [_DISPLAY.get(name, name)]
        for metric in METRICS:
            ci = cis[metric]
            cells.append(f"{100 * ci.mean:.1f} [{100 * ci.lo:.1f}, {100 * ci.hi:.1f}]")
        rows.append(cells)
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def format_sweep(points: Sequence[SweepPoint]) -> str:
    lines = ["L   R2 R (%)"]
    lines += [f"{p.L:<3d} {100 * p.r2_recall_mean:8.2f}" for p in points]
    return "\n".join(lines)


def experiment_to_json(table: Dict[str, Dict[str, BootstrapCI]], L: int, seed: int) -> dict:
    return {
        "L": L,
        "seed": seed,
        "rows": {
            name: {f"{m}_f": ci.to_dict() for m, ci in cis.items()} for name, cis in table.items()
        },
    }
