import random
import statistics

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import rouge_n_prf
from wikilead.corpus import DatasetExample
from wikilead.evaluation import (
    bootstrap_ci,
    experiment_to_json,
    format_experiment,
    format_sweep,
    l_sweep,
    run_experiment1,
    score_corpus,
)
from wikilead.rouge import METRICS, score_pair
from wikilead.text import normalize, tokenize_words

PAIRS = [
    ("o gato preto dorme", "o gato branco dorme"),
    ("santos dumont voou", "alberto santos dumont foi aviador"),
    ("", "algo"),
    ("a b c d", "a c b d"),
    ("mesmo texto aqui", "mesmo texto aqui"),
]


def test_score_corpus_single():
    reports, mean = score_corpus(PAIRS[:1])
    assert mean == reports[0] == score_pair(*PAIRS[0])


def test_score_corpus_two_extremes():
    _, mean = score_corpus([("a b", "a b"), ("x y", "a b")])
    assert mean.r1.f1 == 0.5


def test_score_corpus_mean_matches_fold():
    reports, mean = score_corpus(PAIRS)
    # independent fold over the brute-force ROUGE-1 oracle
    folded = [0.0, 0.0, 0.0]
    for pred, tgt in PAIRS:
        prf = rouge_n_prf(tokenize_words(normalize(pred)), tokenize_words(normalize(tgt)), 1)
        folded = [acc + v for acc, v in zip(folded, prf)]
    expected = [v / len(PAIRS) for v in folded]
    assert [mean.r1.precision, mean.r1.recall, mean.r1.f1] == pytest.approx(expected, abs=1e-12)
    assert len(reports) == len(PAIRS)


def test_score_corpus_empty():
    with pytest.raises(ValueError):
        score_corpus([])


def test_score_corpus_permutation_invariant():
    shuffled = PAIRS[:]
    random.Random(1).shuffle(shuffled)
    a, b = score_corpus(PAIRS)[1], score_corpus(shuffled)[1]
    for m in METRICS:
        for field in ("precision", "recall", "f1"):
            assert getattr(getattr(a, m), field) == pytest.approx(getattr(getattr(b, m), field), abs=1e-12)


@pytest.mark.parametrize("c", [0.0, 0.1, 0.3333333333333333, 1.0])
def test_bootstrap_constant(c):
    ci = bootstrap_ci([c] * 37, n_resamples=200)
    assert ci.lo == ci.mean == ci.hi == c


def test_bootstrap_single_value():
    ci = bootstrap_ci([0.7])
    assert (ci.lo, ci.mean, ci.hi) == (0.7, 0.7, 0.7)


def test_bootstrap_defaults():
    ci = bootstrap_ci([0.0, 1.0])
    assert (ci.n_resamples, ci.lo_pct, ci.hi_pct) == (1000, 2.5, 97.5)


def test_bootstrap_golden():
    ci = bootstrap_ci([0.0, 1.0], seed=0)
    assert (ci.lo, ci.mean, ci.hi) == (0.0, 0.5, 1.0)
    ci = bootstrap_ci([i / 10 for i in range(10)], seed=0)
    assert ci.mean == 0.45
    assert ci.lo == pytest.approx(0.28, abs=1e-12)
    assert ci.hi == pytest.approx(0.62, abs=1e-12)


def test_bootstrap_errors():
    with pytest.raises(ValueError):
        bootstrap_ci([])
    with pytest.raises(ValueError):
        bootstrap_ci([1.0], lo_pct=90, hi_pct=10)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=30), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_bootstrap_deterministic_and_ordered(values, seed):
    a = bootstrap_ci(values, n_resamples=101, seed=seed)
    assert a == bootstrap_ci(values, n_resamples=101, seed=seed)
    assert a.lo <= a.hi


def test_bootstrap_median_sandwich():
    rng = np.random.default_rng(5)
    values = rng.random(50)
    ci = bootstrap_ci(values, n_resamples=301, seed=2)
    means = sorted(
        float(values[np.random.default_rng([2, i]).integers(0, 50, size=50)].mean()) for i in range(301)
    )
    assert ci.lo <= statistics.median(means) <= ci.hi


def test_sweep_zero_and_monotone(fixture_examples):
    sample = fixture_examples[:20]
    for extractor in ("tfidf", "cheating"):
        points = l_sweep(sample, extractor, [0, 1, 2, 3, 5, 8, 13])
        assert points[0].L == 0 and points[0].r2_recall_mean == 0.0
        recalls = [p.r2_recall_mean for p in points]
        assert recalls == sorted(recalls)
        assert all(0.0 <= r <= 1.0 for r in recalls)


def test_sweep_cheating_exact_target():
    target = "alberto santos dumont foi um aeronauta brasileiro"
    ex = DatasetExample("Santos Dumont", target, ["outra frase sem nada. " + target + ". fim do texto."])
    points = l_sweep([ex], "cheating", [0, 1], target_words=1)
    assert points[1].r2_recall_mean == 1.0


def test_sweep_matches_direct_extraction(fixture_examples):
    from wikilead.extractive import select_tfidf
    from wikilead.rouge import rouge_n

    sample = fixture_examples[:5]
    points = l_sweep(sample, "tfidf", [3])
    direct = [
        rouge_n(
            tokenize_words(select_tfidf(ex, 3).extract_text()),
            tokenize_words(normalize(ex.summary)),
            2,
        ).recall
        for ex in sample
    ]
    assert points[0].r2_recall_mean == pytest.approx(sum(direct) / 5, abs=1e-12)


def test_sweep_errors(fixture_examples):
    with pytest.raises(ValueError):
        l_sweep([], "tfidf", [0])
    with pytest.raises(ValueError):
        l_sweep(fixture_examples[:1], "tfidf", [4, 2])


def test_experiment_shape(fixture_examples):
    table = run_experiment1(fixture_examples[:10], L=5, seed=0, n_resamples=50)
    assert list(table) == ["random", "tfidf", "cheating"]
    for cis in table.values():
        assert list(cis) == ["r1", "r2", "rl"]
        for ci in cis.values():
            assert ci.lo <= ci.hi and ci.n_resamples == 50
    text = format_experiment(table)
    assert text.splitlines()[0].split()[:3] == ["Model", "R1", "F"]
    assert len(text.splitlines()) == 4
    obj = experiment_to_json(table, 5, 0)
    assert set(obj["rows"]["tfidf"]) == {"r1_f", "r2_f", "rl_f"}


def test_experiment_ordering_on_small_fixture(fixture_examples):
    table = run_experiment1(fixture_examples[:40], n_resamples=20)
    r2 = {name: cis["r2"].mean for name, cis in table.items()}
    assert r2["random"] < r2["tfidf"] < r2["cheating"]


def test_format_sweep():
    from wikilead.evaluation import SweepPoint

    assert format_sweep([SweepPoint(0, 0.0), SweepPoint(2, 0.031)]).splitlines()[2].split() == ["2", "3.10"]
