import pytest
from hypothesis import given, settings, strategies as st

from oracles import nearest_rank as nearest_rank_oracle
from wikilead.corpus import CorpusRecord, DatasetExample
from wikilead.dataset import (
    FilterConfig,
    RejectReason,
    TitleMatcher,
    apply_filters,
    build_dataset,
    clone_score,
    compute_stats,
    format_stats,
    match_documents,
    nearest_rank,
    split_dataset,
)
from conftest import words


def rec(i, text):
    return CorpusRecord(f"d{i}", f"http://x/{i}", "", text)


def test_filter_defaults():
    assert FilterConfig() == FilterConfig(15, 1000, 20, 0.5)


def test_match_any_order():
    assert match_documents("santos dumont", [rec(0, "dumont visitou santos ontem")])


def test_match_missing_word():
    assert match_documents("santos dumont", [rec(0, "o porto de santos")]) == []


def test_match_whole_words_case_insensitive():
    corpus = [rec(0, "Santos-Dumont voou"), rec(1, "SANTOS, Dumont."), rec(2, "santosdumont")]
    assert [r.docid for r in match_documents("Santos Dumont", corpus)] == ["d1"]


def test_match_keeps_first_fifteen():
    corpus = [rec(i, "santos dumont") for i in range(20)]
    got = match_documents("santos dumont", corpus, max_docs=15)
    assert [r.docid for r in got] == [f"d{i}" for i in range(15)]


def test_match_empty_title():
    with pytest.raises(ValueError):
        match_documents(" ... ", [])


def test_title_matcher_agrees_with_match_documents():
    corpus = [
        rec(0, "santos dumont inventor"),
        rec(1, "mário de andrade poeta"),
        rec(2, "andrade, mário e santos"),
        rec(3, "dumont santos"),
        rec(4, "de"),
    ]
    titles = ["Santos Dumont", "Mário de Andrade", "De"]
    matcher = TitleMatcher(titles, max_docs=1).feed_all(corpus)
    for t in titles:
        assert matcher.matches[t] == match_documents(t, corpus, max_docs=1)


@given(st.permutations(["alberto", "santos", "dumont"]))
def test_match_invariant_to_title_order(title_words):
    corpus = [rec(0, "alberto santos dumont"), rec(1, "santos dumont"), rec(2, "dumont alberto x santos")]
    assert match_documents(" ".join(title_words), corpus) == match_documents("alberto santos dumont", corpus)


@pytest.mark.parametrize(
    "doc, summary, expected",
    [("a b c", "a b c", 1.0), ("x y z", "a b c", 0.0), ("a b a", "a b c", 2 / 3)],
)
def test_clone_score(doc, summary, expected):
    assert clone_score(doc.split(), summary.split()) == pytest.approx(expected, abs=1e-15)


def test_clone_score_empty_summary():
    with pytest.raises(ValueError):
        clone_score(["a"], [])


@given(st.lists(st.sampled_from("abcdef"), max_size=20), st.lists(st.sampled_from("abcdef"), min_size=1, max_size=20))
def test_clone_score_bounds(doc, summary):
    assert 0.0 <= clone_score(doc, summary) <= 1.0
    assert clone_score(summary, summary) == 1.0


SUMMARY = words(20, "s")


def test_reject_too_few_input_words():
    ex = DatasetExample("t", SUMMARY, [words(500), words(499)])
    assert apply_filters(ex) is RejectReason.TOO_FEW_INPUT_WORDS


def test_accept_exactly_thousand_words():
    ex = DatasetExample("t", SUMMARY, [words(500), words(500)])
    assert apply_filters(ex) == ex


def test_reject_short_summary():
    ex = DatasetExample("t", words(19, "s"), [words(2000)])
    assert apply_filters(ex) is RejectReason.SUMMARY_TOO_SHORT


def test_clone_removed_before_word_count():
    # 12 of the summary's 20 words: clone score 0.6
    clone = words(12, "s") + " " + words(1200)
    ex = DatasetExample("t", SUMMARY, [clone, words(1000, "k")])
    out = apply_filters(ex)
    assert out.docs == [words(1000, "k")]
    # without the second doc the clone alone can't carry the example
    assert apply_filters(DatasetExample("t", SUMMARY, [clone])) is RejectReason.NO_MATCHING_DOCS
    assert apply_filters(
        DatasetExample("t", SUMMARY, [clone, words(999, "k")])
    ) is RejectReason.TOO_FEW_INPUT_WORDS


def test_no_docs():
    assert apply_filters(DatasetExample("t", SUMMARY, [])) is RejectReason.NO_MATCHING_DOCS


def test_filters_truncate_to_max_docs():
    docs = [words(100, f"d{i}x") for i in range(20)]
    out = apply_filters(DatasetExample("t", SUMMARY, docs))
    assert out.docs == docs[:15]


def test_build_dataset_end_to_end():
    corpus = [rec(i, "santos dumont " + words(600, f"c{i}")) for i in range(3)]
    corpus.append(rec(9, "feudalismo " + words(10)))
    wiki = [("Santos Dumont", SUMMARY), ("Feudalismo", SUMMARY), ("Ausente", SUMMARY)]
    rejects = {}
    out = list(build_dataset(corpus, wiki, rejects=rejects))
    assert [e.title for e in out] == ["Santos Dumont"]
    assert len(out[0].docs) == 3
    assert rejects == {"TooFewInputWords": 1, "NoMatchingDocs": 1}


@given(st.lists(st.integers(0, 2), min_size=0, max_size=6))
@settings(max_examples=50)
def test_accepted_examples_satisfy_bounds(doc_kinds):
    # kinds: 0 = short doc, 1 = long doc, 2 = clone
    pieces = {0: words(300, "a"), 1: words(800, "b"), 2: SUMMARY + " " + words(50, "c")}
    ex = DatasetExample("t", SUMMARY, [pieces[k] for k in doc_kinds])
    out = apply_filters(ex)
    if isinstance(out, DatasetExample):
        cfg = FilterConfig()
        assert 1 <= len(out.docs) <= cfg.max_docs
        assert sum(len(d.split()) for d in out.docs) >= cfg.min_total_input_words
        assert all(clone_score(d.split(), SUMMARY.split()) <= cfg.clone_threshold for d in out.docs)


def test_split_paper_sizes():
    items = list(range(114652))
    train, val, test = split_dataset(items, (0.8, 0.1, 0.1), seed=0)
    assert (len(train), len(val), len(test)) == (91722, 11465, 11465)
    assert sorted(train + val + test) == items


def test_split_ten():
    assert tuple(map(len, split_dataset(list(range(10))))) == (8, 1, 1)


def test_split_deterministic():
    items = list(range(50))
    assert split_dataset(items, seed=7) == split_dataset(items, seed=7)
    assert split_dataset(items, seed=7) != split_dataset(items, seed=8)


@pytest.mark.parametrize("bad", [(0.8, 0.1), (0.8, 0.1, 0.2), (1.2, -0.1, -0.1)])
def test_split_bad_ratios(bad):
    with pytest.raises(ValueError):
        split_dataset(list(range(10)), bad)


def test_split_too_small():
    with pytest.raises(ValueError):
        split_dataset([1, 2])


@given(st.lists(st.integers(), min_size=3, max_size=200), st.integers(0, 100))
def test_split_partitions(items, seed):
    parts = split_dataset(items, seed=seed)
    assert sorted(parts[0] + parts[1] + parts[2]) == sorted(items)


def test_nearest_rank_examples():
    values = [10, 20, 30, 40, 50]
    assert nearest_rank(values, 100) == 50
    assert nearest_rank(values, 20) == 10
    assert nearest_rank(values, 0) == 10


@given(st.lists(st.integers(0, 100), min_size=1, max_size=50), st.floats(0, 100))
def test_nearest_rank_matches_oracle(values, pct):
    assert nearest_rank(sorted(values), pct) == nearest_rank_oracle(values, pct)


def test_stats_single_example():
    ex = DatasetExample("t", words(25), [words(600), words(700)])
    table = compute_stats([ex])
    assert table["input_size_words"] == {p: 1300 for p in (20, 40, 60, 80, 100)}
    assert table["output_size_words"][60] == 25
    assert table["n_documents"][100] == 2


def test_stats_output_percentiles():
    exs = [DatasetExample("t", words(n), ["x"]) for n in (50, 10, 40, 20, 30)]
    table = compute_stats(exs)
    assert table["output_size_words"][100] == 50
    assert table["output_size_words"][20] == 10
    assert table["output_size_words"][40] == 20


def test_stats_empty():
    with pytest.raises(ValueError):
        compute_stats([])


def test_format_stats_layout():
    table = compute_stats([DatasetExample("t", words(25), [words(600)])])
    lines = format_stats(table).splitlines()
    assert lines[0].split() == ["Percentile", "(%)", "20", "40", "60", "80", "100"]
    assert lines[2].split()[-1] == "25"
