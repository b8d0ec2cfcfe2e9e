"""Multi-document Wikipedia lead summarization: dataset construction,
extractive stages, ROUGE evaluation and an external abstractive adapter."""

from wikilead.text import normalize, ngrams, split_sentences, tokenize_words, SentenceUnit
from wikilead.corpus import CorpusRecord, DatasetExample, read_corpus, read_examples, write_examples
from wikilead.rouge import PrfScore, RougeReport, lcs_length, rouge_l, rouge_n, score_pair
from wikilead.extractive import (
    ExtractResult,
    ScoredSentence,
    select_cheating,
    select_random,
    select_tfidf,
)

__version__ = "0.1.0"

__all__ = [
    "CorpusRecord",
    "DatasetExample",
    "ExtractResult",
    "PrfScore",
    "RougeReport",
    "ScoredSentence",
    "SentenceUnit",
    "lcs_length",
    "ngrams",
    "normalize",
    "read_corpus",
    "read_examples",
    "rouge_l",
    "rouge_n",
    "score_pair",
    "select_cheating",
    "select_random",
    "select_tfidf",
    "split_sentences",
    "tokenize_words",
    "write_examples",
]
