"""Slow, obviously-correct reference computations used by the tests."""

from itertools import combinations


def ngram_list(tokens, n):
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def clipped_matches(candidate, reference, n):
    """Greedy one-for-one pairing of candidate n-grams with reference n-grams."""
    remaining = ngram_list(reference, n)
    matches = 0
    for g in ngram_list(candidate, n):
        if g in remaining:
            remaining.remove(g)
            matches += 1
    return matches


def rouge_n_prf(candidate, reference, n):
    m = clipped_matches(candidate, reference, n)
    nc = len(ngram_list(candidate, n))
    nr = len(ngram_list(reference, n))
    p = m / nc if nc else 0.0
    r = m / nr if nr else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def is_subsequence(sub, seq):
    it = iter(seq)
    return all(tok in it for tok in sub)


def lcs_exhaustive(a, b):
    """Longest subsequence of the shorter input that is also one of the other."""
    if len(a) > len(b):
        a, b = b, a
    for k in range(len(a), 0, -1):
        for idx in combinations(range(len(a)), k):
            if is_subsequence([a[i] for i in idx], b):
                return k
    return 0


def lcs_table(a, b):
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i, x in enumerate(a, 1):
        for j, y in enumerate(b, 1):
            table[i][j] = table[i - 1][j - 1] + 1 if x == y else max(table[i - 1][j], table[i][j - 1])
    return table[-1][-1]


def nearest_rank(values, pct):
    import math

    s = sorted(values)
    return s[max(1, math.ceil(pct / 100 * len(s))) - 1]
