"""N-gram counting, MLE conditional probabilities and popularity reports.

No smoothing: probabilities of unseen events are reported as undefined
(None) rather than zero, so chain products fail loudly instead of
silently collapsing.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field


@dataclass(frozen=True)
class NgramCounts:
    """Frequency tables for one n-gram order.

    context_counts holds the number of times each (n-1)-gram is
    actually followed by a token, so MLE conditionals over a seen
    context always sum to exactly 1. unigram_counts holds plain token
    occurrence counts regardless of position.
    """

    order_n: int
    counts: dict = field(default_factory=dict)
    context_counts: dict = field(default_factory=dict)
    unigram_counts: dict = field(default_factory=dict)
    total_unigrams: int = 0


@dataclass(frozen=True)
class PopularityReport:
    entries: tuple  # ((ngram tuple, count), ...) descending by count
    k: int


@dataclass(frozen=True)
class SentenceProb:
    """Chain-rule probability with its per-factor breakdown.

    prob is None when any factor is undefined; failed_at then names the
    first offending factor.
    """

    prob: float | None
    factors: tuple  # ((description, value-or-None), ...)
    failed_at: str | None = None


def count_ngrams(corpus, n: int) -> NgramCounts:
    """Count n-grams per tweet; windows never span tweet boundaries."""
    if n not in (1, 2, 3):
        raise ValueError(f"n must be 1, 2 or 3, got {n}")
    counts: Counter = Counter()
    contexts: Counter = Counter()
    unigrams: Counter = Counter()
    total = 0
    for tweet in corpus:
        tokens = tuple(tweet.tokens)
        total += len(tokens)
        unigrams.update(tokens)
        for i in range(len(tokens) - n + 1):
            counts[tokens[i : i + n]] += 1
            if n >= 2:
                contexts[tokens[i : i + n - 1]] += 1
    return NgramCounts(
        order_n=n,
        counts=dict(counts),
        context_counts=dict(contexts),
        unigram_counts=dict(unigrams),
        total_unigrams=total,
    )


def conditional_prob(counts: NgramCounts, context: tuple, word: str) -> float | None:
    """MLE estimate count(context, word) / count(context).

    Returns None (undefined) for an unseen context.
    """
    if counts.order_n < 2:
        raise ValueError("conditional probabilities need order n >= 2")
    denom = counts.context_counts.get(tuple(context), 0)
    if denom == 0:
        return None
    return counts.counts.get(tuple(context) + (word,), 0) / denom


def _unigram_prob(counts: NgramCounts, word: str) -> float | None:
    if counts.total_unigrams == 0:
        return None
    c = counts.unigram_counts.get(word, 0)
    return None if c == 0 else c / counts.total_unigrams


def sentence_prob(counts: NgramCounts, sentence, model: str) -> SentenceProb:
    """Chain-rule probability of a token sequence.

    model='unigram' multiplies count(w)/total for each token (needs
    order-1 counts); model='bigram' multiplies P(w1) by the MLE
    conditional of each following token (needs order-2 counts).
    """
    sentence = list(sentence)
    if not sentence:
        raise ValueError("sentence must be non-empty")

    def defined(value):
        # an unseen event (zero count) is undefined, not zero, so the
        # chain product fails loudly instead of silently collapsing
        return value if value else None

    factors: list = []
    if model == "unigram":
        for w in sentence:
            factors.append((f"P({w})", defined(_unigram_prob(counts, w))))
    elif model == "bigram":
        if counts.order_n != 2:
            raise ValueError("bigram model needs order-2 counts")
        factors.append((f"P({sentence[0]})", defined(_unigram_prob(counts, sentence[0]))))
        for prev, w in zip(sentence, sentence[1:]):
            factors.append(
                (f"P({w}|{prev})", defined(conditional_prob(counts, (prev,), w)))
            )
    else:
        raise ValueError(f"unknown model {model!r}")

    prob = 1.0
    for name, value in factors:
        if value is None:
            return SentenceProb(prob=None, factors=tuple(factors), failed_at=name)
        prob *= value
    return SentenceProb(prob=prob, factors=tuple(factors))


def top_k(counts: NgramCounts, k: int) -> PopularityReport:
    """k most frequent n-grams, ties broken lexicographically."""
    if k < 0:
        raise ValueError("k must be >= 0")
    ordered = sorted(counts.counts.items(), key=lambda item: (-item[1], item[0]))
    return PopularityReport(entries=tuple(ordered[:k]), k=k)


def lexicon_frequency(corpus, lexicon) -> PopularityReport:
    """Occurrence counts of each lexicon token across the whole corpus.

    Zero-count lexicon entries are retained in the report.
    """
    lexicon = set(lexicon)
    if not lexicon:
        raise ValueError("lexicon must be non-empty")
    freqs = {token: 0 for token in lexicon}
    for tweet in corpus:
        for token in tweet.tokens:
            if token in freqs:
                freqs[token] += 1
    ordered = sorted(
        (((token,), count) for token, count in freqs.items()),
        key=lambda item: (-item[1], item[0]),
    )
    return PopularityReport(entries=tuple(ordered), k=len(ordered))
