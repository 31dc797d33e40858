"""Valence-lexicon sentiment scoring and three-way rating."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from importlib import resources

# normalization constant for the compound score S / sqrt(S^2 + alpha)
DEFAULT_ALPHA = 15.0


@dataclass(frozen=True)
class SentimentScores:
    pos: float
    neg: float
    neu: float
    compound: float


@dataclass(frozen=True)
class ValenceLexicon:
    entries: dict  # token -> valence

    def valence(self, token: str):
        return self.entries.get(token)


def load_lexicon(path=None) -> ValenceLexicon:
    """Read a token<TAB>valence lexicon; bundled default if no path."""
    if path is None:
        text = resources.files("covsent.data").joinpath("valence_lexicon.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    entries = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        token, _, value = line.partition("\t")
        entries[token.strip().lower()] = float(value)
    return ValenceLexicon(entries=entries)


def score(tweet, lexicon: ValenceLexicon, alpha: float = DEFAULT_ALPHA) -> SentimentScores:
    """Score a token sequence against the valence lexicon.

    compound = S / sqrt(S^2 + alpha) where S is the summed valence of
    tokens found in the lexicon; pos/neg/neu are the fractions of
    tokens with positive, negative, and zero-or-absent valence.
    """
    tokens = list(tweet.tokens)
    if not tokens:
        return SentimentScores(pos=0.0, neg=0.0, neu=1.0, compound=0.0)
    total = 0.0
    n_pos = n_neg = 0
    for token in tokens:
        valence = lexicon.valence(token)
        if valence is None or valence == 0:
            continue
        total += valence
        if valence > 0:
            n_pos += 1
        else:
            n_neg += 1
    n = len(tokens)
    compound = total / math.sqrt(total * total + alpha)
    return SentimentScores(
        pos=n_pos / n,
        neg=n_neg / n,
        neu=(n - n_pos - n_neg) / n,
        compound=compound,
    )


def classify(compound: float) -> float:
    """Three-way rating: <0 -> 0.0 (negative), >0 -> 1.0 (positive),
    exactly 0 -> 0.5 (neutral)."""
    if compound < 0:
        return 0.0
    if compound > 0:
        return 1.0
    return 0.5


@dataclass(frozen=True)
class ClassDistribution:
    positive_pct: float
    negative_pct: float
    neutral_pct: float
    count: int


def class_distribution(labels) -> ClassDistribution:
    """Percentage of tweets per class; all-zero for empty input."""
    labels = list(labels)
    if not labels:
        return ClassDistribution(0.0, 0.0, 0.0, 0)
    tally = Counter(labels)
    n = len(labels)
    return ClassDistribution(
        positive_pct=100.0 * tally.get(1.0, 0) / n,
        negative_pct=100.0 * tally.get(0.0, 0) / n,
        neutral_pct=100.0 * tally.get(0.5, 0) / n,
        count=n,
    )
