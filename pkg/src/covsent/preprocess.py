"""Tweet text cleaning, tokenization, stopword removal and stemming."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from . import porter
from .corpus import TweetRecord

_URL_RE = re.compile(r"https?://\S+|www\.\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_RT_RE = re.compile(r"^\s*RT\b", re.IGNORECASE)
# keep letters, digits and apostrophes; strip everything else to spaces
_NON_WORD_RE = re.compile(r"[^a-z0-9']+")
# apostrophes only survive between word characters (intra-word)
_EDGE_APOS_RE = re.compile(r"'+(?=\s|$)|(?:^|(?<=\s))'+")


@dataclass(frozen=True)
class CleanTweet:
    tweet_id: int
    tokens: tuple[str, ...]


def clean_text(raw: str) -> str:
    """Normalize raw tweet text to lowercase space-separated words.

    Drops URLs, @mentions and a leading RT marker, keeps hashtag bodies
    (the '#' itself is removed), strips punctuation except intra-word
    apostrophes, collapses whitespace.
    """
    text = _RT_RE.sub(" ", raw)
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    text = text.replace("#", " ")
    text = text.lower()
    text = _NON_WORD_RE.sub(" ", text)
    text = _EDGE_APOS_RE.sub("", text)
    # leftover url fragments (e.g. truncated links) carry no signal
    return " ".join(t for t in text.split() if "http" not in t)


def tokenize(cleaned: str) -> list[str]:
    """Split cleaned text on whitespace; never yields empty tokens."""
    return cleaned.split()


def load_stopwords(path=None) -> frozenset[str]:
    """Read a stopword file (one word per line, '#' comments ignored).

    With no path, the bundled default English list is used.
    """
    if path is None:
        text = resources.files("covsent.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


def remove_stopwords(tokens, stopwords) -> list[str]:
    """Drop tokens present in the stopword set (case-insensitive)."""
    return [t for t in tokens if t.lower() not in stopwords]


def stem(token: str) -> str:
    """Porter stem of a single lowercase token."""
    return porter.stem(token)


def preprocess(record: TweetRecord, stopwords) -> CleanTweet:
    """Full pipeline: clean, tokenize, remove stopwords, stem."""
    tokens = tokenize(clean_text(record.original_text))
    tokens = remove_stopwords(tokens, stopwords)
    return CleanTweet(tweet_id=record.id, tokens=tuple(stem(t) for t in tokens))
