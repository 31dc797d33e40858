"""Vocabulary construction and skip-gram word embedding training.

Skip-gram with negative sampling, plain numpy, sequential updates from
a seeded generator so identical inputs give bit-identical matrices.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

DEFAULT_DIM = 200
DEFAULT_WINDOW = 5
DEFAULT_NEGATIVES = 5
DEFAULT_EPOCHS = 5
DEFAULT_MIN_COUNT = 2
DEFAULT_LR = 0.025


class VocabError(Exception):
    """No token survived the frequency threshold."""


@dataclass(frozen=True)
class Vocab:
    token_to_index: dict
    index_to_token: tuple
    min_count: int

    def __len__(self) -> int:
        return len(self.index_to_token)

    def __contains__(self, token) -> bool:
        return token in self.token_to_index


@dataclass(frozen=True)
class EmbeddingMatrix:
    vectors: np.ndarray  # |V| x dim
    dim: int


@dataclass(frozen=True)
class SkipgramResult:
    matrix: EmbeddingMatrix
    epoch_losses: tuple  # mean loss per training pair, one entry per epoch


def build_vocab(corpus, min_count: int = DEFAULT_MIN_COUNT) -> Vocab:
    """Index tokens with frequency >= min_count, most frequent first.

    Ties are broken lexicographically. Raises VocabError when nothing
    survives (including an empty corpus).
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    freqs = Counter()
    for tweet in corpus:
        freqs.update(tweet.tokens)
    kept = sorted(
        (t for t, c in freqs.items() if c >= min_count),
        key=lambda t: (-freqs[t], t),
    )
    if not kept:
        raise VocabError(
            f"empty vocabulary: no token reached min_count={min_count} "
            f"over {len(freqs)} distinct tokens"
        )
    return Vocab(
        token_to_index={t: i for i, t in enumerate(kept)},
        index_to_token=tuple(kept),
        min_count=min_count,
    )


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def train_skipgram(
    corpus,
    vocab: Vocab,
    dim: int = DEFAULT_DIM,
    window: int = DEFAULT_WINDOW,
    negatives: int = DEFAULT_NEGATIVES,
    epochs: int = DEFAULT_EPOCHS,
    seed: int = 0,
    lr: float = DEFAULT_LR,
) -> SkipgramResult:
    """Train skip-gram embeddings with negative sampling.

    The learning rate decays linearly over all (epoch, position) steps
    down to 1e-4 of its start value, per the classic schedule.
    """
    if len(vocab) == 0:
        raise ValueError("vocabulary is empty")
    if dim < 1:
        raise ValueError("dim must be >= 1")

    rng = np.random.default_rng(seed)
    n_vocab = len(vocab)
    w_in = rng.uniform(-0.5 / dim, 0.5 / dim, size=(n_vocab, dim))
    w_out = np.zeros((n_vocab, dim))

    sentences = [
        [vocab.token_to_index[t] for t in tweet.tokens if t in vocab.token_to_index]
        for tweet in corpus
    ]
    sentences = [s for s in sentences if len(s) >= 2]

    # noise distribution: unigram frequency ** 0.75
    freqs = np.zeros(n_vocab)
    for s in sentences:
        for idx in s:
            freqs[idx] += 1
    noise = np.maximum(freqs, 1.0) ** 0.75
    noise_cdf = np.cumsum(noise / noise.sum())

    total_positions = max(1, epochs * sum(len(s) for s in sentences))
    step = 0
    epoch_losses = []
    for _ in range(epochs):
        loss_sum = 0.0
        n_pairs = 0
        for sentence in sentences:
            for pos, center in enumerate(sentence):
                alpha = lr * max(1e-4, 1.0 - step / total_positions)
                step += 1
                lo = max(0, pos - window)
                hi = min(len(sentence), pos + window + 1)
                for ctx_pos in range(lo, hi):
                    if ctx_pos == pos:
                        continue
                    context = sentence[ctx_pos]
                    targets = np.empty(1 + negatives, dtype=np.int64)
                    targets[0] = context
                    targets[1:] = np.searchsorted(noise_cdf, rng.random(negatives))
                    labels = np.zeros(1 + negatives)
                    labels[0] = 1.0

                    v_center = w_in[center].copy()
                    v_targets = w_out[targets]  # fancy index: a copy
                    scores = _sigmoid(v_targets @ v_center)
                    loss_sum += -np.log(np.clip(scores[0], 1e-12, None)) - np.sum(
                        np.log(np.clip(1.0 - scores[1:], 1e-12, None))
                    )
                    n_pairs += 1
                    grad = (scores - labels)[:, None]  # d loss / d score input
                    w_in[center] -= alpha * (grad * v_targets).sum(axis=0)
                    np.add.at(w_out, targets, -alpha * grad * v_center[None, :])
        epoch_losses.append(loss_sum / n_pairs if n_pairs else 0.0)

    return SkipgramResult(
        matrix=EmbeddingMatrix(vectors=w_in, dim=dim),
        epoch_losses=tuple(epoch_losses),
    )


def embed_sequence(tokens, vocab: Vocab, matrix: EmbeddingMatrix, max_len: int):
    """Look up token vectors into a fixed max_len x dim array.

    Out-of-vocabulary tokens are skipped; the first max_len in-vocab
    tokens are kept and the remainder of the array is zero padding.
    Returns (array, valid_length).
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    out = np.zeros((max_len, matrix.dim))
    n = 0
    for token in tokens:
        idx = vocab.token_to_index.get(token)
        if idx is None:
            continue
        if n == max_len:
            break
        out[n] = matrix.vectors[idx]
        n += 1
    return out, n


def save_embeddings(path, vocab: Vocab, matrix: EmbeddingMatrix) -> None:
    """Text format: header 'V dim', then one 'token v1 ... vd' line per word."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{len(vocab)} {matrix.dim}\n")
        for i, token in enumerate(vocab.index_to_token):
            values = " ".join(f"{x:.17g}" for x in matrix.vectors[i])
            handle.write(f"{token} {values}\n")


def load_embeddings(path) -> tuple[Vocab, EmbeddingMatrix]:
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().split()
        n_vocab, dim = int(header[0]), int(header[1])
        tokens = []
        vectors = np.zeros((n_vocab, dim))
        for i in range(n_vocab):
            parts = handle.readline().rstrip("\n").split(" ")
            tokens.append(parts[0])
            vectors[i] = [float(x) for x in parts[1:]]
    vocab = Vocab(
        token_to_index={t: i for i, t in enumerate(tokens)},
        index_to_token=tuple(tokens),
        min_count=1,
    )
    return vocab, EmbeddingMatrix(vectors=vectors, dim=dim)
