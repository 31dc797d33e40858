import numpy as np
import pytest

from covsent import embedding
from covsent.preprocess import CleanTweet


def tweet(tokens, tweet_id=1):
    return CleanTweet(tweet_id=tweet_id, tokens=tuple(tokens))


def synthetic_cooccurrence_corpus(n=300):
    """x and y always appear together in-window (sharing a filler
    vocabulary of their own); x and z never co-occur and share nothing."""
    tweets = []
    for i in range(n):
        tweets.append(tweet(["x", "y", f"a{i % 4}"], tweet_id=2 * i))
        tweets.append(tweet(["z", "other", f"b{i % 4}"], tweet_id=2 * i + 1))
    return tweets


class TestBuildVocab:
    def test_min_count_filters(self):
        vocab = embedding.build_vocab([tweet(["a", "a", "a", "b"])], min_count=2)
        assert vocab.token_to_index == {"a": 0}

    def test_min_count_one_keeps_all(self):
        vocab = embedding.build_vocab([tweet(["a", "b", "b"])], min_count=1)
        assert set(vocab.token_to_index) == {"a", "b"}

    def test_index_by_frequency_then_lexicographic(self):
        vocab = embedding.build_vocab(
            [tweet(["b", "b", "c", "c", "a"])], min_count=1
        )
        assert vocab.index_to_token == ("b", "c", "a")

    def test_empty_corpus_fatal(self):
        with pytest.raises(embedding.VocabError):
            embedding.build_vocab([], min_count=1)

    def test_bijection(self):
        vocab = embedding.build_vocab([tweet(["a", "b", "c"])], min_count=1)
        for token, index in vocab.token_to_index.items():
            assert vocab.index_to_token[index] == token


class TestTrainSkipgram:
    def test_shape_contract(self):
        corpus = [tweet([f"w{i}", f"w{(i + 1) % 20}"]) for i in range(40)]
        vocab = embedding.build_vocab(corpus, min_count=1)
        result = embedding.train_skipgram(corpus, vocab, dim=16, epochs=1, seed=0)
        assert result.matrix.vectors.shape == (len(vocab), 16)
        assert np.all(np.isfinite(result.matrix.vectors))

    def test_deterministic_under_seed(self):
        corpus = synthetic_cooccurrence_corpus(30)
        vocab = embedding.build_vocab(corpus, min_count=1)
        a = embedding.train_skipgram(corpus, vocab, dim=8, epochs=2, seed=7)
        b = embedding.train_skipgram(corpus, vocab, dim=8, epochs=2, seed=7)
        assert np.array_equal(a.matrix.vectors, b.matrix.vectors)

    def test_different_seed_differs(self):
        corpus = synthetic_cooccurrence_corpus(10)
        vocab = embedding.build_vocab(corpus, min_count=1)
        a = embedding.train_skipgram(corpus, vocab, dim=8, epochs=1, seed=1)
        b = embedding.train_skipgram(corpus, vocab, dim=8, epochs=1, seed=2)
        assert not np.array_equal(a.matrix.vectors, b.matrix.vectors)

    def test_cooccurring_pair_closer_than_never_cooccurring(self):
        corpus = synthetic_cooccurrence_corpus()
        vocab = embedding.build_vocab(corpus, min_count=1)
        result = embedding.train_skipgram(corpus, vocab, dim=24, epochs=5, seed=3)
        vectors = result.matrix.vectors

        def cosine(u, v):
            return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))

        x = vectors[vocab.token_to_index["x"]]
        y = vectors[vocab.token_to_index["y"]]
        z = vectors[vocab.token_to_index["z"]]
        assert cosine(x, y) > cosine(x, z)

    def test_loss_non_increasing_first_epochs(self):
        corpus = synthetic_cooccurrence_corpus()
        vocab = embedding.build_vocab(corpus, min_count=1)
        result = embedding.train_skipgram(corpus, vocab, dim=24, epochs=3, seed=5)
        losses = result.epoch_losses
        assert losses[0] >= losses[1] >= losses[2]


class TestEmbedSequence:
    VOCAB = embedding.Vocab(
        token_to_index={"a": 0, "b": 1}, index_to_token=("a", "b"), min_count=1
    )
    MATRIX = embedding.EmbeddingMatrix(
        vectors=np.array([[1.0, 2.0], [3.0, 4.0]]), dim=2
    )

    def test_all_oov(self):
        seq, n = embedding.embed_sequence(["x", "y"], self.VOCAB, self.MATRIX, 3)
        assert n == 0
        assert np.array_equal(seq, np.zeros((3, 2)))

    def test_exact_fit_no_padding(self):
        seq, n = embedding.embed_sequence(["a", "b"], self.VOCAB, self.MATRIX, 2)
        assert n == 2
        assert np.array_equal(seq, self.MATRIX.vectors)

    def test_padding_rows_zero(self):
        seq, n = embedding.embed_sequence(["b", "a"], self.VOCAB, self.MATRIX, 5)
        assert n == 2
        assert np.array_equal(seq[0], [3.0, 4.0])
        assert np.array_equal(seq[1], [1.0, 2.0])
        assert np.array_equal(seq[2:], np.zeros((3, 2)))

    def test_truncation(self):
        seq, n = embedding.embed_sequence(["a", "b", "a"], self.VOCAB, self.MATRIX, 2)
        assert n == 2
        assert np.array_equal(seq[0], [1.0, 2.0])

    def test_oov_skipped_not_zeroed(self):
        seq, n = embedding.embed_sequence(["x", "a"], self.VOCAB, self.MATRIX, 3)
        assert n == 1
        assert np.array_equal(seq[0], [1.0, 2.0])

    def test_shape_always_max_len_by_dim(self):
        for tokens in ([], ["a"], ["a"] * 10):
            seq, _ = embedding.embed_sequence(tokens, self.VOCAB, self.MATRIX, 4)
            assert seq.shape == (4, 2)

    def test_max_len_validated(self):
        with pytest.raises(ValueError):
            embedding.embed_sequence(["a"], self.VOCAB, self.MATRIX, 0)


def test_save_load_round_trip(tmp_path):
    corpus = [tweet(["alpha", "beta", "alpha"])]
    vocab = embedding.build_vocab(corpus, min_count=1)
    result = embedding.train_skipgram(corpus, vocab, dim=6, epochs=1, seed=11)
    path = tmp_path / "emb.txt"
    embedding.save_embeddings(path, vocab, result.matrix)
    loaded_vocab, loaded_matrix = embedding.load_embeddings(path)
    assert loaded_vocab.index_to_token == vocab.index_to_token
    assert np.array_equal(loaded_matrix.vectors, result.matrix.vectors)
    assert loaded_matrix.dim == 6
