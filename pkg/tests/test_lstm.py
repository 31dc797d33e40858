import math

import numpy as np
import pytest

from covsent import lstm


def tiny_params(dim=3, hidden=4, seed=0, dense_sizes=(5, 4, 3, 2)):
    params = lstm.init_params(dim, hidden, seed=seed, dense_sizes=dense_sizes)
    # keep relu pre-activations away from the kink so finite-difference
    # probes (h=1e-5) never straddle it
    for layer in range(len(dense_sizes)):
        params[f"bd{layer}"] += 0.1
    return params


def random_batch(rng, batch, steps, dim, min_len=0):
    x = rng.normal(size=(batch, steps, dim))
    lengths = rng.integers(min_len, steps + 1, size=batch)
    for i, n in enumerate(lengths):
        x[i, n:] = 0.0
    labels = np.zeros((batch, 2))
    labels[np.arange(batch), rng.integers(0, 2, size=batch)] = 1.0
    return x, lengths, labels


class TestForward:
    def test_outputs_in_unit_interval(self):
        params = tiny_params()
        out = lstm.forward(params, np.zeros((5, 3)), 5)
        assert out.shape == (2,)
        assert np.all((out > 0) & (out < 1))

    def test_zero_valid_length_uses_initial_state(self):
        params = tiny_params()
        rng = np.random.default_rng(0)
        seq = rng.normal(size=(5, 3))
        out = lstm.forward(params, seq, 0)
        # equals the dense stack applied to the zero hidden state
        expected = lstm.forward(params, np.zeros((5, 3)), 0)
        assert np.array_equal(out, expected)

    def test_shape_mismatch_rejected(self):
        params = tiny_params(dim=3)
        with pytest.raises(ValueError):
            lstm.forward(params, np.zeros((5, 7)), 5)

    def test_hand_computed_single_step_cell(self):
        # hidden=1, dim=1, every weight set by hand; scalar re-derivation
        # of the cell equations is the oracle
        w, u, b = 0.5, -0.3, 0.1
        params = {
            "W_i": np.array([[w]]), "U_i": np.array([[u]]), "b_i": np.array([b]),
            "W_f": np.array([[0.2]]), "U_f": np.array([[0.1]]), "b_f": np.array([1.0]),
            "W_o": np.array([[-0.4]]), "U_o": np.array([[0.3]]), "b_o": np.array([0.0]),
            "W_g": np.array([[0.7]]), "U_g": np.array([[-0.2]]), "b_g": np.array([0.2]),
            "Wd0": np.array([[1.5]]), "bd0": np.array([0.25]),
            "Wd1": np.array([[2.0], [0.0]]).T.reshape(1, 2), "bd1": np.array([0.1, -0.1]),
        }
        x = 0.8

        def sig(v):
            return 1.0 / (1.0 + math.exp(-v))

        gi = sig(w * x + b)
        gf = sig(0.2 * x + 1.0)
        go = sig(-0.4 * x)
        gg = math.tanh(0.7 * x + 0.2)
        c = gf * 0.0 + gi * gg
        h = go * math.tanh(c)
        a0 = max(1.5 * h + 0.25, 0.0)
        expected = np.array([sig(2.0 * a0 + 0.1), sig(0.0 * a0 - 0.1)])

        out = lstm.forward(params, np.array([[x]]), 1)
        assert np.allclose(out, expected, atol=1e-12)

    def test_padding_invariance(self):
        params = tiny_params()
        rng = np.random.default_rng(1)
        seq = rng.normal(size=(4, 3))
        padded = np.vstack([seq, np.zeros((6, 3))])
        assert np.array_equal(
            lstm.forward(params, padded[:7], 4), lstm.forward(params, padded, 4)
        )

    def test_gate_range_check_mode(self):
        params = tiny_params()
        lstm.forward(params, np.ones((3, 3)), 3, check_gates=True)


class TestLossAndGrad:
    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(123)
        params = tiny_params(dim=3, hidden=4, seed=9)
        x, lengths, labels = random_batch(rng, batch=3, steps=5, dim=3, min_len=1)
        _, grads = lstm.loss_and_grad(params, x, lengths, labels)
        h = 1e-5
        for key, tensor in params.items():
            flat = tensor.reshape(-1)
            for idx in range(0, flat.size, max(1, flat.size // 5)):
                orig = flat[idx]
                flat[idx] = orig + h
                up, _ = lstm.loss_and_grad(params, x, lengths, labels)
                flat[idx] = orig - h
                down, _ = lstm.loss_and_grad(params, x, lengths, labels)
                flat[idx] = orig
                numeric = (up - down) / (2 * h)
                analytic = grads[key].reshape(-1)[idx]
                denom = max(abs(numeric), abs(analytic), 1e-6)
                assert abs(numeric - analytic) / denom < 1e-3, (key, idx)

    def test_duplicated_sample_same_loss(self):
        rng = np.random.default_rng(5)
        params = tiny_params()
        x, lengths, labels = random_batch(rng, batch=1, steps=4, dim=3, min_len=1)
        single, _ = lstm.loss_and_grad(params, x, lengths, labels)
        dup, _ = lstm.loss_and_grad(
            params,
            np.repeat(x, 3, axis=0),
            np.repeat(lengths, 3),
            np.repeat(labels, 3, axis=0),
        )
        assert dup == pytest.approx(single, abs=1e-12)

    def test_zero_length_sequences_give_zero_recurrent_grads(self):
        params = tiny_params()
        x = np.zeros((2, 4, 3))
        labels = np.array([[1.0, 0.0], [0.0, 1.0]])
        _, grads = lstm.loss_and_grad(params, x, np.array([0, 0]), labels)
        for gate in lstm.GATES:
            assert np.all(grads[f"W_{gate}"] == 0.0)
            assert np.all(grads[f"U_{gate}"] == 0.0)
            assert np.all(grads[f"b_{gate}"] == 0.0)

    def test_empty_batch_rejected(self):
        params = tiny_params()
        with pytest.raises(ValueError):
            lstm.loss_and_grad(params, np.zeros((0, 4, 3)), np.array([]), np.zeros((0, 2)))

    def test_one_small_step_decreases_loss(self):
        for seed in range(10):
            rng = np.random.default_rng(seed)
            params = tiny_params(seed=seed)
            x, lengths, labels = random_batch(rng, batch=4, steps=5, dim=3, min_len=1)
            before, grads = lstm.loss_and_grad(params, x, lengths, labels)
            for key in params:
                params[key] -= 1e-4 * grads[key]
            after, _ = lstm.loss_and_grad(params, x, lengths, labels)
            assert after < before, f"seed {seed}"


class TestPredict:
    def test_argmax(self):
        params = tiny_params()
        # build outputs indirectly is fiddly; check the rule directly on
        # the forward output plus the documented tie-break
        rng = np.random.default_rng(2)
        seq = rng.normal(size=(4, 3))
        out = lstm.forward(params, seq, 4)
        expected = 1.0 if out[1] >= out[0] else 0.0
        assert lstm.predict(params, seq, 4) == expected


class TestCountParameters:
    def test_dense_32_to_2(self):
        params = {"Wd0": np.zeros((32, 2)), "bd0": np.zeros(2)}
        assert lstm.count_parameters(params) == 66

    def test_lstm_cell_hidden64_dim200(self):
        params = lstm.init_params(200, 64, seed=0, dense_sizes=())
        assert lstm.count_parameters(params) == 4 * (200 * 64 + 64 * 64 + 64)

    def test_zero_size_model(self):
        assert lstm.count_parameters({}) == 0

    def test_full_default_architecture(self):
        params = lstm.init_params(200, 64, seed=0)
        dense = 64 * 128 + 128 + 128 * 64 + 64 + 64 * 32 + 32 + 32 * 2 + 2
        assert lstm.count_parameters(params) == 67840 + dense == 86562


class TestTrain:
    @staticmethod
    def dataset(n=60, steps=4, dim=3, seed=0):
        rng = np.random.default_rng(seed)
        x, lengths, labels = random_batch(rng, n, steps, dim, min_len=1)
        return x, lengths, np.argmax(labels, axis=1).astype(float)

    def test_deterministic_under_seed(self):
        x, lengths, labels = self.dataset()
        config = lstm.TrainConfig(epochs=2, batch_size=8, seed=3, hidden=4)
        _, logs_a = lstm.train(x, lengths, labels, config)
        _, logs_b = lstm.train(x, lengths, labels, config)
        assert logs_a == logs_b

    def test_epoch_log_shape(self):
        x, lengths, labels = self.dataset()
        config = lstm.TrainConfig(epochs=3, batch_size=8, seed=1, hidden=4)
        _, logs = lstm.train(x, lengths, labels, config)
        assert [log.epoch for log in logs] == [1, 2, 3]
        for log in logs:
            assert 0.0 <= log.train_acc <= 100.0
            assert 0.0 <= log.val_acc <= 100.0
            assert log.train_loss >= 0.0

    def test_neutral_labels_rejected(self):
        x, lengths, _ = self.dataset(n=4)
        with pytest.raises(ValueError):
            lstm.train(x, lengths, np.array([0.0, 0.5, 1.0, 1.0]),
                       lstm.TrainConfig(epochs=1, seed=0, hidden=4))

    def test_single_class_warns_but_trains(self, caplog):
        x, lengths, _ = self.dataset(n=10)
        with caplog.at_level("WARNING"):
            _, logs = lstm.train(x, lengths, np.ones(10),
                                 lstm.TrainConfig(epochs=1, batch_size=4, seed=0, hidden=4))
        assert logs
        assert any("single class" in r.message for r in caplog.records)

    def test_split_out_partitions_dataset(self):
        x, lengths, labels = self.dataset(n=20)
        split: dict = {}
        lstm.train(x, lengths, labels,
                   lstm.TrainConfig(epochs=1, batch_size=8, seed=0, hidden=4),
                   split_out=split)
        assert sorted(split["train_idx"] + split["val_idx"]) == list(range(20))
        assert len(split["train_idx"]) == 16


def test_checkpoint_round_trip(tmp_path):
    params = tiny_params()
    path = tmp_path / "model.bin"
    lstm.save_checkpoint(path, params, {"dim": 3, "hidden": 4})
    loaded, meta = lstm.load_checkpoint(path)
    assert meta == {"dim": 3, "hidden": 4}
    assert set(loaded) == set(params)
    for key in params:
        assert np.array_equal(loaded[key], params[key])


def test_checkpoint_bytes_deterministic(tmp_path):
    params = tiny_params()
    a, b = tmp_path / "a.bin", tmp_path / "b.bin"
    lstm.save_checkpoint(a, params, {"k": 1})
    lstm.save_checkpoint(b, params, {"k": 1})
    assert a.read_bytes() == b.read_bytes()
