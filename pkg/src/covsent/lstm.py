"""Five-layer sequential model: LSTM + 128/64/32 ReLU dense + 2-unit sigmoid.

Forward, backward (BPTT) and the training loop are implemented directly
in numpy, in float64, so gradients can be checked against finite
differences. All randomness comes from seeded generators; sequential
training is bit-exact for a fixed seed.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

GATES = ("i", "f", "o", "g")  # input, forget, output, candidate
DENSE_SIZES = (128, 64, 32, 2)
DEFAULT_HIDDEN = 64


@dataclass
class TrainConfig:
    epochs: int = 30
    batch_size: int = 32
    split: float = 0.8
    seed: int = 0
    hidden: int = DEFAULT_HIDDEN
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not 0.0 < self.split < 1.0:
            raise ValueError("split fraction must be in (0, 1)")


@dataclass(frozen=True)
class EpochLog:
    epoch: int
    train_loss: float
    train_acc: float  # percent
    val_loss: float
    val_acc: float  # percent


def _sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def init_params(dim: int, hidden: int, seed: int = 0, dense_sizes=DENSE_SIZES) -> dict:
    """Glorot-uniform weights from a seeded generator; forget bias 1."""
    rng = np.random.default_rng(seed)
    params: dict[str, np.ndarray] = {}

    def glorot(fan_in, fan_out, shape):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        return rng.uniform(-limit, limit, size=shape)

    for gate in GATES:
        params[f"W_{gate}"] = glorot(dim, hidden, (dim, hidden))
        params[f"U_{gate}"] = glorot(hidden, hidden, (hidden, hidden))
        params[f"b_{gate}"] = np.zeros(hidden)
    params["b_f"] = np.ones(hidden)

    fan_in = hidden
    for layer, fan_out in enumerate(dense_sizes):
        params[f"Wd{layer}"] = glorot(fan_in, fan_out, (fan_in, fan_out))
        params[f"bd{layer}"] = np.zeros(fan_out)
        fan_in = fan_out
    return params


def _n_dense(params) -> int:
    n = 0
    while f"Wd{n}" in params:
        n += 1
    return n


def count_parameters(params: dict) -> int:
    return int(sum(v.size for v in params.values()))


def _forward_batch(params, x, lengths, check_gates=False):
    """x: (B, T, D); lengths: (B,). Returns (outputs (B, 2), cache)."""
    batch, steps, _ = x.shape
    hidden = params["b_i"].shape[0]
    h = np.zeros((batch, hidden))
    c = np.zeros((batch, hidden))
    cache = {"x": x, "lengths": lengths, "steps": []}
    for t in range(steps):
        mask = (t < lengths).astype(float)[:, None]
        xt = x[:, t, :]
        gi = _sigmoid(xt @ params["W_i"] + h @ params["U_i"] + params["b_i"])
        gf = _sigmoid(xt @ params["W_f"] + h @ params["U_f"] + params["b_f"])
        go = _sigmoid(xt @ params["W_o"] + h @ params["U_o"] + params["b_o"])
        gg = np.tanh(xt @ params["W_g"] + h @ params["U_g"] + params["b_g"])
        if check_gates:
            for name, g in (("input", gi), ("forget", gf), ("output", go)):
                assert np.all((g > 0) & (g < 1)), f"{name} gate out of (0,1)"
            assert np.all((gg > -1) & (gg < 1)), "candidate out of (-1,1)"
        c_new = gf * c + gi * gg
        h_new = go * np.tanh(c_new)
        cache["steps"].append(
            {"mask": mask, "xt": xt, "h_prev": h, "c_prev": c,
             "gi": gi, "gf": gf, "go": go, "gg": gg, "c_new": c_new}
        )
        c = mask * c_new + (1.0 - mask) * c
        h = mask * h_new + (1.0 - mask) * h

    activations = [h]
    a = h
    n_dense = _n_dense(params)
    for layer in range(n_dense):
        z = a @ params[f"Wd{layer}"] + params[f"bd{layer}"]
        a = _sigmoid(z) if layer == n_dense - 1 else np.maximum(z, 0.0)
        activations.append(a)
    cache["activations"] = activations
    return a, cache


def forward(params, sequence, valid_length: int, check_gates=False):
    """Single-sequence forward pass; sequence is (max_len, dim)."""
    sequence = np.asarray(sequence, dtype=float)
    if sequence.ndim != 2 or sequence.shape[1] != params["W_i"].shape[0]:
        raise ValueError(
            f"sequence shape {sequence.shape} does not match input dim "
            f"{params['W_i'].shape[0]}"
        )
    out, _ = _forward_batch(
        params, sequence[None, :, :], np.array([valid_length]), check_gates
    )
    return out[0]


def _loss_from_outputs(outputs, labels_onehot):
    """Cross-entropy against sigmoid outputs renormalized to sum 1."""
    s = outputs.sum(axis=1, keepdims=True)
    q = outputs / s
    per_sample = -np.sum(labels_onehot * np.log(q), axis=1)
    return per_sample, q, s


def loss_and_grad(params, sequences, lengths, labels_onehot):
    """Mean cross-entropy over a batch plus gradients for every tensor.

    sequences: (B, T, D); labels_onehot: (B, 2) rows of [neg, pos].
    """
    sequences = np.asarray(sequences, dtype=float)
    if sequences.ndim != 3:
        raise ValueError("expected a batch of sequences (B, T, D)")
    batch = sequences.shape[0]
    if batch == 0:
        raise ValueError("batch must be non-empty")
    lengths = np.asarray(lengths)
    labels_onehot = np.asarray(labels_onehot, dtype=float)

    outputs, cache = _forward_batch(params, sequences, lengths)
    per_sample, q, s = _loss_from_outputs(outputs, labels_onehot)
    bad = np.flatnonzero(~np.isfinite(per_sample))
    if bad.size:
        raise FloatingPointError(f"non-finite loss at sample index {bad[0]}")
    loss = per_sample.mean()

    grads = {k: np.zeros_like(v) for k, v in params.items()}

    # renormalized softmax-style backward: q = p / s
    dq = -labels_onehot / q / batch
    dp = dq / s - (np.sum(dq * outputs, axis=1, keepdims=True)) / (s * s)

    n_dense = _n_dense(params)
    activations = cache["activations"]
    delta = dp * outputs * (1.0 - outputs)  # through final sigmoid
    for layer in range(n_dense - 1, -1, -1):
        a_prev = activations[layer]
        grads[f"Wd{layer}"] = a_prev.T @ delta
        grads[f"bd{layer}"] = delta.sum(axis=0)
        if layer > 0:
            da = delta @ params[f"Wd{layer}"].T
            z_prev = activations[layer]  # relu output == max(z, 0)
            delta = da * (z_prev > 0.0)
        else:
            dh = delta @ params[f"Wd{layer}"].T

    dc = np.zeros_like(dh)
    for step in reversed(cache["steps"]):
        mask = step["mask"]
        dh_new = dh * mask
        dc_new = dc * mask
        dh_carry = dh * (1.0 - mask)
        dc_carry = dc * (1.0 - mask)

        tanh_c = np.tanh(step["c_new"])
        do = dh_new * tanh_c
        dc_total = dc_new + dh_new * step["go"] * (1.0 - tanh_c * tanh_c)
        df = dc_total * step["c_prev"]
        di = dc_total * step["gg"]
        dg = dc_total * step["gi"]
        dc_prev = dc_total * step["gf"]

        dz = {
            "i": di * step["gi"] * (1.0 - step["gi"]),
            "f": df * step["gf"] * (1.0 - step["gf"]),
            "o": do * step["go"] * (1.0 - step["go"]),
            "g": dg * (1.0 - step["gg"] * step["gg"]),
        }
        dh_prev = np.zeros_like(dh)
        for gate in GATES:
            grads[f"W_{gate}"] += step["xt"].T @ dz[gate]
            grads[f"U_{gate}"] += step["h_prev"].T @ dz[gate]
            grads[f"b_{gate}"] += dz[gate].sum(axis=0)
            dh_prev += dz[gate] @ params[f"U_{gate}"].T
        dh = dh_prev + dh_carry
        dc = dc_prev + dc_carry

    return loss, grads


class Adam:
    """Adaptive-moment optimizer over a parameter dict."""

    def __init__(self, params, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params, grads):
        self.t += 1
        for key in params:
            g = grads[key]
            self.m[key] = self.beta1 * self.m[key] + (1 - self.beta1) * g
            self.v[key] = self.beta2 * self.v[key] + (1 - self.beta2) * g * g
            m_hat = self.m[key] / (1 - self.beta1**self.t)
            v_hat = self.v[key] / (1 - self.beta2**self.t)
            params[key] -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def predict(params, sequence, valid_length: int) -> float:
    """Argmax label; exact tie goes to positive (1.0)."""
    out = forward(params, sequence, valid_length)
    return 1.0 if out[1] >= out[0] else 0.0


def _evaluate(params, sequences, lengths, labels_onehot, batch_size=256):
    losses = []
    correct = 0
    n = sequences.shape[0]
    for start in range(0, n, batch_size):
        sl = slice(start, start + batch_size)
        outputs, _ = _forward_batch(params, sequences[sl], lengths[sl])
        per_sample, _, _ = _loss_from_outputs(outputs, labels_onehot[sl])
        losses.append(per_sample)
        predicted = np.where(outputs[:, 1] >= outputs[:, 0], 1, 0)
        correct += int(np.sum(predicted == np.argmax(labels_onehot[sl], axis=1)))
    loss = float(np.concatenate(losses).mean()) if n else 0.0
    acc = 100.0 * correct / n if n else 0.0
    return loss, acc


def labels_to_onehot(labels) -> np.ndarray:
    """0.0 -> [1, 0] (negative), 1.0 -> [0, 1] (positive)."""
    labels = np.asarray(labels, dtype=float)
    if not np.all(np.isin(labels, (0.0, 1.0))):
        raise ValueError("training labels must be 0.0 or 1.0 (neutral excluded)")
    onehot = np.zeros((labels.shape[0], 2))
    onehot[labels == 0.0, 0] = 1.0
    onehot[labels == 1.0, 1] = 1.0
    return onehot


def train(sequences, lengths, labels, config: TrainConfig, params=None,
          split_out: dict | None = None):
    """Shuffle, split 80/20, run the configured epochs of Adam steps.

    sequences: (N, max_len, dim). Returns (params, [EpochLog, ...]).
    If split_out is given it receives the original-dataset indices of
    the train and validation partitions under 'train_idx'/'val_idx'.
    """
    sequences = np.asarray(sequences, dtype=float)
    lengths = np.asarray(lengths)
    onehot = labels_to_onehot(labels)
    n = sequences.shape[0]
    if len(set(np.asarray(labels, dtype=float))) < 2:
        logger.warning("training data contains a single class; accuracy is degenerate")

    rng = np.random.default_rng(config.seed)
    order = rng.permutation(n)
    sequences, lengths, onehot = sequences[order], lengths[order], onehot[order]
    n_train = int(round(n * config.split))
    if split_out is not None:
        split_out["train_idx"] = order[:n_train].tolist()
        split_out["val_idx"] = order[n_train:].tolist()
    train_x, val_x = sequences[:n_train], sequences[n_train:]
    train_len, val_len = lengths[:n_train], lengths[n_train:]
    train_y, val_y = onehot[:n_train], onehot[n_train:]

    if params is None:
        params = init_params(sequences.shape[2], config.hidden, seed=config.seed)
    optimizer = Adam(params, lr=config.lr, beta1=config.beta1,
                     beta2=config.beta2, eps=config.eps)

    logs = []
    for epoch in range(1, config.epochs + 1):
        perm = rng.permutation(n_train)
        for start in range(0, n_train, config.batch_size):
            idx = perm[start : start + config.batch_size]
            if idx.size == 0:
                continue
            _, grads = loss_and_grad(params, train_x[idx], train_len[idx], train_y[idx])
            optimizer.step(params, grads)
        train_loss, train_acc = _evaluate(params, train_x, train_len, train_y)
        val_loss, val_acc = _evaluate(params, val_x, val_len, val_y)
        log = EpochLog(epoch=epoch, train_loss=train_loss, train_acc=train_acc,
                       val_loss=val_loss, val_acc=val_acc)
        logs.append(log)
        logger.info(
            "epoch %d: train loss %.4f acc %.2f%% | val loss %.4f acc %.2f%%",
            epoch, train_loss, train_acc, val_loss, val_acc,
        )
    return params, logs


def save_checkpoint(path, params: dict, meta: dict | None = None) -> None:
    """Single file: JSON header line, then each tensor's float64 bytes in
    the declared key order. Byte-identical across runs."""
    keys = sorted(params)
    header = {
        "meta": meta or {},
        "tensors": [{"key": k, "shape": list(params[k].shape)} for k in keys],
    }
    with open(path, "wb") as handle:
        handle.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
        for k in keys:
            handle.write(np.ascontiguousarray(params[k], dtype=np.float64).tobytes())


def load_checkpoint(path) -> tuple[dict, dict]:
    with open(path, "rb") as handle:
        header = json.loads(handle.readline().decode("utf-8"))
        params = {}
        for entry in header["tensors"]:
            shape = tuple(entry["shape"])
            count = int(np.prod(shape)) if shape else 1
            data = np.frombuffer(handle.read(count * 8), dtype=np.float64)
            params[entry["key"]] = data.reshape(shape).copy()
    return params, header.get("meta", {})
