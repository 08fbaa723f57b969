"""Fully-connected feed-forward network over a flat parameter vector.

The canonical architectures have 2 inputs, 1/3/5 hidden layers of width
10 with a bias unit each, tanh or ReLU hidden activations, and a single
linear output (41 / 261 / 481 parameters). The flat layout is layer by
layer; within a layer neuron by neuron; within a neuron the incoming
weights followed by the bias. All arithmetic is float64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .seeds import STREAM_INIT, make_rng

ACTIVATIONS = ("tanh", "relu")


class DimensionError(ValueError):
    """Parameter or batch shapes do not match the architecture."""


@dataclass(frozen=True)
class Architecture:
    hidden_layers: int
    activation: str
    input_dim: int = 2
    hidden_width: int = 10
    output_dim: int = 1

    def __post_init__(self):
        if self.hidden_layers < 1:
            raise ValueError("need at least one hidden layer")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")

    def layer_dims(self) -> list[tuple[int, int]]:
        """(fan_in, fan_out) per affine layer, output layer last."""
        dims = [(self.input_dim, self.hidden_width)]
        dims += [(self.hidden_width, self.hidden_width)] * (self.hidden_layers - 1)
        dims.append((self.hidden_width, self.output_dim))
        return dims


def param_count(arch: Architecture) -> int:
    return sum((fan_in + 1) * fan_out for fan_in, fan_out in arch.layer_dims())


def _check_params(arch: Architecture, params: np.ndarray) -> np.ndarray:
    params = np.asarray(params, dtype=float)
    expected = param_count(arch)
    if params.shape != (expected,):
        raise DimensionError(
            f"expected parameter vector of length {expected}, got shape {params.shape}"
        )
    return params


def _unpack(arch: Architecture, params: np.ndarray):
    """Views (W, b) per layer; W is (fan_out, fan_in), b is (fan_out,)."""
    layers = []
    offset = 0
    for fan_in, fan_out in arch.layer_dims():
        block = params[offset : offset + fan_out * (fan_in + 1)].reshape(
            fan_out, fan_in + 1
        )
        layers.append((block[:, :fan_in], block[:, fan_in]))
        offset += fan_out * (fan_in + 1)
    return layers


def batch_forward(arch: Architecture, params: np.ndarray, inputs: np.ndarray) -> np.ndarray:
    """Predictions for a (M, input_dim) batch."""
    params = _check_params(arch, params)
    a = np.asarray(inputs, dtype=float)
    if a.ndim != 2 or a.shape[1] != arch.input_dim:
        raise DimensionError(f"expected (M, {arch.input_dim}) inputs, got {a.shape}")
    layers = _unpack(arch, params)
    with np.errstate(over="ignore", invalid="ignore"):
        for w, b in layers[:-1]:
            z = a @ w.T + b
            a = np.tanh(z) if arch.activation == "tanh" else np.maximum(z, 0.0)
        w, b = layers[-1]
        out = a @ w.T + b
    return out[:, 0]


def forward(arch: Architecture, params: np.ndarray, x) -> float:
    """Prediction for a single 2-vector input."""
    return float(batch_forward(arch, params, np.asarray(x, dtype=float)[None, :])[0])


def batch_mse(arch: Architecture, params, inputs, targets) -> float:
    targets = np.asarray(targets, dtype=float)
    if targets.ndim != 1 or targets.shape[0] == 0:
        raise DimensionError("targets must be a non-empty vector")
    preds = batch_forward(arch, params, inputs)
    if preds.shape != targets.shape:
        raise DimensionError(
            f"batch size mismatch: {preds.shape[0]} inputs vs {targets.shape[0]} targets"
        )
    with np.errstate(over="ignore", invalid="ignore"):
        diff = preds - targets
        return float(np.mean(diff * diff))


def mse_with_gradient(arch: Architecture, params, inputs, targets):
    """Batch MSE and its exact gradient, by reverse accumulation.

    ReLU's subgradient at 0 is taken as 0.
    """
    params = _check_params(arch, params)
    x = np.asarray(inputs, dtype=float)
    t = np.asarray(targets, dtype=float)
    if t.ndim != 1 or t.shape[0] == 0:
        raise DimensionError("targets must be a non-empty vector")
    if x.ndim != 2 or x.shape != (t.shape[0], arch.input_dim):
        raise DimensionError(f"expected ({t.shape[0]}, {arch.input_dim}) inputs, got {x.shape}")

    layers = _unpack(arch, params)
    m = t.shape[0]

    with np.errstate(over="ignore", invalid="ignore"):
        activations = [x]
        pre = []
        a = x
        for w, b in layers[:-1]:
            z = a @ w.T + b
            a = np.tanh(z) if arch.activation == "tanh" else np.maximum(z, 0.0)
            pre.append(z)
            activations.append(a)
        w_out, b_out = layers[-1]
        preds = (a @ w_out.T + b_out)[:, 0]

        diff = preds - t
        loss = float(np.mean(diff * diff))

        grads = [None] * len(layers)
        delta = (2.0 / m) * diff[:, None]          # (M, 1)
        grads[-1] = (delta.T @ activations[-1], delta.sum(axis=0))
        upstream = delta @ w_out                   # (M, width)
        for li in range(len(layers) - 2, -1, -1):
            if arch.activation == "tanh":
                dz = upstream * (1.0 - activations[li + 1] ** 2)
            else:
                dz = upstream * (pre[li] > 0.0)
            w, _ = layers[li]
            grads[li] = (dz.T @ activations[li], dz.sum(axis=0))
            if li > 0:
                upstream = dz @ w

    flat = np.concatenate(
        [np.concatenate([gw, gb[:, None]], axis=1).ravel() for gw, gb in grads]
    )
    return loss, flat


def mse_gradient(arch: Architecture, params, inputs, targets) -> np.ndarray:
    return mse_with_gradient(arch, params, inputs, targets)[1]


def init_weights(arch: Architecture, seed: int, scheme: str = "normal_unit") -> np.ndarray:
    """Seeded initial parameter vector.

    ``normal_unit`` draws every entry i.i.d. N(0, 1); ``fan_in_uniform``
    draws each layer (biases included) uniformly in +-1/sqrt(fan_in).
    """
    rng = make_rng(seed, STREAM_INIT)
    if scheme == "normal_unit":
        return rng.standard_normal(param_count(arch))
    if scheme == "fan_in_uniform":
        chunks = []
        for fan_in, fan_out in arch.layer_dims():
            bound = 1.0 / np.sqrt(fan_in)
            chunks.append(rng.uniform(-bound, bound, size=fan_out * (fan_in + 1)))
        return np.concatenate(chunks)
    raise ValueError(f"unknown init scheme {scheme!r}")
