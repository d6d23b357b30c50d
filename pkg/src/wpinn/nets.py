"""Dense feedforward networks with exact reverse-mode parameter gradients.

Networks map R^{W0} -> R. Activations are ReLU^3 (twice continuously
differentiable) and the logistic sigmoid. The output head is either the raw
final affine value or an affine-sigmoid map pinning the output into a fixed
interval (used by the adaptive weight networks, range [0.2, 5]).

Derivatives with respect to network *inputs* are out of scope; PDE operators
are discretized by finite differences elsewhere. Everything is float64.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np

RELU3 = "relu3"
SIGMOID = "sigmoid"

LINEAR_HEAD = "linear"
BOUNDED_HEAD = "bounded"


def relu3(x):
    """max(0, x^3). C^2 everywhere; value and all derivatives use the 0 branch at x=0."""
    x = np.asarray(x, dtype=float)
    out = np.where(x > 0.0, x * x * x, 0.0)
    return float(out) if out.ndim == 0 else out


def relu3_prime(x):
    x = np.asarray(x, dtype=float)
    out = np.where(x > 0.0, 3.0 * x * x, 0.0)
    return float(out) if out.ndim == 0 else out


def sigmoid(x):
    """1 / (1 + exp(-x)), evaluated on the non-overflowing branch per sign."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    pos = x >= 0.0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return float(out) if out.ndim == 0 else out


def sigmoid_prime(x):
    s = sigmoid(x)
    return s * (1.0 - s)


_ACTIVATIONS: dict = {
    RELU3: (relu3, relu3_prime),
    SIGMOID: (sigmoid, sigmoid_prime),
}


@dataclass
class Mlp:
    """Parameters of one dense network: weights[i] is (widths[i+1], widths[i])."""

    widths: List[int]
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    activations: List[str]
    head: str = LINEAR_HEAD
    head_lo: float = 0.2
    head_hi: float = 5.0

    def __post_init__(self):
        if len(self.widths) < 2:
            raise ValueError("widths must list at least input and output sizes")
        if self.widths[-1] != 1:
            raise ValueError("output width must be 1")
        n_layers = len(self.widths) - 1
        if len(self.weights) != n_layers or len(self.biases) != n_layers:
            raise ValueError("weights/biases must hold one entry per layer")
        if len(self.activations) != n_layers - 1:
            raise ValueError("need one activation tag per hidden layer")
        for i in range(n_layers):
            if self.weights[i].shape != (self.widths[i + 1], self.widths[i]):
                raise ValueError(f"weight {i} shape {self.weights[i].shape} breaks the chain")
            if self.biases[i].shape != (self.widths[i + 1],):
                raise ValueError(f"bias {i} shape {self.biases[i].shape} breaks the chain")
            if not (np.isfinite(self.weights[i]).all() and np.isfinite(self.biases[i]).all()):
                raise ValueError(f"non-finite entries in layer {i}")
        for tag in self.activations:
            if tag not in _ACTIVATIONS:
                raise ValueError(f"unknown activation {tag!r}")
        if self.head not in (LINEAR_HEAD, BOUNDED_HEAD):
            raise ValueError(f"unknown head {self.head!r}")
        if self.head == BOUNDED_HEAD and not self.head_lo < self.head_hi:
            raise ValueError("bounded head needs lo < hi")

    @property
    def in_dim(self) -> int:
        return self.widths[0]

    def param_arrays(self) -> List[np.ndarray]:
        """Flat list [w0, b0, w1, b1, ...]; the ordering the optimizer relies on."""
        out: List[np.ndarray] = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out


@dataclass
class MlpGrads:
    """Partial derivatives of a scalar objective, shape-identical to an Mlp."""

    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def param_arrays(self) -> List[np.ndarray]:
        out: List[np.ndarray] = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out

    def add_(self, other: "MlpGrads") -> "MlpGrads":
        for a, b in zip(self.weights, other.weights):
            a += b
        for a, b in zip(self.biases, other.biases):
            a += b
        return self

    def scale_(self, alpha: float) -> "MlpGrads":
        for a in self.weights:
            a *= alpha
        for a in self.biases:
            a *= alpha
        return self


def zero_grads(net: Mlp) -> MlpGrads:
    return MlpGrads(
        weights=[np.zeros_like(w) for w in net.weights],
        biases=[np.zeros_like(b) for b in net.biases],
    )


def init_params(
    widths: Sequence[int],
    activations: Sequence[str],
    head: str = LINEAR_HEAD,
    seed: Union[int, np.random.Generator] = 0,
    head_range: Tuple[float, float] = (0.2, 5.0),
) -> Mlp:
    """Fan-balanced uniform weights on +-sqrt(6/(fan_in+fan_out)), zero biases.

    Deterministic for a fixed integer seed. The tight bound keeps pre-activations
    at O(1) scale, which matters because relu3 grows cubically.
    """
    widths = list(widths)
    if len(widths) < 2:
        raise ValueError("widths must list at least input and output sizes")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    weights, biases = [], []
    for w_in, w_out in zip(widths[:-1], widths[1:]):
        bound = np.sqrt(6.0 / (w_in + w_out))
        weights.append(rng.uniform(-bound, bound, size=(w_out, w_in)))
        biases.append(np.zeros(w_out))
    return Mlp(
        widths=widths,
        weights=weights,
        biases=biases,
        activations=list(activations),
        head=head,
        head_lo=head_range[0],
        head_hi=head_range[1],
    )


def calibrate_layers(net: Mlp, probe: np.ndarray, out_std: float = 1.0) -> Mlp:
    """Rescale layers in place so pre-activations have unit std over the probe
    batch, and raw outputs have std out_std.

    Cubic activations are not scale-free: with fan-balanced init alone the
    signal collapses (or explodes) geometrically with depth and input range,
    leaving the network flat. Calibrating against a probe drawn from the
    actual input distribution keeps values and derivatives at O(1) regardless
    of width, depth, or domain size."""
    probe = np.asarray(probe, dtype=float)
    a = probe
    last = len(net.weights) - 1
    for i in range(len(net.weights)):
        z = a @ net.weights[i].T + net.biases[i]
        target = out_std if i == last else 1.0
        s = float(np.std(z))
        if s > 0.0:
            net.weights[i] *= target / s
            net.biases[i] *= target / s
            z = z * (target / s)
        a = _ACTIVATIONS[net.activations[i]][0](z) if i < last else z
    return net


def constant_net(in_dim: int, value: float) -> Mlp:
    """Single affine layer with zero weights: outputs exactly `value` everywhere."""
    return Mlp(
        widths=[in_dim, 1],
        weights=[np.zeros((1, in_dim))],
        biases=[np.array([float(value)])],
        activations=[],
        head=LINEAR_HEAD,
    )


# Forward cache: per-layer (input activations A_{i-1}, pre-activations Z_i),
# plus the head sigmoid when the head is bounded.
Cache = Tuple[List[Tuple[np.ndarray, np.ndarray]], Union[np.ndarray, None]]


def forward_batch(net: Mlp, X: np.ndarray) -> np.ndarray:
    out, _ = _forward(net, X, keep=False)
    return out


def forward_batch_cached(net: Mlp, X: np.ndarray) -> Tuple[np.ndarray, Cache]:
    return _forward(net, X, keep=True)


def _forward(net: Mlp, X: np.ndarray, keep: bool) -> Tuple[np.ndarray, Cache]:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != net.widths[0]:
        raise ValueError(f"input shape {X.shape} does not match input width {net.widths[0]}")
    layers: List[Tuple[np.ndarray, np.ndarray]] = []
    a = X
    last = len(net.weights) - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = a @ w.T + b
        if keep:
            layers.append((a, z))
        a = _ACTIVATIONS[net.activations[i]][0](z) if i < last else z
    raw = a[:, 0]
    head_s = None
    if net.head == BOUNDED_HEAD:
        head_s = sigmoid(raw)
        out = net.head_lo + (net.head_hi - net.head_lo) * head_s
    else:
        out = raw
    return out, (layers, head_s)


def backprop_batch(net: Mlp, cache: Cache, upstream: np.ndarray) -> MlpGrads:
    """Accumulate d(sum_i upstream_i * out_i)/d(params) over the cached batch."""
    layers, head_s = cache
    g = np.asarray(upstream, dtype=float)
    if net.head == BOUNDED_HEAD:
        g = g * (net.head_hi - net.head_lo) * head_s * (1.0 - head_s)
    G = g[:, None]
    grads = zero_grads(net)
    for i in range(len(net.weights) - 1, -1, -1):
        a_prev, _ = layers[i]
        grads.weights[i] += G.T @ a_prev
        grads.biases[i] += G.sum(axis=0)
        if i > 0:
            _, z_prev = layers[i - 1]
            G = (G @ net.weights[i]) * _ACTIVATIONS[net.activations[i - 1]][1](z_prev)
    return grads


def forward(net: Mlp, x: Sequence[float]) -> float:
    """Single-point evaluation."""
    return float(forward_batch(net, np.asarray(x, dtype=float)[None, :])[0])


def backprop(net: Mlp, x: Sequence[float], upstream: float = 1.0) -> MlpGrads:
    """Exact gradient of upstream * forward(net, x) with respect to every parameter."""
    _, cache = forward_batch_cached(net, np.asarray(x, dtype=float)[None, :])
    return backprop_batch(net, cache, np.array([float(upstream)]))


BatchField = Callable[[np.ndarray], np.ndarray]


def as_batch_field(obj: Union[Mlp, BatchField]) -> BatchField:
    """Adapter: an Mlp or any (n, k) -> (n,) callable becomes a batch field."""
    if isinstance(obj, Mlp):
        return lambda P: forward_batch(obj, P)
    return obj


def as_point_field(obj: Union[Mlp, BatchField]) -> Callable[[float, np.ndarray], float]:
    """Scalar (t, x) view of a batch field over stacked (t, x) rows."""
    f = as_batch_field(obj)

    def field(t: float, x: np.ndarray) -> float:
        row = np.concatenate(([float(t)], np.asarray(x, dtype=float)))
        return float(f(row[None, :])[0])

    return field


def to_dict(net: Mlp) -> dict:
    return {
        "widths": list(net.widths),
        "activations": list(net.activations),
        "head": net.head,
        "head_lo": net.head_lo,
        "head_hi": net.head_hi,
        "weights": [w.tolist() for w in net.weights],
        "biases": [b.tolist() for b in net.biases],
    }


def from_dict(d: dict) -> Mlp:
    return Mlp(
        widths=list(d["widths"]),
        weights=[np.asarray(w, dtype=float) for w in d["weights"]],
        biases=[np.asarray(b, dtype=float) for b in d["biases"]],
        activations=list(d["activations"]),
        head=d["head"],
        head_lo=float(d["head_lo"]),
        head_hi=float(d["head_hi"]),
    )


def save(net: Mlp, path) -> None:
    with open(path, "w") as fh:
        json.dump(to_dict(net), fh)


def load(path) -> Mlp:
    with open(path) as fh:
        return from_dict(json.load(fh))
