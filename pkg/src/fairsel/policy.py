"""Stochastic policy: one-hidden-layer perceptron with rectified-linear
units and a softmax over 2d add/remove actions, with exact manual
gradients and an adaptive-moment optimizer."""

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from fairsel.errors import NumericalError

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass(frozen=True)
class PolicyParams:
    w1: np.ndarray  # (h, d)
    b1: np.ndarray  # (h,)
    w2: np.ndarray  # (2d, h)
    b2: np.ndarray  # (2d,)

    @property
    def n_features(self):
        return self.w1.shape[1]

    @property
    def hidden_size(self):
        return self.w1.shape[0]


@dataclass
class StepCache:
    """Everything one forward pass needs to replay for its gradient."""

    state_vec: np.ndarray
    hidden_pre: np.ndarray
    probs: np.ndarray
    action: int = -1
    log_prob: float = 0.0


def init_params(d, h, seed):
    """Uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases."""
    if d < 1 or h < 1:
        raise ValueError("d and h must be >= 1")
    rng = np.random.default_rng(seed)
    s1 = np.sqrt(6.0 / (d + h))
    s2 = np.sqrt(6.0 / (h + 2 * d))
    w1 = rng.uniform(-s1, s1, size=(h, d))
    w2 = rng.uniform(-s2, s2, size=(2 * d, h))
    return PolicyParams(w1, np.zeros(h), w2, np.zeros(2 * d))


def forward(params, state):
    """Action distribution for a state; returns (probs, cache)."""
    x = state.as_vector() if hasattr(state, "as_vector") else np.asarray(
        state, dtype=np.float64
    )
    for arr in (params.w1, params.b1, params.w2, params.b2):
        if not np.all(np.isfinite(arr)):
            raise NumericalError("non-finite policy parameter detected")
    z1 = params.w1 @ x + params.b1
    h1 = np.maximum(z1, 0.0)
    logits = params.w2 @ h1 + params.b2
    shifted = logits - logits.max()
    e = np.exp(shifted)
    probs = e / e.sum()
    return probs, StepCache(x, z1, probs)


def sample_action(probs, rng):
    """Categorical sample via inverse CDF on one uniform draw."""
    u = rng.random()
    cdf = np.cumsum(probs)
    action = int(np.searchsorted(cdf, u, side="right"))
    action = min(action, len(probs) - 1)
    return action, float(np.log(probs[action]))


def policy_gradient(params, episode, returns):
    """Exact gradient of L = -sum_t G_t * log pi(a_t | s_t).

    Per step the logit gradient is G_t * (probs - onehot(a_t)),
    backpropagated through the rectifier.
    """
    if len(episode) != len(returns):
        raise ValueError("episode and returns must have equal length")
    T = len(episode)
    xs = np.stack([c.state_vec for c in episode])  # (T, d)
    z1 = np.stack([c.hidden_pre for c in episode])  # (T, h)
    probs = np.stack([c.probs for c in episode])  # (T, 2d)
    g = np.asarray(returns, dtype=np.float64)

    dlogits = probs * g[:, None]
    for t, cache in enumerate(episode):
        dlogits[t, cache.action] -= g[t]

    h1 = np.maximum(z1, 0.0)
    gw2 = dlogits.T @ h1
    gb2 = dlogits.sum(axis=0)
    dh = dlogits @ params.w2  # (T, h)
    dz1 = dh * (z1 > 0.0)
    gw1 = dz1.T @ xs
    gb1 = dz1.sum(axis=0)
    return PolicyParams(gw1, gb1, gw2, gb2)


@dataclass
class AdamState:
    m: PolicyParams
    v: PolicyParams

    @classmethod
    def zeros_like(cls, params):
        def z():
            return PolicyParams(
                np.zeros_like(params.w1), np.zeros_like(params.b1),
                np.zeros_like(params.w2), np.zeros_like(params.b2),
            )

        return cls(z(), z())


_FIELDS = ("w1", "b1", "w2", "b2")


def adam_step(params, grads, lr, t, state):
    """Adaptive-moment descent step with bias correction; t is 1-based."""
    if t < 1:
        raise ValueError("step count t must be >= 1")
    new_p, new_m, new_v = {}, {}, {}
    for name in _FIELDS:
        g = getattr(grads, name)
        if not np.all(np.isfinite(g)):
            raise NumericalError(f"non-finite gradient in {name}")
        m = ADAM_BETA1 * getattr(state.m, name) + (1 - ADAM_BETA1) * g
        v = ADAM_BETA2 * getattr(state.v, name) + (1 - ADAM_BETA2) * g * g
        m_hat = m / (1 - ADAM_BETA1 ** t)
        v_hat = v / (1 - ADAM_BETA2 ** t)
        new_p[name] = getattr(params, name) - lr * m_hat / (
            np.sqrt(v_hat) + ADAM_EPS
        )
        new_m[name] = m
        new_v[name] = v
    return (
        PolicyParams(**new_p),
        AdamState(PolicyParams(**new_m), PolicyParams(**new_v)),
    )


def sgd_step(params, grads, lr):
    """Plain-gradient fallback for ablation."""
    new_p = {}
    for name in _FIELDS:
        g = getattr(grads, name)
        if not np.all(np.isfinite(g)):
            raise NumericalError(f"non-finite gradient in {name}")
        new_p[name] = getattr(params, name) - lr * g
    return PolicyParams(**new_p)


def save_checkpoint(path, params, step_count):
    """Binary checkpoint: little-endian (d, h, t) header then the flat
    float64 parameter block in w1, b1, w2, b2 order."""
    d = params.n_features
    h = params.hidden_size
    flat = np.concatenate([
        params.w1.ravel(), params.b1.ravel(),
        params.w2.ravel(), params.b2.ravel(),
    ]).astype("<f8")
    with Path(path).open("wb") as fh:
        fh.write(struct.pack("<qqq", d, h, int(step_count)))
        fh.write(flat.tobytes())


def load_checkpoint(path):
    """Inverse of save_checkpoint; returns (params, step_count)."""
    raw = Path(path).read_bytes()
    d, h, t = struct.unpack_from("<qqq", raw)
    flat = np.frombuffer(raw, dtype="<f8", offset=24)
    sizes = (h * d, h, 2 * d * h, 2 * d)
    if flat.size != sum(sizes):
        raise ValueError("checkpoint size does not match its header")
    parts = []
    off = 0
    for size in sizes:
        parts.append(np.array(flat[off:off + size], dtype=np.float64))
        off += size
    w1 = parts[0].reshape(h, d)
    b1 = parts[1]
    w2 = parts[2].reshape(2 * d, h)
    b2 = parts[3]
    return PolicyParams(w1, b1, w2, b2), t
