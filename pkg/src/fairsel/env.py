"""Feature-selection MDP: binary selection states, add/remove actions,
deterministic transitions. States are immutable values."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EnvState:
    """Binary selection vector over the feature universe."""

    selected: tuple

    def __post_init__(self):
        if any(v not in (0, 1) for v in self.selected):
            raise ValueError("selection entries must be 0 or 1")

    @property
    def n_features(self):
        return len(self.selected)

    def as_vector(self):
        return np.asarray(self.selected, dtype=np.float64)


def reset(d):
    """Fresh episode state: the empty subset."""
    if d < 1:
        raise ValueError("need at least one feature")
    return EnvState((0,) * d)


def random_state(d, rng):
    """Uniform random selection vector (optional episode start)."""
    if d < 1:
        raise ValueError("need at least one feature")
    return EnvState(tuple(int(b) for b in rng.integers(0, 2, size=d)))


def step(state, action):
    """Apply an add (index < d) or remove (index >= d) action.

    Redundant adds/removes are no-ops. Returns a new state; the input
    is never modified.
    """
    d = state.n_features
    if not 0 <= action < 2 * d:
        raise ValueError(f"action {action} out of range [0, {2 * d})")
    if action < d:
        idx, bit = action, 1
    else:
        idx, bit = action - d, 0
    if state.selected[idx] == bit:
        return state
    selected = list(state.selected)
    selected[idx] = bit
    return EnvState(tuple(selected))


def subset_of(state):
    """Indices of the selected features, ascending."""
    return tuple(i for i, v in enumerate(state.selected) if v)
