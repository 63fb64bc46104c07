"""Seeded random game instances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tbsg.game import Game


@dataclass(frozen=True)
class GenSpec:
    num_states: int
    actions_per_state: tuple[int, int] = (2, 3)
    gamma: float = 0.9
    seed: int = 0
    deterministic: bool = False
    player2_empty: bool = False
    reward_range: tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self):
        lo, hi = self.actions_per_state
        if self.num_states < 1:
            raise ValueError("num_states must be positive")
        if not 1 <= lo <= hi:
            raise ValueError(f"bad actions_per_state range {self.actions_per_state}")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma {self.gamma} outside (0, 1)")
        if self.reward_range[0] > self.reward_range[1]:
            raise ValueError(f"bad reward_range {self.reward_range}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


def generate(spec: GenSpec) -> Game:
    """Draw a game from ``spec``; the same spec always yields the same game.

    Transition rows are normalized exponential draws (a flat Dirichlet), or
    one-hot rows when ``spec.deterministic`` is set.
    """
    rng = np.random.default_rng(spec.seed)
    l = spec.num_states
    lo, hi = spec.actions_per_state
    counts = rng.integers(lo, hi + 1, size=l)
    if spec.player2_empty:
        owner = np.ones(l, dtype=np.int64)
    else:
        owner = rng.integers(1, 3, size=l)
    action_state = np.repeat(np.arange(l), counts)
    m = action_state.size
    if spec.deterministic:
        transition = np.zeros((m, l))
        transition[np.arange(m), rng.integers(0, l, size=m)] = 1.0
    else:
        draws = rng.exponential(size=(m, l))
        transition = draws / draws.sum(axis=1, keepdims=True)
    reward = rng.uniform(*spec.reward_range, size=m)
    return Game(owner=owner, action_state=action_state, transition=transition,
                reward=reward, gamma=spec.gamma)
