"""Game data model and the linear-algebra primitives shared by every solver.

Strategies, value vectors, reduced costs and fluxes are plain numpy arrays:
a strategy is an integer array of length ``num_states`` holding one action
index per state, values have length ``num_states``, and reduced costs and
fluxes have length ``num_actions``.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field

import numpy as np

ROW_SUM_TOL = 1e-12
DEFAULT_EPS = 1e-9


class Player(enum.IntEnum):
    ONE = 1  # maximizer
    TWO = 2  # minimizer


def default_eps() -> float:
    """Base tolerance, overridable through the ``TBSG_EPS`` environment variable."""
    raw = os.environ.get("TBSG_EPS")
    if raw is None:
        return DEFAULT_EPS
    eps = float(raw)
    if not eps > 0:
        raise ValueError(f"TBSG_EPS must be positive, got {raw!r}")
    return eps


@dataclass(frozen=True, eq=False)
class Game:
    """A discounted two-player turn-based stochastic game.

    Attributes:
        owner: length-l array of :class:`Player` tags (1 or 2).
        action_state: length-m array, the state each action belongs to.
        transition: (m, l) array, one probability row per action.
        reward: length-m array of immediate rewards.
        gamma: discount factor in (0, 1).
    """

    owner: np.ndarray
    action_state: np.ndarray
    transition: np.ndarray
    reward: np.ndarray
    gamma: float
    _actions_of: tuple = field(init=False, repr=False)

    def __post_init__(self):
        owner = np.asarray(self.owner, dtype=np.int64)
        action_state = np.asarray(self.action_state, dtype=np.int64)
        transition = np.asarray(self.transition, dtype=np.float64)
        reward = np.asarray(self.reward, dtype=np.float64)
        for name, arr in (("owner", owner), ("action_state", action_state),
                          ("reward", reward)):
            if arr.ndim != 1:
                raise ValueError(f"{name} must be one-dimensional")
        if transition.shape != (action_state.size, owner.size):
            raise ValueError(
                f"transition has shape {transition.shape}, expected "
                f"({action_state.size}, {owner.size})")
        if reward.size != action_state.size:
            raise ValueError("reward and action_state lengths differ")
        for arr in (owner, action_state, transition, reward):
            arr.setflags(write=False)
        object.__setattr__(self, "owner", owner)
        object.__setattr__(self, "action_state", action_state)
        object.__setattr__(self, "transition", transition)
        object.__setattr__(self, "reward", reward)
        object.__setattr__(self, "gamma", float(self.gamma))
        actions_of = [[] for _ in range(owner.size)]
        for a, s in enumerate(action_state):
            if 0 <= s < owner.size:
                actions_of[s].append(a)
        object.__setattr__(
            self, "_actions_of",
            tuple(np.array(acts, dtype=np.int64) for acts in actions_of))

    @property
    def num_states(self) -> int:
        return self.owner.size

    @property
    def num_actions(self) -> int:
        return self.action_state.size

    def actions(self, s: int) -> np.ndarray:
        """Action indices available at state ``s``, ascending."""
        return self._actions_of[s]

    def states_of(self, player: Player) -> np.ndarray:
        return np.flatnonzero(self.owner == int(player))

    def action_mask(self, player: Player) -> np.ndarray:
        """Boolean mask over actions owned by ``player``."""
        return self.owner[self.action_state] == int(player)

    def default_strategy(self) -> np.ndarray:
        """Lowest-index action at every state."""
        return np.array([acts[0] for acts in self._actions_of], dtype=np.int64)

    def random_strategy(self, rng: np.random.Generator) -> np.ndarray:
        return np.array([rng.choice(acts) for acts in self._actions_of],
                        dtype=np.int64)

    def tolerance(self, eps: float | None = None) -> float:
        """Sign-test tolerance: ``eps`` scaled by ``1 + max|r|``."""
        if eps is None:
            eps = default_eps()
        scale = np.abs(self.reward).max() if self.reward.size else 0.0
        return eps * (1.0 + scale)

    def strategy_count(self) -> int:
        count = 1
        for acts in self._actions_of:
            count *= len(acts)
        return count


def validate_game(g: Game) -> list[str]:
    """Return a description of every structural defect of ``g``; empty if valid."""
    problems = []
    l, m = g.num_states, g.num_actions
    if l < 1:
        problems.append("game has no states")
    if m < 1:
        problems.append("game has no actions")
    if not 0.0 < g.gamma < 1.0:
        problems.append(f"gamma={g.gamma!r} outside (0, 1)")
    for s in range(l):
        if g.owner[s] not in (1, 2):
            problems.append(f"state {s}: owner tag {g.owner[s]} is not 1 or 2")
    for a in range(m):
        s = g.action_state[a]
        if not 0 <= s < l:
            problems.append(f"action {a}: belongs to unknown state {s}")
        row = g.transition[a]
        if not np.all(np.isfinite(row)):
            problems.append(f"action {a}: transition row has non-finite entries")
            continue
        if row.min(initial=0.0) < 0.0:
            problems.append(
                f"action {a}: negative transition probability {row.min():.17g}")
        total = row.sum()
        if abs(total - 1.0) > ROW_SUM_TOL:
            problems.append(
                f"action {a}: transition row sums to {total:.17g} "
                f"(defect {total - 1.0:.3g})")
        if not np.isfinite(g.reward[a]):
            problems.append(f"action {a}: reward is not finite")
    for s in range(l):
        if len(g.actions(s)) == 0:
            problems.append(f"state {s}: has no actions")
    return problems


def check_strategy(g: Game, pi) -> np.ndarray:
    """Coerce ``pi`` to an action array and check it picks one action per state."""
    pi = np.asarray(pi, dtype=np.int64)
    if pi.shape != (g.num_states,):
        raise ValueError(
            f"strategy has shape {pi.shape}, expected ({g.num_states},)")
    if np.any(pi < 0) or np.any(pi >= g.num_actions):
        raise ValueError("strategy references an unknown action")
    wrong = np.flatnonzero(g.action_state[pi] != np.arange(g.num_states))
    if wrong.size:
        s = int(wrong[0])
        raise ValueError(f"strategy picks action {pi[s]} at state {s}, "
                         f"which belongs to state {g.action_state[pi[s]]}")
    return pi


def _system(g: Game, pi: np.ndarray) -> np.ndarray:
    return np.eye(g.num_states) - g.gamma * g.transition[pi]


def value_of(g: Game, pi) -> np.ndarray:
    """Discounted value of every state when both players follow ``pi``."""
    pi = check_strategy(g, pi)
    return np.linalg.solve(_system(g, pi), g.reward[pi])


def modified_reward(g: Game, pi, v: np.ndarray | None = None) -> np.ndarray:
    """Reduced cost of every action against the value of ``pi``.

    ``rc[a] = r[a] - v[state(a)] + gamma * P[a] @ v``; zero on ``pi``'s own
    actions up to round-off. The value is recomputed when ``v`` is omitted.
    """
    if v is None:
        v = value_of(g, pi)
    return g.reward - v[g.action_state] + g.gamma * (g.transition @ v)


def flux_of(g: Game, pi) -> np.ndarray:
    """Discounted occupancy of each action under ``pi`` from the all-ones start."""
    pi = check_strategy(g, pi)
    y = np.linalg.solve(_system(g, pi).T, np.ones(g.num_states))
    x = np.zeros(g.num_actions)
    x[pi] = y
    return x
