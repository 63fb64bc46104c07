"""Ground truth by exhaustive enumeration, plus a value-iteration reference.

Nothing here calls :mod:`tbsg.mdp`'s policy iteration: Player 2's optimal
counterstrategy is found by trying all of them, so the oracle can catch bugs
in the solver it is checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from tbsg.game import Game, Player
from tbsg.mdp import is_equilibrium

MAX_STRATEGIES = 10**6
COMPARE_TOL = 1e-9
_CHUNK = 1 << 15


class InstanceTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    strategy: np.ndarray
    value: np.ndarray
    strategies_evaluated: int


def _values(g: Game, strategies: np.ndarray) -> np.ndarray:
    """Values of a batch of full strategies, shape (k, l)."""
    out = np.empty(strategies.shape, dtype=np.float64)
    eye = np.eye(g.num_states)
    for lo in range(0, len(strategies), _CHUNK):
        batch = strategies[lo:lo + _CHUNK]
        systems = eye - g.gamma * g.transition[batch]
        out[lo:lo + _CHUNK] = np.linalg.solve(systems, g.reward[batch][..., None])[..., 0]
    return out


def _choices(g: Game, states: np.ndarray) -> np.ndarray:
    """Every joint choice over ``states``, shape (k, len(states))."""
    combos = list(itertools.product(*(g.actions(s) for s in states)))
    return np.array(combos, dtype=np.int64).reshape(len(combos), len(states))


def _guard(g: Game):
    count = g.strategy_count()
    if count > MAX_STRATEGIES:
        raise InstanceTooLargeError(
            f"{count} joint strategies exceed the enumeration limit {MAX_STRATEGIES}")
    return count


def brute_force_equilibrium(g: Game) -> OracleResult:
    """Max over Player 1 strategies of the value under Player 2's exact best reply.

    Raises:
        InstanceTooLargeError: when the game has more than ``MAX_STRATEGIES``
            joint strategies.
        RuntimeError: if the enumerated optimum fails a consistency check,
            which would indicate ill-conditioning rather than a bug in the
            caller.
    """
    count = _guard(g)
    s1, s2 = g.states_of(Player.ONE), g.states_of(Player.TWO)
    c1, c2 = _choices(g, s1), _choices(g, s2)

    best = None
    replies = []
    for row in c1:
        full = np.empty((len(c2), g.num_states), dtype=np.int64)
        full[:, s1] = row
        full[:, s2] = c2
        vals = _values(g, full)
        j = int(np.argmin(vals.sum(axis=1)))
        # The minimizer of the total must dominate every reply state by state.
        if np.any(vals[j] > vals.min(axis=0) + COMPARE_TOL * (1 + np.abs(vals).max())):
            raise RuntimeError("no componentwise-minimal counterstrategy found")
        replies.append(vals[j])
        if best is None or vals[j].sum() > best[1].sum():
            best = (full[j].copy(), vals[j].copy())

    strategy, value = best
    scale = COMPARE_TOL * (1 + np.abs(value).max())
    if np.any(np.asarray(replies) > value + scale):
        raise RuntimeError("optimal Player 1 value is not componentwise maximal")
    if not is_equilibrium(g, strategy, eps=COMPARE_TOL):
        raise RuntimeError("enumerated optimum fails the reduced-cost certificate")
    return OracleResult(strategy=strategy, value=value, strategies_evaluated=count)


def all_equilibria(g: Game, *, eps: float = COMPARE_TOL) -> list[np.ndarray]:
    """Every joint strategy that passes the equilibrium sign test."""
    _guard(g)
    return [full for full in _choices(g, np.arange(g.num_states))
            if is_equilibrium(g, full, eps=eps)]


def value_iteration(g: Game, residual: float = 1e-12, max_sweeps: int = 1_000_000):
    """Fixed point of the max/min Bellman operator, to the given sup-norm residual.

    Returns ``(v, sweeps)``.
    """
    p1 = g.action_mask(Player.ONE)
    v = np.zeros(g.num_states)
    for sweep in range(1, max_sweeps + 1):
        q = g.reward + g.gamma * (g.transition @ v)
        signed = np.where(p1, q, -q)
        best = np.full(g.num_states, -np.inf)
        np.maximum.at(best, g.action_state, signed)
        new = np.where(g.owner == int(Player.ONE), best, -best)
        if np.max(np.abs(new - v)) <= residual:
            return new, sweep
        v = new
    raise RuntimeError(f"value iteration did not reach residual {residual}")
