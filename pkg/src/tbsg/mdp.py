"""Optimal counterstrategies by Howard policy iteration, and the equilibrium test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tbsg.game import Game, Player, check_strategy, modified_reward, value_of


@dataclass(frozen=True)
class CounterstrategyResult:
    strategy: np.ndarray
    value: np.ndarray
    improvement_steps: int


def _best_switches(g: Game, states: np.ndarray, rc: np.ndarray, player: Player):
    """Best reduced-cost action per state (lowest index on ties) and its rc."""
    best = np.empty(states.size, dtype=np.int64)
    gain = np.empty(states.size)
    for i, s in enumerate(states):
        acts = g.actions(s)
        vals = rc[acts] if player == Player.ONE else -rc[acts]
        j = int(np.argmax(vals))
        best[i] = acts[j]
        gain[i] = vals[j]
    return best, gain


def best_response(g: Game, frozen, optimizing_player: Player, warm_start=None,
                  *, eps: float | None = None) -> CounterstrategyResult:
    """Optimize ``optimizing_player``'s states while the other player's stay put.

    ``frozen`` supplies the non-optimizing player's choices; ``warm_start``
    (default: ``frozen``) supplies the starting choices of the optimizing
    player. Every state whose best action beats the current one by more than
    the tolerance is switched simultaneously, until none is.
    """
    player = Player(optimizing_player)
    frozen = check_strategy(g, frozen)
    pi = frozen.copy() if warm_start is None else check_strategy(g, warm_start).copy()
    other = g.owner != int(player)
    pi[other] = frozen[other]
    states = g.states_of(player)
    tol = g.tolerance(eps)

    steps = 0
    v = value_of(g, pi)
    while states.size:
        rc = modified_reward(g, pi, v)
        best, gain = _best_switches(g, states, rc, player)
        improve = gain > tol
        if not improve.any():
            break
        pi[states[improve]] = best[improve]
        v = value_of(g, pi)
        steps += 1
    return CounterstrategyResult(strategy=pi, value=v, improvement_steps=steps)


@dataclass(frozen=True)
class EquilibriumCheck:
    ok: bool
    action: int | None = None
    reduced_cost: float | None = None

    def __bool__(self):
        return self.ok


def is_equilibrium(g: Game, pi, *, tol: float | None = None,
                   eps: float | None = None) -> EquilibriumCheck:
    """Sign test: every Player 1 reduced cost <= tol, every Player 2 one >= -tol.

    ``tol`` is absolute; when omitted it is ``g.tolerance(eps)``. On failure the
    worst offending action is reported.
    """
    pi = check_strategy(g, pi)
    if tol is None:
        tol = g.tolerance(eps)
    rc = modified_reward(g, pi)
    # Signed so that a positive entry is a violation for either player.
    excess = np.where(g.action_mask(Player.ONE), rc, -rc)
    a = int(np.argmax(excess))
    if excess[a] > tol:
        return EquilibriumCheck(False, a, float(rc[a]))
    return EquilibriumCheck(True)
