"""Outer equilibrium solvers.

All three share one skeleton: Player 1 changes some of its actions, Player 2
then re-optimizes completely via :func:`tbsg.mdp.best_response`, and the loop
stops when Player 1 has nothing left that improves by more than the tolerance.
They differ only in how Player 1 moves:

* ``strategy``: every state with a positive reduced cost switches to its best
  action at once.
* ``simplex``: only the single Player 1 action with the largest reduced cost
  enters.
* ``modified-simplex``: every one-state deviation of Player 1 is tried against
  Player 2's full response, and the one with the largest total value wins.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from tbsg.game import Game, Player, check_strategy, modified_reward
from tbsg.io import fmt
from tbsg.mdp import best_response, is_equilibrium

ALGORITHMS = ("strategy", "simplex", "modified-simplex")
CERTIFY_FACTOR = 10.0


class TraceRecord(NamedTuple):
    iteration: int
    sum_v: float
    max_rc_p1: float
    switched_states: tuple
    switched_actions: tuple
    strategy: np.ndarray


@dataclass
class SolveReport:
    algorithm: str
    equilibrium: np.ndarray
    value: np.ndarray
    iterations: int
    trace: list[TraceRecord]
    converged: bool
    certified: bool
    best_response_steps: int = 0
    candidate_evaluations: int = 0

    @property
    def limit_exceeded(self) -> bool:
        return not self.converged

    def trace_csv(self) -> str:
        buf = io.StringIO()
        buf.write("iter,sum_v,max_rc_p1,switched_state,switched_action\n")
        for rec in self.trace:
            states = ";".join(str(s) for s in rec.switched_states)
            actions = ";".join(str(a) for a in rec.switched_actions)
            buf.write(f"{rec.iteration},{fmt(rec.sum_v)},{fmt(rec.max_rc_p1)},"
                      f"{states},{actions}\n")
        return buf.getvalue()


class _Run:
    """Book-keeping shared by the three solvers."""

    def __init__(self, g: Game, start, eps):
        self.g = g
        self.eps = eps
        self.tol = g.tolerance(eps)
        self.p1_states = g.states_of(Player.ONE)
        self.p1_mask = g.action_mask(Player.ONE)
        self.br_steps = 0
        self.trace: list[TraceRecord] = []
        start = check_strategy(g, start)
        self.pi, self.v = self.respond(start)

    def respond(self, pi):
        res = best_response(self.g, pi, Player.TWO, warm_start=pi, eps=self.eps)
        self.br_steps += res.improvement_steps
        return res.strategy, res.value

    def reduced_costs(self):
        return modified_reward(self.g, self.pi, self.v)

    def record(self, rc, switched=((), ())):
        max_rc = float(rc[self.p1_mask].max()) if self.p1_mask.any() else 0.0
        self.trace.append(TraceRecord(len(self.trace), float(self.v.sum()), max_rc,
                                      tuple(switched[0]), tuple(switched[1]),
                                      self.pi.copy()))

    def report(self, algorithm, iterations, converged, **counters):
        tol = CERTIFY_FACTOR * self.tol
        certified = bool(is_equilibrium(self.g, self.pi, tol=tol))
        return SolveReport(algorithm=algorithm, equilibrium=self.pi.copy(),
                           value=self.v.copy(), iterations=iterations,
                           trace=self.trace, converged=converged,
                           certified=certified, best_response_steps=self.br_steps,
                           **counters)


def strategy_iteration(g: Game, start=None, max_iters: int = 10_000, *,
                       eps: float | None = None) -> SolveReport:
    run = _Run(g, g.default_strategy() if start is None else start, eps)
    switched = ((), ())
    iterations = 0
    while True:
        rc = run.reduced_costs()
        run.record(rc, switched)
        states, actions = [], []
        for s in run.p1_states:
            acts = g.actions(s)
            j = int(np.argmax(rc[acts]))
            if rc[acts[j]] > run.tol:
                states.append(int(s))
                actions.append(int(acts[j]))
        if not states:
            return run.report("strategy", iterations, True)
        if iterations >= max_iters:
            return run.report("strategy", iterations, False)
        pi = run.pi.copy()
        pi[states] = actions
        run.pi, run.v = run.respond(pi)
        switched = (states, actions)
        iterations += 1


def simplex_strategy_iteration(g: Game, start=None, max_iters: int = 10_000, *,
                               eps: float | None = None) -> SolveReport:
    run = _Run(g, g.default_strategy() if start is None else start, eps)
    switched = ((), ())
    iterations = 0
    while True:
        rc = run.reduced_costs()
        run.record(rc, switched)
        if not run.p1_mask.any():
            return run.report("simplex", iterations, True)
        a = int(np.argmax(np.where(run.p1_mask, rc, -np.inf)))
        if rc[a] <= run.tol:
            return run.report("simplex", iterations, True)
        if iterations >= max_iters:
            return run.report("simplex", iterations, False)
        s = int(g.action_state[a])
        pi = run.pi.copy()
        pi[s] = a
        run.pi, run.v = run.respond(pi)
        switched = ((s,), (a,))
        iterations += 1


def modified_simplex_strategy_iteration(g: Game, start=None, max_iters: int = 10_000,
                                        *, eps: float | None = None) -> SolveReport:
    run = _Run(g, g.default_strategy() if start is None else start, eps)
    switched = ((), ())
    iterations = 0
    evaluations = 0
    while True:
        run.record(run.reduced_costs(), switched)
        current = run.v.sum()
        best = None
        for s in run.p1_states:
            for a in g.actions(s):
                cand = run.pi.copy()
                cand[s] = a
                pi, v = run.respond(cand)
                evaluations += 1
                total = v.sum()
                if best is None or total > best[0]:
                    best = (total, int(s), int(a), pi, v)
        if best is None or best[0] - current <= run.tol:
            return run.report("modified-simplex", iterations, True,
                              candidate_evaluations=evaluations)
        if iterations >= max_iters:
            return run.report("modified-simplex", iterations, False,
                              candidate_evaluations=evaluations)
        _, s, a, run.pi, run.v = best
        switched = ((s,), (a,))
        iterations += 1


_SOLVERS = {
    "strategy": strategy_iteration,
    "simplex": simplex_strategy_iteration,
    "modified-simplex": modified_simplex_strategy_iteration,
}


def solve(g: Game, algorithm: str = "simplex", start=None, max_iters: int = 10_000,
          *, eps: float | None = None) -> SolveReport:
    try:
        solver = _SOLVERS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}; "
                         f"choose from {', '.join(ALGORITHMS)}") from None
    return solver(g, start, max_iters, eps=eps)
