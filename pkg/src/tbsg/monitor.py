"""Trace diagnostics: monotonicity, per-step and M-step contraction of the gap
``sum(v* - v^n)``, and the structural properties every geometrically
converging solver must satisfy."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from tbsg.algorithms import SolveReport
from tbsg.game import Game, Player, modified_reward, value_of
from tbsg.mdp import is_equilibrium

GAP_TOL = 1e-8
MONOTONE_TOL = 1e-9


def simplex_rate(g: Game) -> float:
    """Per-iteration contraction factor of the gap for single-pivot solvers."""
    return 1.0 - (1.0 - g.gamma) / g.num_states


def geometric_parameter(g: Game, algorithm: str) -> int:
    """Iterations ``M`` after which the gap shrinks by ``(1-gamma)^2 / l^2``.

    Strategy iteration contracts by ``gamma`` per step, the two simplex
    variants by :func:`simplex_rate`; ``M`` is the smallest integer with
    ``rate**M <= (1-gamma)^2 / l^2``.
    """
    rate = g.gamma if algorithm == "strategy" else simplex_rate(g)
    target = (1.0 - g.gamma) ** 2 / g.num_states ** 2
    return max(1, math.ceil(math.log(target) / math.log(rate)))


@dataclass
class ContractionCheck:
    ratios: list[float]
    bound: float
    m_step: int
    m_step_factor: float
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def contraction_monitor(g: Game, report: SolveReport, v_star,
                        *, eps: float | None = None) -> ContractionCheck:
    """Check a solver trace against an externally supplied equilibrium value."""
    v_star = np.asarray(v_star, dtype=np.float64)
    tol = g.tolerance(eps)
    sums = np.array([rec.sum_v for rec in report.trace])
    gaps = v_star.sum() - sums
    bound = simplex_rate(g)
    m_step = geometric_parameter(g, report.algorithm)
    m_factor = (1.0 - g.gamma) ** 2 / g.num_states ** 2
    check = ContractionCheck(ratios=[], bound=bound, m_step=m_step,
                             m_step_factor=m_factor)
    bad = check.violations

    for n, gap in enumerate(gaps):
        if gap < -GAP_TOL:
            bad.append(f"iter {n}: value exceeds the equilibrium value by {-gap:.3g}")

    for n in range(len(gaps) - 1):
        check.ratios.append(float(gaps[n + 1] / gaps[n]) if gaps[n] > 0 else math.nan)
        if sums[n + 1] < sums[n] - MONOTONE_TOL:
            bad.append(f"iter {n + 1}: sum of values decreased by "
                       f"{sums[n] - sums[n + 1]:.3g}")
        if report.algorithm != "strategy" and gaps[n + 1] > bound * gaps[n] + GAP_TOL:
            bad.append(f"iter {n + 1}: gap {gaps[n + 1]:.6g} exceeds "
                       f"{bound:.6g} * {gaps[n]:.6g}")

    for n in range(len(gaps) - m_step):
        if gaps[n + m_step] > m_factor * gaps[n] + GAP_TOL:
            bad.append(f"iter {n + m_step}: {m_step}-step gap {gaps[n + m_step]:.6g} "
                       f"exceeds {m_factor:.3g} * {gaps[n]:.6g}")

    p2_mask = g.action_mask(Player.TWO)
    p1_states = g.states_of(Player.ONE)
    for n, rec in enumerate(report.trace):
        v = value_of(g, rec.strategy)
        rc = modified_reward(g, rec.strategy, v)
        if p2_mask.any() and rc[p2_mask].min() < -tol:
            bad.append(f"iter {n}: Player 2 is not best-responding "
                       f"(reduced cost {rc[p2_mask].min():.3g})")
        if n + 1 < len(report.trace):
            nxt = report.trace[n + 1].strategy
            adopted = rc[nxt[p1_states]]
            if adopted.size and adopted.min() < -tol:
                bad.append(f"iter {n + 1}: adopted a Player 1 action with reduced "
                           f"cost {adopted.min():.3g}")
            if abs(sums[n + 1] - sums[n]) <= MONOTONE_TOL and not is_equilibrium(
                    g, rec.strategy, tol=10 * tol):
                bad.append(f"iter {n + 1}: no improvement from a non-equilibrium")
    return check
