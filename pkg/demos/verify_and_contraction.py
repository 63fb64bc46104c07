"""
Checking the invariants on a random game
========================================

The verification harness runs the flux identities, the equilibrium sign
test, oracle agreement, the contraction monitor and the tree reduction.
Here we run it, then look at the contraction ratios by hand.
"""

import numpy as np

from tbsg import GenSpec, contraction_monitor, flux_of, generate, solve, value_of
from tbsg.oracle import brute_force_equilibrium
from tbsg.verify import flux_defects, run_checks

g = generate(GenSpec(num_states=6, actions_per_state=(2, 4), gamma=0.9, seed=7))

for res in run_checks(g, seed=0):
    print(f"{res.name:11s} {'PASS' if res.passed else 'FAIL'}  {res.detail}")

# Flux: expected discounted visits of each action under a strategy.
rng = np.random.default_rng(1)
pi, pi2 = g.random_strategy(rng), g.random_strategy(rng)
x = flux_of(g, pi)
print()
print("total flux", x.sum(), "= l/(1-gamma) =", g.num_states / (1 - g.gamma))
print("sum v", value_of(g, pi).sum(), "= flux . r =", x @ g.reward)
print("defects:", flux_defects(g, pi, pi2))

# Distance to the equilibrium value shrinks by a fixed factor every step.
truth = brute_force_equilibrium(g)
rep = solve(g, "simplex", start=pi)
mon = contraction_monitor(g, rep, truth.value)
print()
print("per-step bound:", round(mon.bound, 4))
print("observed ratios:", [round(r, 4) for r in mon.ratios])
print("M =", mon.m_step, "violations:", mon.violations)
