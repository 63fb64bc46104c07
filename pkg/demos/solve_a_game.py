"""
Solving a small turn-based stochastic game
==========================================

Player 1 collects rewards and Player 2 tries to keep them low. We build a
random game, solve it with the three strategy-improvement methods and check
the answer against exhaustive search.
"""

import numpy as np

from tbsg import GenSpec, generate, is_equilibrium, solve
from tbsg.oracle import brute_force_equilibrium

# A 5-state game, 2 or 3 actions per state, discount 0.9.
g = generate(GenSpec(num_states=5, actions_per_state=(2, 3), gamma=0.9, seed=11))
print("owners:", g.owner)
print("actions per state:", [len(g.actions(s)) for s in range(g.num_states)])

# Start all three from the same random strategy so the traces are comparable.
start = g.random_strategy(np.random.default_rng(0))
reports = {alg: solve(g, alg, start=start)
           for alg in ("strategy", "simplex", "modified-simplex")}

for alg, rep in reports.items():
    print(f"{alg:17s} iterations={rep.iterations:2d} certified={rep.certified} "
          f"strategy={rep.equilibrium}")

# The simplex variant switches one action per step, so sum(v) creeps upward.
print()
print(reports["simplex"].trace_csv())

# Exhaustive search over every strategy pair gives the reference value.
truth = brute_force_equilibrium(g)
print("oracle value:", np.round(truth.value, 6))
for alg, rep in reports.items():
    print(f"{alg:17s} max deviation {np.abs(rep.value - truth.value).max():.1e}")

# Neither player can improve by a single switch.
check = is_equilibrium(g, reports["simplex"].equilibrium)
print("equilibrium:", bool(check))
