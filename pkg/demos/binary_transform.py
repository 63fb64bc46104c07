"""
Reducing a game to two actions per state
========================================

Every state's action list is replaced by a binary tree of new states. The
discount is spread over the tree depth, so equilibrium values shrink by a
known constant and strategies map back to the original game.
"""

import numpy as np

from tbsg import GenSpec, final_action, generate, pull_back_strategy, solve, to_binary
from tbsg.transform import format_map

g = generate(GenSpec(num_states=3, actions_per_state=(1, 5), gamma=0.8, seed=4))
print("original: states", g.num_states, "actions", g.num_actions)

tg = to_binary(g)
print("binary:   states", tg.game.num_states, "actions", tg.game.num_actions)
print(f"depth p={tg.p}  discount delta={tg.delta:.6f}  scale c={tg.scale_c:.6f}")

# Tree layout of state 0: which node sits at which depth, and the leaf actions.
tree = tg.trees[0]
print("state 0 depths:", tree.depth)
print("state 0 leaves:", [acts for acts in tree.leaf_actions if acts])

# Solve the binary game; no padding action should ever be chosen.
rep = solve(tg.game, "simplex")
print("dummy actions used:", int(tg.is_dummy[rep.equilibrium].sum()))

# Follow each root's path down its tree to the original action it selects.
for s in range(g.num_states):
    fa = final_action(tg, rep.equilibrium, s)
    print(f"state {s}: nodes {fa.path_nodes} -> action {fa.action}")

# Values at the original states equal c times the original equilibrium value.
small = solve(g, "simplex")
print("V[:l] / v =", np.round(rep.value[:g.num_states] / small.value, 6))
print("pulled-back strategy:", pull_back_strategy(tg, rep.equilibrium))

print()
print(format_map(tg).splitlines()[:8])
