"""Reduction of an arbitrary game to one where every state has exactly two actions.

Each original state ``s`` becomes the root of a tree whose leaves, all at
depth ``p = ceil(log2 m)``, are the actions of ``s``. The top layers are a
single chain and the bottom ``ceil(log2 |A_s|)`` layers a left-complete
binary tree, so the tree of a 7-action state in a game with ``p = 4`` looks
like::

    s
    └─ 1
       ├─ 2 ── 4 (a1, a2), 5 (a3, a4)
       └─ 3 ── 6 (a5, a6), 7 (a7)

Nodes are numbered breadth first, root first. Moves inside a tree are
deterministic with reward 0; the edge into a leaf is the original action,
with its original reward and transition row. Taking ``p`` steps per original
step, the discount becomes ``gamma ** (1/p)`` and values at the roots are the
original values scaled by ``gamma ** ((p-1)/p)``. States left with a single
action get a dummy copy of it that is strictly worse for their owner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from tbsg.game import Game, Player, check_strategy


class UnsupportedInstanceError(ValueError):
    pass


DUMMY_OFFSET = 1.0


@dataclass(frozen=True)
class Tree:
    """Layout of one original state's tree.

    ``node_state[j]`` is the new-game state of node ``j`` (node 0 is the root,
    i.e. the original state itself). Nodes in the last internal layer own the
    original actions in ``leaf_actions[j]``; all others have ``children``.
    """

    root: int
    depth: tuple[int, ...]
    parent: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    leaf_actions: tuple[tuple[int, ...], ...]
    node_state: tuple[int, ...]

    @property
    def num_leaves(self) -> int:
        return sum(len(acts) for acts in self.leaf_actions)


@dataclass(frozen=True, eq=False)
class TransformedGame:
    game: Game
    original: Game
    p: int
    delta: float
    scale_c: float
    trees: tuple[Tree, ...]
    original_state_of: dict  # new state -> original state, only for roots
    tree_of: np.ndarray  # new state -> original state whose tree contains it
    node_of: np.ndarray  # new state -> node id within that tree
    action_origin: np.ndarray  # new action -> original action, -1 for moves
    is_dummy: np.ndarray


def _layer_sizes(k: int, p: int) -> list[int]:
    # Layer t holds ceil(k / 2**(p - t)) nodes; t = p is the leaves.
    return [-(-k // 2 ** (p - t)) for t in range(p + 1)]


def to_binary(g: Game) -> TransformedGame:
    """Build the two-action game equivalent to ``g``.

    Raises:
        UnsupportedInstanceError: if ``g`` has fewer than two actions.
    """
    m, l = g.num_actions, g.num_states
    if m < 2:
        raise UnsupportedInstanceError(
            f"binary transformation needs at least 2 actions, game has {m}")
    p = math.ceil(math.log2(m))

    # Lay out every tree and number the new states.
    trees = []
    next_state = l
    for s in range(l):
        acts = g.actions(s)
        sizes = _layer_sizes(len(acts), p)
        depth, parent, node_state = [], [], []
        offsets = np.concatenate([[0], np.cumsum(sizes[:p])])
        for t in range(p):
            for j in range(sizes[t]):
                depth.append(t)
                parent.append(-1 if t == 0 else int(offsets[t - 1] + j // 2))
                if t == 0:
                    node_state.append(s)
                else:
                    node_state.append(next_state)
                    next_state += 1
        children = [[] for _ in depth]
        leaf_actions = [[] for _ in depth]
        for node, par in enumerate(parent):
            if par >= 0:
                children[par].append(node)
        for j, a in enumerate(acts):
            leaf_actions[int(offsets[p - 1] + j // 2)].append(int(a))
        trees.append(Tree(root=s, depth=tuple(depth), parent=tuple(parent),
                          children=tuple(map(tuple, children)),
                          leaf_actions=tuple(map(tuple, leaf_actions)),
                          node_state=tuple(node_state)))

    n_new = next_state
    owner = np.empty(n_new, dtype=np.int64)
    tree_of = np.empty(n_new, dtype=np.int64)
    node_of = np.empty(n_new, dtype=np.int64)
    for tree in trees:
        for node, st in enumerate(tree.node_state):
            owner[st] = g.owner[tree.root]
            tree_of[st] = tree.root
            node_of[st] = node

    action_state, rows, rewards, origin, dummy = [], [], [], [], []
    for st in range(n_new):
        tree = trees[tree_of[st]]
        node = node_of[st]
        first = len(action_state)
        for child in tree.children[node]:
            row = np.zeros(n_new)
            row[tree.node_state[child]] = 1.0
            action_state.append(st)
            rows.append(row)
            rewards.append(0.0)
            origin.append(-1)
            dummy.append(False)
        for a in tree.leaf_actions[node]:
            row = np.zeros(n_new)
            row[:l] = g.transition[a]
            action_state.append(st)
            rows.append(row)
            rewards.append(g.reward[a])
            origin.append(a)
            dummy.append(False)
        if len(action_state) - first == 1:
            worse = -DUMMY_OFFSET if owner[st] == Player.ONE else DUMMY_OFFSET
            action_state.append(st)
            rows.append(rows[-1].copy())
            rewards.append(rewards[-1] + worse)
            origin.append(origin[-1])
            dummy.append(True)

    delta = g.gamma ** (1.0 / p)
    new_game = Game(owner=owner, action_state=np.array(action_state),
                    transition=np.array(rows), reward=np.array(rewards), gamma=delta)
    return TransformedGame(
        game=new_game, original=g, p=p, delta=delta,
        scale_c=g.gamma ** ((p - 1) / p), trees=tuple(trees),
        original_state_of={s: s for s in range(l)}, tree_of=tree_of,
        node_of=node_of, action_origin=np.array(origin, dtype=np.int64),
        is_dummy=np.array(dummy, dtype=bool))


class FinalAction(NamedTuple):
    action: int
    path_nodes: tuple[int, ...]
    path_states: tuple[int, ...]


def final_action(tg: TransformedGame, pi_new, s: int) -> FinalAction:
    """Follow ``pi_new``'s in-tree moves from original state ``s`` to an original action.

    A dummy leaf edge resolves to the original action it copies.
    """
    pi_new = check_strategy(tg.game, pi_new)
    tree = tg.trees[s]
    state = s
    nodes, states = [0], [s]
    for _ in range(tg.p):
        a = pi_new[state]
        if tg.action_origin[a] >= 0:
            return FinalAction(int(tg.action_origin[a]), tuple(nodes), tuple(states))
        state = int(np.argmax(tg.game.transition[a]))
        nodes.append(int(tg.node_of[state]))
        states.append(state)
    raise AssertionError(f"no original action reached from state {s} in {tree}")


def pull_back_strategy(tg: TransformedGame, pi_new) -> np.ndarray:
    """Original-game strategy taking each state's final action under ``pi_new``."""
    return np.array([final_action(tg, pi_new, s).action
                     for s in range(tg.original.num_states)], dtype=np.int64)


def structure_violations(tg: TransformedGame) -> list[str]:
    """Check the size bound, two actions per state, and leaf placement."""
    g, ng = tg.original, tg.game
    problems = []
    bound = g.num_actions + g.num_states * tg.p
    if ng.num_states > bound:
        problems.append(f"{ng.num_states} states exceed the bound {bound}")
    for st in range(ng.num_states):
        if len(ng.actions(st)) != 2:
            problems.append(f"state {st} has {len(ng.actions(st))} actions")
    for tree in tg.trees:
        if tree.num_leaves != len(g.actions(tree.root)):
            problems.append(f"tree of state {tree.root} has {tree.num_leaves} leaves")
        for node, acts in enumerate(tree.leaf_actions):
            if acts and tree.depth[node] != tg.p - 1:
                problems.append(f"tree of state {tree.root}: leaves below node "
                                f"{node} are not at depth {tg.p}")
    return problems


def format_map(tg: TransformedGame) -> str:
    """Sidecar listing where each new state and action came from."""
    out = ["# map",
           f"# p {tg.p}",
           f"# delta {tg.delta:.17g}",
           f"# scale_c {tg.scale_c:.17g}"]
    for st in range(tg.game.num_states):
        if st in tg.original_state_of:
            out.append(f"newstate {st} from {tg.original_state_of[st]}")
        else:
            out.append(f"newstate {st} from tree:{tg.tree_of[st]}/{tg.node_of[st]}")
    for a in range(tg.game.num_actions):
        if tg.is_dummy[a]:
            src = f"dummy:{a - 1}"
        elif tg.action_origin[a] >= 0:
            src = str(tg.action_origin[a])
        else:
            src = "move"
        out.append(f"newaction {a} from {src}")
    return "\n".join(out) + "\n"
