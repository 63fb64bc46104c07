import math

import numpy as np
import pytest
from hypothesis import given, settings

from tbsg import (
    Game,
    GenSpec,
    UnsupportedInstanceError,
    final_action,
    generate,
    is_equilibrium,
    parse_game,
    pull_back_strategy,
    solve,
    to_binary,
    validate_game,
    value_of,
)
from tbsg.io import format_game
from tbsg.oracle import brute_force_equilibrium
from tbsg.transform import format_map, structure_violations

from conftest import small_games


def seven_action_game():
    """State 0 has 7 actions and state 1 has 2, so m = 9 and p = 4."""
    rng = np.random.default_rng(0)
    rows = rng.exponential(size=(9, 2))
    return Game(owner=[1, 2], action_state=[0] * 7 + [1] * 2,
                transition=rows / rows.sum(axis=1, keepdims=True),
                reward=rng.uniform(-1, 1, size=9), gamma=0.8)


def bold_path_strategy(tg):
    """Default choices, but state 0's tree goes root -> 1 -> 2 -> 5 -> third action."""
    pi = tg.game.default_strategy()
    tree = tg.trees[0]

    def move(node, child):
        st = tree.node_state[node]
        target = tree.node_state[child]
        for a in tg.game.actions(st):
            if tg.game.transition[a, target] == 1.0 and not tg.is_dummy[a]:
                pi[st] = a
                return
        raise AssertionError

    move(0, 1)
    move(1, 2)
    move(2, 5)
    st5 = tree.node_state[5]
    pi[st5] = next(a for a in tg.game.actions(st5) if tg.action_origin[a] == 2)
    return pi


class TestTreeShape:
    def test_seven_leaves_depth_four(self):
        tg = to_binary(seven_action_game())
        assert tg.p == 4
        tree = tg.trees[0]
        assert tree.depth == (0, 1, 2, 2, 3, 3, 3, 3)
        assert tree.parent == (-1, 0, 1, 1, 2, 2, 3, 3)
        assert tree.children[:4] == ((1,), (2, 3), (4, 5), (6, 7))
        assert tree.leaf_actions[4:] == ((0, 1), (2, 3), (4, 5), (6,))
        assert tree.num_leaves == 7

    def test_two_action_state_is_a_chain_then_a_fork(self):
        tree = to_binary(seven_action_game()).trees[1]
        assert tree.depth == (0, 1, 2, 3)
        assert tree.leaf_actions[3] == (7, 8)

    def test_parameters_for_eight_actions(self):
        g = generate(GenSpec(num_states=4, actions_per_state=(2, 2), gamma=0.9, seed=0))
        assert g.num_actions == 8
        tg = to_binary(g)
        assert tg.p == 3
        assert tg.delta == pytest.approx(0.9 ** (1 / 3))
        assert tg.scale_c == pytest.approx(0.9 ** (2 / 3))
        assert tg.game.gamma == tg.delta

    def test_single_action_game_rejected(self):
        g = Game(owner=[1], action_state=[0], transition=[[1.0]], reward=[1.0], gamma=0.5)
        with pytest.raises(UnsupportedInstanceError):
            to_binary(g)

    @settings(max_examples=100, deadline=None)
    @given(small_games(max_states=6, actions=(1, 5)))
    def test_structure(self, g):
        if g.num_actions < 2:
            return
        tg = to_binary(g)
        assert validate_game(tg.game) == []
        assert structure_violations(tg) == []
        assert tg.game.num_states <= g.num_actions + g.num_states * math.ceil(
            math.log2(g.num_actions))
        assert all(len(tg.game.actions(s)) == 2 for s in range(tg.game.num_states))
        np.testing.assert_array_equal(tg.game.owner[:g.num_states], g.owner)
        # Dummies copy the row of their twin and are worse for the owner.
        for a in np.flatnonzero(tg.is_dummy):
            np.testing.assert_array_equal(tg.game.transition[a], tg.game.transition[a - 1])
            sign = 1 if tg.game.owner[tg.game.action_state[a]] == 1 else -1
            assert sign * (tg.game.reward[a - 1] - tg.game.reward[a]) == pytest.approx(1.0)


class TestFinalAction:
    def test_path_through_seven_leaf_tree(self):
        tg = to_binary(seven_action_game())
        res = final_action(tg, bold_path_strategy(tg), 0)
        assert res.action == 2
        assert res.path_nodes == (0, 1, 2, 5)
        assert len(res.path_states) == tg.p

    def test_depth_one(self, two_action_p1):
        tg = to_binary(two_action_p1)
        assert tg.p == 1
        res = final_action(tg, [1], 0)
        assert res.action == 1 and res.path_nodes == (0,)

    def test_leftmost_routing_gives_lowest_actions(self):
        g = generate(GenSpec(num_states=5, actions_per_state=(1, 5), seed=3))
        tg = to_binary(g)
        np.testing.assert_array_equal(pull_back_strategy(tg, tg.game.default_strategy()),
                                      g.default_strategy())

    @pytest.mark.parametrize("seed", range(10))
    def test_path_stays_in_tree(self, seed):
        g = generate(GenSpec(num_states=4, actions_per_state=(1, 6), seed=seed))
        tg = to_binary(g)
        pi = tg.game.random_strategy(np.random.default_rng(seed))
        for s in range(g.num_states):
            res = final_action(tg, pi, s)
            assert set(res.path_states) <= set(tg.trees[s].node_state)
            assert len(res.path_states) - 1 <= tg.p - 1
            assert g.action_state[res.action] == s


def random_real_strategy(tg, rng):
    """A random new-game strategy that never picks a dummy."""
    return np.array([rng.choice([a for a in tg.game.actions(s) if not tg.is_dummy[a]])
                     for s in range(tg.game.num_states)])


@pytest.mark.parametrize("seed", range(30))
def test_scaling_law_for_arbitrary_strategies(seed):
    g = generate(GenSpec(num_states=1 + seed % 5, actions_per_state=(1, 5),
                         gamma=(0.5, 0.9, 0.99)[seed % 3], seed=seed))
    if g.num_actions < 2:
        return
    tg = to_binary(g)
    rng = np.random.default_rng(seed)
    for _ in range(5):
        pi_new = random_real_strategy(tg, rng)
        big = value_of(tg.game, pi_new)[:g.num_states]
        small = value_of(g, pull_back_strategy(tg, pi_new))
        np.testing.assert_allclose(big, tg.scale_c * small, rtol=1e-6, atol=1e-9)


@pytest.mark.parametrize("algorithm", ["strategy", "simplex", "modified-simplex"])
@pytest.mark.parametrize("seed", range(8))
def test_equilibrium_round_trip(algorithm, seed):
    g = generate(GenSpec(num_states=2 + seed % 4, actions_per_state=(1, 4),
                         gamma=0.7, seed=seed))
    truth = brute_force_equilibrium(g)
    tg = to_binary(g)
    rep = solve(tg.game, algorithm)
    assert rep.certified
    assert not tg.is_dummy[rep.equilibrium].any()
    np.testing.assert_allclose(rep.value[:g.num_states], tg.scale_c * truth.value,
                               atol=1e-6)
    assert is_equilibrium(g, pull_back_strategy(tg, rep.equilibrium))


def test_map_file():
    tg = to_binary(seven_action_game())
    lines = format_map(tg).splitlines()
    assert lines[0] == "# map"
    assert "newstate 0 from 0" in lines
    assert "newstate 1 from 1" in lines
    assert "newstate 2 from tree:0/1" in lines
    new_states = [ln for ln in lines if ln.startswith("newstate")]
    assert len(new_states) == tg.game.num_states
    assert sum(" from dummy:" in ln for ln in lines) == tg.is_dummy.sum()
    assert sum(ln.startswith("newaction") for ln in lines) == tg.game.num_actions
    assert parse_game(format_game(tg.game)).num_states == tg.game.num_states
