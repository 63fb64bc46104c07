import numpy as np
import pytest
from hypothesis import given, settings

from tbsg import Game, check_strategy, flux_of, modified_reward, validate_game, value_of
from tbsg.game import default_eps

from conftest import cycle_game, games_with_strategies, self_loop_game


def neumann_value(g, pi, terms=4000):
    """Truncated sum of gamma^k P^k r, independent of the direct solve."""
    P, r = g.transition[pi], g.reward[pi]
    total, term = np.zeros_like(r), r.copy()
    for _ in range(terms):
        total += term
        term = g.gamma * (P @ term)
    return total


class TestValidate:
    def test_self_loop_is_valid(self):
        assert validate_game(self_loop_game([0.0])) == []

    def test_short_row_names_the_action(self):
        g = Game(owner=[1], action_state=[0, 0], transition=[[1.0], [0.9]],
                 reward=[0, 0], gamma=0.5)
        problems = validate_game(g)
        assert len(problems) == 1
        assert "action 1" in problems[0]

    def test_state_without_actions(self):
        g = Game(owner=[1, 2], action_state=[0], transition=[[1.0, 0.0]],
                 reward=[0], gamma=0.5)
        problems = validate_game(g)
        assert problems == ["state 1: has no actions"]

    @pytest.mark.parametrize("gamma", [0.0, 1.0, 1.5])
    def test_bad_gamma(self, gamma):
        assert any("gamma" in p for p in validate_game(self_loop_game([1.0], gamma=gamma)))

    def test_bad_owner_and_negative_probability(self):
        g = Game(owner=[3], action_state=[0], transition=[[1.0]], reward=[0], gamma=0.5)
        assert any("owner" in p for p in validate_game(g))
        g = Game(owner=[1, 1], action_state=[0, 1],
                 transition=[[1.5, -0.5], [0, 1]], reward=[0, 0], gamma=0.5)
        assert any("negative" in p for p in validate_game(g))

    def test_arrays_are_read_only(self):
        g = cycle_game()
        with pytest.raises(ValueError):
            g.reward[0] = 5.0


def test_check_strategy_rejects_foreign_action():
    g = cycle_game()
    with pytest.raises(ValueError, match="belongs to state"):
        check_strategy(g, [1, 0])
    with pytest.raises(ValueError):
        check_strategy(g, [0])


def test_eps_env_override(monkeypatch):
    monkeypatch.setenv("TBSG_EPS", "1e-6")
    assert default_eps() == 1e-6
    assert self_loop_game([2.0]).tolerance() == pytest.approx(3e-6)
    monkeypatch.setenv("TBSG_EPS", "-1")
    with pytest.raises(ValueError):
        default_eps()


class TestValue:
    def test_zero_reward(self):
        assert value_of(self_loop_game([0.0], gamma=0.9), [0]) == pytest.approx([0.0])

    def test_geometric_series(self):
        assert value_of(self_loop_game([1.0], gamma=0.9), [0]) == pytest.approx([10.0])

    def test_two_cycle(self):
        np.testing.assert_allclose(value_of(cycle_game(), [0, 1]), [4 / 3, 2 / 3])

    @settings(max_examples=50, deadline=None)
    @given(games_with_strategies(count=1))
    def test_matches_neumann_series_and_residual(self, case):
        g, pi = case
        if g.gamma > 0.95:
            return
        v = value_of(g, pi)
        np.testing.assert_allclose(v, neumann_value(g, pi), atol=1e-9)
        resid = v - g.gamma * g.transition[pi] @ v - g.reward[pi]
        assert np.linalg.norm(resid) <= 1e-10 * (1 + np.linalg.norm(g.reward[pi]))
        assert np.abs(v).max() <= np.abs(g.reward).max() / (1 - g.gamma) + 1e-9


class TestModifiedReward:
    def test_switch_up(self, two_action_p1):
        rc = modified_reward(two_action_p1, [0])
        assert rc[1] == pytest.approx(1.0)

    def test_switch_down(self, two_action_p1):
        rc = modified_reward(two_action_p1, [1])
        assert rc[0] == pytest.approx(-1.0)

    @settings(max_examples=100, deadline=None)
    @given(games_with_strategies(count=1))
    def test_zero_on_strategy(self, case):
        g, pi = case
        rc = modified_reward(g, pi, value_of(g, pi))
        assert np.abs(rc[pi]).max() <= 1e-9 * (1 + np.abs(g.reward).max() / (1 - g.gamma))


class TestFlux:
    def test_single_state(self):
        x = flux_of(self_loop_game([3.0], gamma=0.9), [0])
        assert x == pytest.approx([10.0])

    def test_two_cycle(self):
        x = flux_of(cycle_game(), [0, 1])
        np.testing.assert_allclose(x, [2.0, 2.0])
        assert x.sum() == pytest.approx(4.0)

    def test_off_strategy_is_exactly_zero(self, two_action_p1):
        assert flux_of(two_action_p1, [1])[0] == 0.0

    @settings(max_examples=200, deadline=None)
    @given(games_with_strategies(count=2))
    def test_identities(self, case):
        g, pi, pi2 = case
        l, horizon = g.num_states, g.num_states / (1 - g.gamma)
        scale = 1 + horizon * np.abs(g.reward).max()
        x, v = flux_of(g, pi), value_of(g, pi)
        x2, v2 = flux_of(g, pi2), value_of(g, pi2)

        assert abs(x.sum() - horizon) <= 1e-9 * horizon
        assert x[pi].min() >= 1 - 1e-12
        assert x[pi].max() <= horizon + 1e-9
        assert np.count_nonzero(x) <= l
        assert abs(v.sum() - x @ g.reward) <= 1e-8 * scale
        rc = modified_reward(g, pi, v)
        assert abs((v2 - v).sum() - x2 @ rc) <= 1e-8 * scale
        # Componentwise form of the difference identity.
        P2 = g.transition[pi2]
        diff = np.linalg.solve(np.eye(l) - g.gamma * P2, rc[pi2])
        np.testing.assert_allclose(v2 - v, diff, atol=1e-8 * scale)
