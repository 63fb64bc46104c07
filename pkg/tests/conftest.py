import numpy as np
import pytest
from hypothesis import strategies as st

from tbsg import Game, GenSpec, generate


def self_loop_game(rewards, owner=1, gamma=0.5):
    """One state whose actions all loop back to it."""
    k = len(rewards)
    return Game(owner=[owner], action_state=[0] * k, transition=np.ones((k, 1)),
                reward=rewards, gamma=gamma)


def cycle_game(rewards=(1.0, 0.0), gamma=0.5):
    """Two states, one action each, deterministic 0 -> 1 -> 0."""
    return Game(owner=[1, 1], action_state=[0, 1],
                transition=[[0.0, 1.0], [1.0, 0.0]], reward=rewards, gamma=gamma)


ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""
    def record(number, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
        ACCEPTANCE.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda ln: int(ln.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def two_action_p1():
    return self_loop_game([1.0, 2.0], owner=1)


@pytest.fixture
def two_action_p2():
    return self_loop_game([1.0, 2.0], owner=2)


@st.composite
def small_games(draw, max_states=5, actions=(1, 3), **flags):
    spec = GenSpec(
        num_states=draw(st.integers(1, max_states)),
        actions_per_state=actions,
        gamma=draw(st.sampled_from([0.3, 0.5, 0.9, 0.99])),
        seed=draw(st.integers(0, 2**31)),
        **flags,
    )
    return generate(spec)


@st.composite
def games_with_strategies(draw, count=2, **kwargs):
    g = draw(small_games(**kwargs))
    strategies = []
    for _ in range(count):
        strategies.append(np.array(
            [draw(st.sampled_from(list(g.actions(s)))) for s in range(g.num_states)]))
    return (g, *strategies)
