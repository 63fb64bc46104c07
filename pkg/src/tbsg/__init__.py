"""Equilibrium solvers for discounted two-player turn-based stochastic games."""

from tbsg.algorithms import (
    ALGORITHMS,
    SolveReport,
    TraceRecord,
    modified_simplex_strategy_iteration,
    simplex_strategy_iteration,
    solve,
    strategy_iteration,
)
from tbsg.game import (
    Game,
    Player,
    check_strategy,
    flux_of,
    modified_reward,
    validate_game,
    value_of,
)
from tbsg.generate import GenSpec, generate
from tbsg.io import GameFormatError, format_game, parse_game, read_game, write_game
from tbsg.mdp import CounterstrategyResult, best_response, is_equilibrium
from tbsg.monitor import ContractionCheck, contraction_monitor, geometric_parameter
from tbsg.oracle import (
    InstanceTooLargeError,
    all_equilibria,
    brute_force_equilibrium,
    value_iteration,
)
from tbsg.transform import (
    TransformedGame,
    UnsupportedInstanceError,
    final_action,
    pull_back_strategy,
    to_binary,
)

__version__ = "0.1.0"
