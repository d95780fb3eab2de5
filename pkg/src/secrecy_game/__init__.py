"""Mixed-strategy equilibria of the source vs jammer-relay secrecy game."""
from .analytic import AnalyticSolution, PiecewiseCdf, interval_index, sample, solve_analytic
from .channel import (
    REFERENCE_CHANNEL,
    CaseReport,
    ChannelConfig,
    CornerPoints,
    ReceivedPowers,
    baseline_no_jammer,
    check_conditions,
    corner_points,
    load_channel,
    received_powers,
)
from .discrete import (
    DiscreteSolution,
    DiscreteStrategy,
    build_grid_game,
    discretization_bound,
    fictitious_play,
    solve_grid_game,
    solve_matrix_game_lp,
)
from .errors import (
    ConditionsViolated,
    DegenerateGame,
    DomainError,
    InvalidChannel,
    NormalizationFailure,
    SecrecyGameError,
    SkewAtOne,
    SolverFailure,
    UnsupportedK,
)
from .payoff import RatePair, ReducedGame, pure_strategy_gap, reduce_game, secrecy_payoff
from .verify import equilibrium_check, expected_payoff_vs, simulate_blocks

__version__ = "0.1.0"
