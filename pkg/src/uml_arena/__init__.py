"""Repeated 2x2 matrix games between a Bayesian expectimin planner, a
follow-or-explore expert learner and scripted opponents."""

from .aixi import AixiPlayer, AixiState, AlmostConsistent, Fixed, Moving, aixi_act, aixi_observe, horizon_depth
from .arena import (
    AixiSpec,
    FoeSpec,
    MatchConfig,
    ScriptedSpec,
    TimeSeries,
    aggregate_runs,
    average_reward,
    cooperation_rate,
    run_match,
)
from .bayes import DEFAULT_SUPPORT, LossMatrixBelief, TransitionCounts, xi_predict
from .config import ConfigError, RunConfig, parse_config, serialize
from .foe import FollowOrExplore, FoePlayer, FoeSchedules, MarkovExpert
from .games import BUILTIN_GAMES, MatrixGame, builtin_game, loss_of, payoff
from .kernel import BACKEND

__version__ = "0.1.0"
