"""Match protocol, multi-run execution and per-step metrics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .aixi import AixiPlayer, AlmostConsistent, HorizonVariant
from .bayes import DEFAULT_SUPPORT
from .foe import FoePlayer, FoeSchedules, FollowOrExplore
from .games import MatrixGame
from .opponents import OpponentSpec, ScriptedPlayer, UniformRandom, resolve_opponent

ROW, COL = 0, 1
PLAYERS = {"row": ROW, "col": COL}


@dataclass(frozen=True)
class AixiSpec:
    horizon: HorizonVariant = AlmostConsistent()
    support: tuple[int, ...] = DEFAULT_SUPPORT


@dataclass(frozen=True)
class FoeSpec:
    variant: str = "faster"
    mc_samples: int = 1000
    block_schedule: str = "sim024"
    prior: Optional[tuple[float, ...]] = None  # None = uniform
    prior_sign: str = "penalty"


@dataclass(frozen=True)
class ScriptedSpec:
    """A scripted opponent by identifier (resolved against game and seat) or explicit spec."""

    name: str = ""
    spec: Optional[OpponentSpec] = None


PlayerSpec = Union[AixiSpec, FoeSpec, ScriptedSpec]


def is_randomized(spec: PlayerSpec) -> bool:
    if isinstance(spec, FoeSpec):
        return True
    if isinstance(spec, ScriptedSpec):
        return spec.name == "random" or isinstance(spec.spec, UniformRandom)
    return False


@dataclass(frozen=True)
class MatchConfig:
    game: MatrixGame
    row: PlayerSpec
    col: PlayerSpec
    steps: Optional[int] = None
    runs: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.steps is None:
            foe = isinstance(self.row, FoeSpec) or isinstance(self.col, FoeSpec)
            object.__setattr__(self, "steps", 20000 if foe else 100)
        if self.runs is None:
            rnd = is_randomized(self.row) or is_randomized(self.col)
            object.__setattr__(self, "runs", 10 if rnd else 1)
        if self.steps < 1 or self.runs < 1:
            raise ValueError("steps and runs must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass
class TimeSeries:
    """Per-step joint actions and rewards of one run (t = 1 is index 0)."""

    actions: np.ndarray  # (T, 2) row/col actions
    rewards: np.ndarray  # (T, 2) row/col rewards
    run: int = 0
    players: list = field(default_factory=list, repr=False, compare=False)

    def __len__(self):
        return len(self.actions)


class MatchError(RuntimeError):
    pass


def player_rng(seed: int, run: int, seat: int) -> np.random.Generator:
    """Independent, reproducible stream for one seat of one run."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(run, seat)))


def build_player(spec: PlayerSpec, game: MatrixGame, seat: int, rng: np.random.Generator):
    if isinstance(spec, AixiSpec):
        return AixiPlayer(spec.horizon, spec.support)
    if isinstance(spec, FoeSpec):
        master = FollowOrExplore(
            weights=spec.prior,
            schedules=FoeSchedules(spec.block_schedule),
            variant=spec.variant,
            mc_samples=spec.mc_samples,
            prior_sign=spec.prior_sign,
            rng=rng,
        )
        return FoePlayer(master)
    if isinstance(spec, ScriptedSpec):
        opp = spec.spec if spec.spec is not None else resolve_opponent(spec.name, game, seat)
        return ScriptedPlayer(opp, rng)
    raise TypeError(f"unknown player spec {spec!r}")


def play(game: MatrixGame, row, col, steps: int, run: int = 0) -> TimeSeries:
    """Play ``steps`` simultaneous rounds between two player objects.

    Both ``act`` calls happen before either player is told the outcome.
    """
    actions = np.zeros((steps, 2), dtype=np.int8)
    rewards = np.zeros((steps, 2), dtype=np.int8)
    for t in range(steps):
        try:
            a = row.act()
            b = col.act()
            if a not in (0, 1) or b not in (0, 1):
                raise MatchError(f"invalid actions {a!r}, {b!r}")
            ra = game.r1[a][b]
            rb = game.r2[a][b]
            row.observe(a, b, ra)
            col.observe(b, a, rb)
        except Exception as exc:
            raise MatchError(f"run {run}, step {t + 1}: {exc}") from exc
        actions[t] = a, b
        rewards[t] = ra, rb
    try:
        row.finish()
        col.finish()
    except Exception as exc:
        raise MatchError(f"run {run}, end of match: {exc}") from exc
    return TimeSeries(actions, rewards, run, [row, col])


def run_single(cfg: MatchConfig, run: int) -> TimeSeries:
    row = build_player(cfg.row, cfg.game, ROW, player_rng(cfg.seed, run, ROW))
    col = build_player(cfg.col, cfg.game, COL, player_rng(cfg.seed, run, COL))
    return play(cfg.game, row, col, cfg.steps, run)


def run_match(cfg: MatchConfig) -> list[TimeSeries]:
    return [run_single(cfg, r) for r in range(cfg.runs)]


def _seat(player) -> int:
    if isinstance(player, str):
        return PLAYERS[player]
    return int(player)


def _check_t(series: TimeSeries, t: int):
    if not 1 <= t <= len(series):
        raise IndexError(f"t={t} outside 1..{len(series)}")


def cooperation_curve(series: TimeSeries, player) -> np.ndarray:
    """Running cooperation rate for t = 1..T."""
    a = series.actions[:, _seat(player)].astype(np.int64)
    return np.cumsum(a) / np.arange(1, len(a) + 1)


def reward_curve(series: TimeSeries, player) -> np.ndarray:
    """Running average reward for t = 1..T."""
    r = series.rewards[:, _seat(player)].astype(np.int64)
    return np.cumsum(r) / np.arange(1, len(r) + 1)


def cooperation_rate(series: TimeSeries, player, t: int) -> float:
    _check_t(series, t)
    return float(np.count_nonzero(series.actions[:t, _seat(player)] == 1)) / t


def average_reward(series: TimeSeries, player, t: int) -> float:
    _check_t(series, t)
    return float(series.rewards[:t, _seat(player)].astype(np.int64).sum()) / t


METRICS: dict[str, Callable[[TimeSeries], np.ndarray]] = {
    "coop_row": lambda s: cooperation_curve(s, ROW),
    "coop_col": lambda s: cooperation_curve(s, COL),
    "reward_row": lambda s: reward_curve(s, ROW),
    "reward_col": lambda s: reward_curve(s, COL),
}


def aggregate_runs(series_list: Sequence[TimeSeries], metric, grid: Sequence[int]):
    """Pointwise mean and population standard deviation of a metric over runs.

    ``metric`` is a name from ``METRICS`` or a callable ``(series, t) -> float``.
    """
    if not series_list:
        raise ValueError("cannot aggregate an empty list of runs")
    grid = np.asarray(grid, dtype=np.int64)
    if isinstance(metric, str):
        curve = METRICS[metric]
        vals = np.array([curve(s)[grid - 1] for s in series_list])
    else:
        vals = np.array([[metric(s, int(t)) for t in grid] for s in series_list], dtype=float)
    mean, std = vals.mean(axis=0), vals.std(axis=0)
    # identical runs: report the exact value instead of a rounding residue
    same = np.ptp(vals, axis=0) == 0
    mean[same] = vals[0, same]
    std[same] = 0.0
    return mean, std


def metric_grid(T: int, points: int = 500, dense_limit: int = 1000) -> np.ndarray:
    """Every step up to ``dense_limit``, otherwise ``points`` log-spaced distinct steps from 1 to T."""
    if T <= dense_limit or T <= points:
        return np.arange(1, T + 1)
    grid = []
    prev = 0
    for i in range(points):
        target = round(T ** (i / (points - 1)))
        t = max(target, prev + 1)
        t = min(t, T - (points - 1 - i))
        grid.append(t)
        prev = t
    return np.array(grid, dtype=np.int64)
