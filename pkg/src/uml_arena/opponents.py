"""Scripted opponents: uniform random, k-tit-for-tat, alternating and stubborn.

Opponents are expressed as a pure transition system: ``opponent_act`` reads
an immutable :class:`OpponentState`, ``opponent_observe`` returns the next
one.  :class:`ScriptedPlayer` wraps the pair for the arena.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .games import COOPERATE, DEFECT, MatrixGame


@dataclass(frozen=True)
class UniformRandom:
    pass


@dataclass(frozen=True)
class TitForTat:
    """k = 1 is classic tit for tat; k >= 2 defects first and cooperates
    only after k consecutive cooperations of the adversary."""

    k: int = 1

    def __post_init__(self):
        if not 1 <= self.k <= 3:
            raise ValueError(f"tit-for-tat k must be in 1..3, got {self.k}")


@dataclass(frozen=True)
class Alternating:
    start: int = DEFECT

    def __post_init__(self):
        _check_action(self.start)


@dataclass(frozen=True)
class Stubborn:
    """Plays ``1 - yield_action`` until the adversary has played
    ``trigger_action`` for ``k`` consecutive steps, then plays ``yield_action``
    for as long as that run continues."""

    k: int
    yield_action: int
    trigger_action: Optional[int] = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"stubborn k must be >= 1, got {self.k}")
        _check_action(self.yield_action)
        if self.trigger_action is None:
            object.__setattr__(self, "trigger_action", self.yield_action)
        _check_action(self.trigger_action)


OpponentSpec = Union[UniformRandom, TitForTat, Alternating, Stubborn]


@dataclass(frozen=True)
class OpponentState:
    run: int = 0
    last_own: Optional[int] = None
    step: int = 0


def _check_action(a):
    if a not in (0, 1):
        raise ValueError(f"action must be 0 or 1, got {a!r}")


def _relevant_action(spec: OpponentSpec) -> Optional[int]:
    if isinstance(spec, TitForTat):
        return COOPERATE
    if isinstance(spec, Stubborn):
        return spec.trigger_action
    return None


def opponent_act(spec: OpponentSpec, state: OpponentState, rng=None) -> tuple[int, OpponentState]:
    if isinstance(spec, UniformRandom):
        action = int(rng.integers(2))
    elif isinstance(spec, TitForTat):
        if state.step == 0:
            action = COOPERATE if spec.k == 1 else DEFECT
        else:
            action = COOPERATE if state.run >= spec.k else DEFECT
    elif isinstance(spec, Alternating):
        action = spec.start if state.last_own is None else 1 - state.last_own
    elif isinstance(spec, Stubborn):
        action = spec.yield_action if state.run >= spec.k else 1 - spec.yield_action
    else:
        raise TypeError(f"unknown opponent spec {spec!r}")
    return action, state


def opponent_observe(spec: OpponentSpec, state: OpponentState, own: int, adversary: int) -> OpponentState:
    """Advance ``state`` after a step where this opponent played ``own``."""
    target = _relevant_action(spec)
    run = state.run
    if target is not None:
        run = run + 1 if adversary == target else 0
    return replace(state, run=run, last_own=own, step=state.step + 1)


OPPONENT_IDS = ("random", "tft1", "tft2", "tft3", "alt0", "alt1", "stubborn3", "stubborn2")


def _favourite_action(game: MatrixGame, player: int) -> int:
    # own action in the player's best cell, row-major over (own, opp)
    best, arg = -1, 0
    for own in (0, 1):
        for opp in (0, 1):
            r = game.reward(player, own, opp)
            if r > best:
                best, arg = r, own
    return arg


def stubborn_for(game: MatrixGame, player: int, k: int) -> Stubborn:
    """Stubborn opponent for ``player`` (0 = row, 1 = column) in ``game``.

    The stubborn player insists on the action of its own best cell and gives
    in after the adversary has insisted ``k`` times on the adversary's
    favourite action.  In Chicken this means defecting until the adversary
    has defected ``k`` times; in Battle of the Sexes it means yielding to the
    adversary's preferred venue.
    """
    insist = _favourite_action(game, player)
    trigger = _favourite_action(game, 1 - player)
    return Stubborn(k=k, yield_action=1 - insist, trigger_action=trigger)


def resolve_opponent(ident: str, game: MatrixGame, player: int) -> OpponentSpec:
    if ident == "random":
        return UniformRandom()
    if ident.startswith("tft") and ident[3:] in ("1", "2", "3"):
        return TitForTat(int(ident[3:]))
    if ident in ("alt0", "alt1"):
        return Alternating(int(ident[3]))
    if ident in ("stubborn2", "stubborn3"):
        return stubborn_for(game, player, int(ident[-1]))
    raise KeyError(f"unknown opponent {ident!r}; valid opponents: {', '.join(OPPONENT_IDS)}")


class ScriptedPlayer:
    """Arena adapter around an opponent spec."""

    randomized = False

    def __init__(self, spec: OpponentSpec, rng: Optional[np.random.Generator] = None):
        self.spec = spec
        self.state = OpponentState()
        self.rng = rng
        self.randomized = isinstance(spec, UniformRandom)

    def act(self) -> int:
        action, self.state = opponent_act(self.spec, self.state, self.rng)
        return action

    def observe(self, own: int, opp: int, reward: int) -> None:
        self.state = opponent_observe(self.spec, self.state, own, opp)

    def finish(self) -> None:
        pass
