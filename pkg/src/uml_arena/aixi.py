"""Bayesian expectimin agent over the two-state Markov model class.

Each step the agent expands an expectimin tree of depth ``d`` over its own
actions and the opponent's replies.  Opponent replies are weighted by the
Laplace mixture, with transition counts updated hypothetically along every
branch.  Unknown loss-matrix entries are averaged over the loss support
the first time a branch visits them and stay fixed below that point, so the
tree reasons about what it would learn by exploring.  The current opponent move is not yet known when acting, so the
per-action values of both possible current moves are mixed with their
predicted probabilities before taking the argmin (ties go to action 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from . import kernel
from .games import loss_of
from .bayes import (
    DEFAULT_SUPPORT,
    LossMatrixBelief,
    TransitionCounts,
    observe_entry,
    update_counts,
    xi_predict,
    xi_predict_first,
    xi_predict_zero,
)


@dataclass(frozen=True)
class Fixed:
    d: int = 8

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("depth must be >= 1")


@dataclass(frozen=True)
class Moving:
    d: int = 8

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("depth must be >= 1")


@dataclass(frozen=True)
class AlmostConsistent:
    """Depth cycles d_max, d_max-1, ..., d_min and starts over."""

    d_max: int = 8
    d_min: int = 2

    def __post_init__(self):
        if not self.d_max >= self.d_min >= 2:
            raise ValueError(f"need d_max >= d_min >= 2, got {self.d_max}, {self.d_min}")


HorizonVariant = Union[Fixed, Moving, AlmostConsistent]


def horizon_depth(variant: HorizonVariant, t: int) -> int:
    if t < 1:
        raise ValueError(f"step index must be >= 1, got {t}")
    if isinstance(variant, AlmostConsistent):
        period = variant.d_max - variant.d_min + 1
        return variant.d_max - (t - 1) % period
    return variant.d


@dataclass(frozen=True)
class AixiState:
    horizon: HorizonVariant = field(default_factory=AlmostConsistent)
    counts: TransitionCounts = field(default_factory=TransitionCounts)
    belief: LossMatrixBelief = field(default_factory=LossMatrixBelief)
    t: int = 1
    last_joint: Optional[tuple[int, int]] = None  # (own, opponent)


def expectimin_values(s0, counts: TransitionCounts, belief: LossMatrixBelief, d: int, backend=None):
    """Per-action values ``(v0, v1)`` of the depth-``d`` tree rooted at opponent move ``s0``.

    ``counts`` must already contain every transition up to and including the
    one into ``s0``.
    """
    fn = backend or kernel.expectimin_values
    v0, v1, _ = fn(s0, counts.cells, belief.entries, belief.support, d)
    return v0, v1


def decision_values(state: AixiState, backend=None) -> tuple[float, float, int]:
    """Root values ``(V0, V1, nodes)`` mixed over the unknown current opponent move."""
    fn = backend or kernel.expectimin_values
    d = horizon_depth(state.horizon, state.t)
    entries, support = state.belief.entries, state.belief.support
    cells = state.counts.cells
    if state.last_joint is None:
        p1 = xi_predict_first(state.counts)
        probs = (1.0 - p1, p1)
        rooted = (cells, cells)
    else:
        y, x = state.last_joint
        probs = (xi_predict_zero(state.counts, y, x), xi_predict(state.counts, y, x))
        rooted = tuple(update_counts(state.counts, y, x, s).cells for s in (0, 1))
    V0 = V1 = 0.0
    nodes = 0
    for s0 in (0, 1):
        v0, v1, n = fn(s0, rooted[s0], entries, support, d)
        V0 += probs[s0] * v0
        V1 += probs[s0] * v1
        nodes += n
    return V0, V1, nodes


def aixi_act(state: AixiState, backend=None) -> int:
    V0, V1, _ = decision_values(state, backend)
    return 0 if V0 <= V1 else 1


def aixi_observe(state: AixiState, joint: tuple[int, int], own_loss: int) -> AixiState:
    """Fold in the revealed joint action ``(own, opponent)`` and own loss."""
    own, opp = joint
    belief = observe_entry(state.belief, own, opp, own_loss)
    counts = state.counts
    if state.last_joint is not None:
        y_prev, x_prev = state.last_joint
        counts = update_counts(counts, y_prev, x_prev, opp)
    return replace(state, counts=counts, belief=belief, t=state.t + 1, last_joint=(own, opp))


class AixiPlayer:
    """Arena adapter: tracks its own state and converts rewards to losses."""

    randomized = False

    def __init__(self, horizon: HorizonVariant = AlmostConsistent(), support=DEFAULT_SUPPORT, backend=None):
        self.state = AixiState(horizon=horizon, belief=LossMatrixBelief(tuple(support)))
        self.backend = backend

    def act(self) -> int:
        return aixi_act(self.state, self.backend)

    def observe(self, own: int, opp: int, reward: int) -> None:
        self.state = aixi_observe(self.state, (own, opp), loss_of(reward))

    def finish(self) -> None:
        pass
