"""Closed-form Bayes mixture over two-state Markov opponents, and the belief
over an unknown deterministic loss matrix.

The mixture over all transition matrices under a uniform prior reduces to
Laplace's rule of succession on the transition counts
``n[y][x_prev][x_next]`` (own previous action ``y``, opponent previous and
next action).  Counts are stored flat, index ``4*y + 2*x_prev + x_next``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

DEFAULT_SUPPORT = (0, 1, 2, 3, 4, -16)


def cell_index(y: int, x_prev: int, x_next: int) -> int:
    return 4 * y + 2 * x_prev + x_next


@dataclass(frozen=True)
class TransitionCounts:
    cells: tuple[int, ...] = (0,) * 8

    def __post_init__(self):
        if len(self.cells) != 8 or any(c < 0 for c in self.cells):
            raise ValueError(f"transition counts must be 8 nonnegative integers, got {self.cells}")

    @classmethod
    def from_table(cls, n) -> "TransitionCounts":
        """Build from a nested ``n[y][x_prev][x_next]`` table."""
        return cls(tuple(int(n[y][xp][xn]) for y in (0, 1) for xp in (0, 1) for xn in (0, 1)))

    def __getitem__(self, key: tuple[int, int, int]) -> int:
        return self.cells[cell_index(*key)]

    @property
    def total(self) -> int:
        return sum(self.cells)


def xi_predict(counts: TransitionCounts, y_prev: int, x_prev: int, exact: bool = False):
    """Probability that the opponent plays 1 next, given the last joint action."""
    n0 = counts.cells[cell_index(y_prev, x_prev, 0)]
    n1 = counts.cells[cell_index(y_prev, x_prev, 1)]
    if exact:
        return Fraction(n1 + 1, n0 + n1 + 2)
    return (n1 + 1) / (n0 + n1 + 2)


def xi_predict_zero(counts: TransitionCounts, y_prev: int, x_prev: int, exact: bool = False):
    n0 = counts.cells[cell_index(y_prev, x_prev, 0)]
    n1 = counts.cells[cell_index(y_prev, x_prev, 1)]
    if exact:
        return Fraction(n0 + 1, n0 + n1 + 2)
    return (n0 + 1) / (n0 + n1 + 2)


def xi_predict_first(counts: Optional[TransitionCounts] = None) -> float:
    # no previous joint action to condition on in round one
    return 0.5


def update_counts(counts: TransitionCounts, y_prev: int, x_prev: int, x_next: int) -> TransitionCounts:
    cells = list(counts.cells)
    cells[cell_index(y_prev, x_prev, x_next)] += 1
    return TransitionCounts(tuple(cells))


class SupportViolation(ValueError):
    pass


class InconsistentLossError(ValueError):
    """An entry of the loss matrix was observed with two different values."""


@dataclass(frozen=True)
class LossMatrixBelief:
    """Per-entry belief; ``entries[2*y + x]`` is the known loss or None."""

    support: tuple[int, ...] = DEFAULT_SUPPORT
    entries: tuple[Optional[int], ...] = (None, None, None, None)

    def __post_init__(self):
        if not self.support:
            raise ValueError("loss support must be nonempty")
        for v in self.entries:
            if v is not None and v not in self.support:
                raise SupportViolation(f"known loss {v} not in support {self.support}")

    @property
    def known(self) -> int:
        return sum(v is not None for v in self.entries)

    def expected_losses(self) -> tuple[float, float, float, float]:
        """Expected loss of every entry, flat index ``2*y + x``."""
        mean = sum(self.support) / len(self.support)
        return tuple(float(mean) if v is None else float(v) for v in self.entries)


def expected_entry_loss(belief: LossMatrixBelief, y: int, x: int) -> float:
    return belief.expected_losses()[2 * y + x]


def observe_entry(belief: LossMatrixBelief, y: int, x: int, loss: int) -> LossMatrixBelief:
    if loss not in belief.support:
        raise SupportViolation(f"loss {loss} not in support {belief.support}")
    idx = 2 * y + x
    current = belief.entries[idx]
    if current is not None:
        if current != loss:
            raise InconsistentLossError(
                f"loss for (own={y}, opp={x}) observed as {loss} but previously {current}"
            )
        return belief
    entries = list(belief.entries)
    entries[idx] = loss
    return LossMatrixBelief(belief.support, tuple(entries))


def parse_support(text: str) -> tuple[int, ...]:
    values = tuple(int(v.strip()) for v in text.split(",") if v.strip())
    if not values:
        raise ValueError("loss support must be nonempty")
    return values


def known_belief(losses: Sequence[Sequence[int]], support=DEFAULT_SUPPORT) -> LossMatrixBelief:
    """Fully collapsed belief from a 2x2 loss table ``losses[y][x]``."""
    return LossMatrixBelief(tuple(support), tuple(int(losses[y][x]) for y in (0, 1) for x in (0, 1)))
