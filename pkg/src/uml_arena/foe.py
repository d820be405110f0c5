"""Follow-or-Explore: follow the perturbed leader over a finite expert class
with forced exploration and bandit feedback on an increasing block scale.

The master runs on its own clock ``tau``.  Each master step either explores
(with probability ``gamma(tau)``, sampling an expert from the prior over the
active set) or follows the perturbed leader, then hands control to the chosen
expert for ``block(tau)`` elementary steps.  Only the chosen expert's block
loss is observed and it is importance weighted into the cumulative estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

N_EXPERTS = 16

# B_tau = floor(tau ** exponent); exponents kept rational so the floor is exact
BLOCK_EXPONENTS = {
    "theorem": Fraction(1, 8),
    "theorem16": Fraction(1, 16),
    "sim024": Fraction(6, 25),
}


class ContractViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class MarkovExpert:
    """Deterministic lookup table on the last joint action.

    Bit ``2*own + opp`` of ``id`` is the action played after the previous
    round ``(own, opp)``; in the first round the expert plays uniformly.
    """

    id: int

    def __post_init__(self):
        if not 0 <= self.id < N_EXPERTS:
            raise ValueError(f"expert id must be in 0..15, got {self.id}")

    def table(self, own: int, opp: int) -> int:
        return (self.id >> (2 * own + opp)) & 1


ALL_EXPERTS = tuple(MarkovExpert(i) for i in range(N_EXPERTS))


def expert_act(expert: MarkovExpert, last_joint: Optional[tuple[int, int]], rng) -> int:
    if last_joint is None:
        return int(rng.integers(2))
    return expert.table(*last_joint)


def _int_root_floor(tau: int, exponent: Fraction) -> int:
    # largest k with k ** q <= tau ** p, where exponent = p / q
    p, q = exponent.numerator, exponent.denominator
    target = tau**p
    k = max(1, int(math.floor(tau ** float(exponent))))
    while k > 1 and k**q > target:
        k -= 1
    while (k + 1) ** q <= target:
        k += 1
    return k


@dataclass(frozen=True)
class FoeSchedules:
    block_schedule: str = "sim024"

    def __post_init__(self):
        if self.block_schedule not in BLOCK_EXPONENTS:
            raise ValueError(
                f"unknown block schedule {self.block_schedule!r}; valid: {', '.join(BLOCK_EXPONENTS)}"
            )

    @staticmethod
    def gamma(tau: int) -> float:
        return tau**-0.25

    @staticmethod
    def eta(tau: int) -> float:
        return tau**-0.75

    def block(self, tau: int) -> int:
        return max(1, _int_root_floor(tau, BLOCK_EXPONENTS[self.block_schedule]))


def entering_time(w) -> int:
    """Master step at which an expert of prior weight ``w`` becomes active: ceil(w ** -16)."""
    if not w > 0:
        raise ValueError(f"prior weight must be positive, got {w}")
    if w > 1:
        raise ValueError(f"prior weight must be <= 1, got {w}")
    return math.ceil(Fraction(w) ** -16)


def prior_penalty(weights: np.ndarray, prior_sign: str = "penalty") -> np.ndarray:
    """Additive prior term of the FPL score: -ln w, or +ln w for ``prior_sign='paper'``."""
    logs = np.log(weights)
    if prior_sign == "penalty":
        return -logs
    if prior_sign == "paper":
        return logs
    raise ValueError(f"prior_sign must be 'paper' or 'penalty', got {prior_sign!r}")


def fpl_select(cum_losses, weights, active, eta: float, rng=None, perturbations=None, prior_sign="penalty") -> int:
    """Follow the perturbed leader over ``active`` experts.

    Returns the active index minimising ``eta * loss + prior term - q`` with
    ``q`` i.i.d. standard exponential (or the given ``perturbations``, one per
    active expert).  Ties go to the lowest index.
    """
    active = np.asarray(active, dtype=np.intp)
    if active.size == 0:
        raise ContractViolation("FPL selection over an empty active set")
    if not eta > 0:
        raise ContractViolation(f"learning rate must be positive, got {eta}")
    cum = np.asarray(cum_losses, dtype=float)[active]
    pen = prior_penalty(np.asarray(weights, dtype=float)[active], prior_sign)
    if perturbations is None:
        q = rng.exponential(size=active.size)
    else:
        q = np.asarray(perturbations, dtype=float)
    return int(active[np.argmin(eta * cum + pen - q)])


def estimate_increment(block_loss: float, prob: float) -> float:
    """Importance-weighted loss estimate for the selected expert."""
    if block_loss < 0:
        raise ContractViolation(f"negative block loss {block_loss}")
    if not prob > 0:
        raise ContractViolation("selection probability estimate is zero")
    return block_loss / prob


@dataclass
class BlockRecord:
    tau: int
    expert: int
    explored: bool
    length: int
    loss: float
    increment: float


class FollowOrExplore:
    """Master algorithm state and update rules.

    ``variant='basic'`` learns only from exploration steps, dividing by the
    exploration probability of the chosen expert.  ``variant='faster'``
    learns every step, dividing by a Monte-Carlo estimate of the joint
    selection probability.
    """

    def __init__(
        self,
        weights: Optional[Sequence[float]] = None,
        schedules: FoeSchedules = FoeSchedules(),
        variant: str = "faster",
        mc_samples: int = 1000,
        prior_sign: str = "penalty",
        rng: Optional[np.random.Generator] = None,
        n: int = N_EXPERTS,
    ):
        if variant not in ("basic", "faster"):
            raise ValueError(f"variant must be 'basic' or 'faster', got {variant!r}")
        if mc_samples < 1:
            raise ValueError("mc_samples must be >= 1")
        if weights is None:
            weights = [1.0 / n] * n
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0 or np.any(w <= 0) or w.sum() > 1 + 1e-9:
            raise ValueError("prior weights must be positive and sum to at most 1")
        prior_penalty(w, prior_sign)
        self.n = w.size
        self.weights = w
        self.entering = np.array([entering_time(float(x)) for x in w], dtype=object)
        self.schedules = schedules
        self.variant = variant
        self.mc_samples = mc_samples
        self.prior_sign = prior_sign
        self.rng = rng if rng is not None else np.random.default_rng()
        self.tau = 1
        self.t0 = 0
        self.cum = np.zeros(self.n)
        self.history: list[BlockRecord] = []

    def active(self) -> np.ndarray:
        entered = np.array([self.tau >= e for e in self.entering])
        if not entered.any():
            # a finite class may have no expert entered yet; the earliest ones play
            first = min(self.entering)
            entered = np.array([e == first for e in self.entering])
        return np.flatnonzero(entered)

    def exploration_weights(self, active: np.ndarray) -> np.ndarray:
        w = self.weights[active]
        return w / w.sum()

    def select(self) -> tuple[int, bool]:
        """Draw the expert for the current master step: ``(index, explored)``."""
        active = self.active()
        gamma = self.schedules.gamma(self.tau)
        if self.rng.random() < gamma:
            return int(self.rng.choice(active, p=self.exploration_weights(active))), True
        eta = self.schedules.eta(self.tau)
        return fpl_select(self.cum, self.weights, active, eta, self.rng, prior_sign=self.prior_sign), False

    def selection_prob_mc(self, i: int, samples: Optional[int] = None) -> float:
        """Monte-Carlo estimate of the probability that ``select`` returns ``i``."""
        samples = samples or self.mc_samples
        active = self.active()
        if i not in active:
            raise ContractViolation(f"expert {i} is not active at tau={self.tau}")
        gamma = self.schedules.gamma(self.tau)
        eta = self.schedules.eta(self.tau)
        rng = self.rng
        explore = rng.random(samples) < gamma
        picks = np.empty(samples, dtype=np.intp)
        n_exp = int(explore.sum())
        if n_exp:
            picks[explore] = rng.choice(active, size=n_exp, p=self.exploration_weights(active))
        n_fpl = samples - n_exp
        if n_fpl:
            base = eta * self.cum[active] + prior_penalty(self.weights[active], self.prior_sign)
            q = rng.exponential(size=(n_fpl, active.size))
            picks[~explore] = active[np.argmin(base - q, axis=1)]
        p_hat = np.count_nonzero(picks == i) / samples
        return max(p_hat, 1.0 / (2 * samples))

    def increment(self, expert: int, explored: bool, block_loss: float) -> float:
        """Estimate increment for the selected expert at the current master step (no state change)."""
        if self.variant == "basic":
            if not explored:
                return 0.0
            active = self.active()
            w_tilde = self.exploration_weights(active)[np.searchsorted(active, expert)]
            return estimate_increment(block_loss, self.schedules.gamma(self.tau) * w_tilde)
        return estimate_increment(block_loss, self.selection_prob_mc(expert))

    def learn(self, expert: int, explored: bool, block_loss: float, length: int) -> BlockRecord:
        """Apply the estimate update for a finished (possibly truncated) block and advance the clock."""
        if not 0 <= block_loss <= length + 1e-12:
            raise ContractViolation(f"block loss {block_loss} outside [0, {length}]")
        increment = self.increment(expert, explored, block_loss)
        self.cum[expert] += increment
        rec = BlockRecord(self.tau, expert, explored, length, block_loss, increment)
        self.history.append(rec)
        self.tau += 1
        self.t0 += length
        return rec

    def master_step(self, play_block: Callable[[int, int], float]) -> BlockRecord:
        """One full master step.  ``play_block(expert, B)`` plays the expert for
        ``B`` elementary steps and returns the normalised block loss."""
        expert, explored = self.select()
        B = self.schedules.block(self.tau)
        loss = play_block(expert, B)
        return self.learn(expert, explored, loss, B)


class FoePlayer:
    """Arena adapter: runs the master on the elementary time scale.

    Game losses ``4 - reward`` are divided by 4 so each step costs at most 1.
    """

    randomized = True

    def __init__(self, master: FollowOrExplore, experts: Sequence[MarkovExpert] = ALL_EXPERTS):
        if len(experts) != master.n:
            raise ValueError("expert class size does not match the prior")
        self.master = master
        self.experts = tuple(experts)
        self.last_joint: Optional[tuple[int, int]] = None
        self._expert = None
        self._explored = False
        self._remaining = 0
        self._played = 0
        self._loss = 0.0

    @property
    def rng(self):
        return self.master.rng

    def act(self) -> int:
        if self._remaining == 0:
            self._expert, self._explored = self.master.select()
            self._remaining = self.master.schedules.block(self.master.tau)
            self._played = 0
            self._loss = 0.0
        return expert_act(self.experts[self._expert], self.last_joint, self.rng)

    def observe(self, own: int, opp: int, reward: int) -> None:
        self.last_joint = (own, opp)
        self._loss += (4 - reward) / 4
        self._played += 1
        self._remaining -= 1
        if self._remaining == 0:
            self._close_block()

    def finish(self) -> None:
        # a block cut short by the end of the match is still learned
        if self._remaining > 0 and self._played > 0:
            self._remaining = 0
            self._close_block()

    def _close_block(self):
        self.master.learn(self._expert, self._explored, self._loss, self._played)
