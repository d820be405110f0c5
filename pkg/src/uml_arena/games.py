"""2x2 matrix games, the built-in game table and the reward/loss convention."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

DEFECT = 0
COOPERATE = 1

MAX_REWARD = 4


class JointAction(NamedTuple):
    row: int
    col: int


@dataclass(frozen=True)
class MatrixGame:
    """A two-player game with 2x2 integer reward matrices.

    ``r1[i][j]`` is paid to the row player and ``r2[i][j]`` to the column
    player when the row player chooses ``i`` and the column player ``j``.
    """

    name: str
    r1: tuple[tuple[int, int], tuple[int, int]]
    r2: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        for label, m in (("r1", self.r1), ("r2", self.r2)):
            if len(m) != 2 or any(len(row) != 2 for row in m):
                raise ValueError(f"{self.name}: {label} must be 2x2")
            for row in m:
                for v in row:
                    if not isinstance(v, int) or not 0 <= v <= MAX_REWARD:
                        raise ValueError(
                            f"{self.name}: {label} entries must be integers in 0..{MAX_REWARD}, got {v!r}"
                        )

    def reward(self, player: int, own: int, opp: int) -> int:
        """Reward for ``player`` (0 = row, 1 = column) given its own and the opponent's action."""
        if player == 0:
            return self.r1[own][opp]
        return self.r2[opp][own]


def _m(a, b, c, d):
    return ((a, b), (c, d))


def _transpose(m):
    return ((m[0][0], m[1][0]), (m[0][1], m[1][1]))


_PD = _m(1, 4, 0, 3)
_SH = _m(2, 3, 0, 4)
_CH = _m(0, 4, 1, 2)

BUILTIN_GAMES: dict[str, MatrixGame] = {
    "prisoners_dilemma": MatrixGame("prisoners_dilemma", _PD, _transpose(_PD)),
    "stag_hunt": MatrixGame("stag_hunt", _SH, _transpose(_SH)),
    "chicken": MatrixGame("chicken", _CH, _transpose(_CH)),
    "battle_of_sexes": MatrixGame("battle_of_sexes", _m(2, 0, 0, 4), _m(4, 0, 0, 2)),
    "matching_pennies": MatrixGame("matching_pennies", _m(4, 0, 0, 4), _m(0, 4, 4, 0)),
}


def builtin_game(name: str) -> MatrixGame:
    try:
        return BUILTIN_GAMES[name]
    except KeyError:
        valid = ", ".join(sorted(BUILTIN_GAMES))
        raise KeyError(f"unknown game {name!r}; valid games: {valid}") from None


def payoff(game: MatrixGame, joint: tuple[int, int]) -> tuple[int, int]:
    i, j = joint
    return game.r1[i][j], game.r2[i][j]


def loss_of(reward: int) -> int:
    """Map a reward in 0..4 to a loss in 0..4 (``4 - reward``)."""
    if not 0 <= reward <= MAX_REWARD:
        raise ValueError(f"reward {reward} outside 0..{MAX_REWARD}")
    return MAX_REWARD - reward


def parse_matrix(text: str) -> tuple[tuple[int, int], tuple[int, int]]:
    """Parse ``"a,b;c,d"`` into a 2x2 integer matrix."""
    rows = [r.strip() for r in text.split(";")]
    if len(rows) != 2:
        raise ValueError(f"matrix {text!r} must have two rows separated by ';'")
    out = []
    for r in rows:
        cells = [c.strip() for c in r.split(",")]
        if len(cells) != 2:
            raise ValueError(f"matrix row {r!r} must have two entries")
        out.append(tuple(int(c) for c in cells))
    return (out[0], out[1])


def format_matrix(m) -> str:
    return ";".join(",".join(str(v) for v in row) for row in m)
