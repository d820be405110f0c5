import pytest
from hypothesis import given, strategies as st

from uml_arena.games import (
    BUILTIN_GAMES,
    JointAction,
    MatrixGame,
    builtin_game,
    format_matrix,
    loss_of,
    parse_matrix,
    payoff,
)

CELLS = [(i, j) for i in (0, 1) for j in (0, 1)]


def test_stag_hunt_matrices():
    g = builtin_game("stag_hunt")
    assert g.r1 == ((2, 3), (0, 4))
    assert g.r2 == ((2, 0), (3, 4))


def test_matching_pennies_matrices():
    g = builtin_game("matching_pennies")
    assert g.r1 == ((4, 0), (0, 4))
    assert g.r2 == ((0, 4), (4, 0))


def test_prisoners_dilemma_text_matrix():
    g = builtin_game("prisoners_dilemma")
    assert g.r1 == ((1, 4), (0, 3))


def test_unknown_game_lists_valid_names():
    with pytest.raises(KeyError) as exc:
        builtin_game("tic_tac_toe")
    assert "prisoners_dilemma" in str(exc.value)


@pytest.mark.parametrize(
    "name, joint, expected",
    [
        ("prisoners_dilemma", (0, 0), (1, 1)),
        ("chicken", (1, 0), (1, 4)),
        ("stag_hunt", (1, 1), (4, 4)),
    ],
)
def test_payoff_examples(name, joint, expected):
    assert payoff(builtin_game(name), JointAction(*joint)) == expected


@pytest.mark.parametrize("reward, loss", [(4, 0), (0, 4), (3, 1)])
def test_loss_examples(reward, loss):
    assert loss_of(reward) == loss


@pytest.mark.parametrize("bad", [-1, 5, 17])
def test_loss_out_of_range(bad):
    with pytest.raises(ValueError):
        loss_of(bad)


@pytest.mark.parametrize("name", list(BUILTIN_GAMES))
def test_builtin_ranges_and_losses(name):
    g = builtin_game(name)
    for i, j in CELLS:
        ra, rb = payoff(g, JointAction(i, j))
        assert ra in range(5) and rb in range(5)
        assert loss_of(ra) in range(5) and loss_of(rb) in range(5)


@pytest.mark.parametrize("name", ["prisoners_dilemma", "stag_hunt", "chicken"])
def test_transpose_symmetric(name):
    g = builtin_game(name)
    assert all(g.r2[i][j] == g.r1[j][i] for i, j in CELLS)


def test_battle_of_sexes_symmetry():
    g = builtin_game("battle_of_sexes")
    assert all(g.r2[i][j] == g.r1[1 - i][1 - j] for i, j in CELLS)


def test_matching_pennies_zero_sum():
    g = builtin_game("matching_pennies")
    assert all(g.r2[i][j] == 4 - g.r1[i][j] for i, j in CELLS)


def test_entries_out_of_range_rejected():
    with pytest.raises(ValueError):
        MatrixGame("bad", ((0, 5), (1, 1)), ((0, 0), (0, 0)))


@given(st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_matrix_text_round_trip(vals):
    m = ((vals[0], vals[1]), (vals[2], vals[3]))
    assert parse_matrix(format_matrix(m)) == m


@given(st.integers(0, 4), st.integers(0, 4))
def test_loss_strictly_decreasing(a, b):
    if a < b:
        assert loss_of(a) > loss_of(b)
