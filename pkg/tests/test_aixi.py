import pytest
from hypothesis import given, settings, strategies as st

from uml_arena import kernel
from uml_arena._pykernel import expectimin_values as py_values
from uml_arena.aixi import (
    AixiPlayer,
    AixiState,
    AlmostConsistent,
    Fixed,
    Moving,
    aixi_act,
    aixi_observe,
    decision_values,
    expectimin_values,
    horizon_depth,
)
from uml_arena.arena import play
from uml_arena.bayes import InconsistentLossError, LossMatrixBelief, TransitionCounts, known_belief
from uml_arena.games import MatrixGame

from oracles import brute_force_decision

PD_LOSS = ((3, 0), (4, 1))
TFT = TransitionCounts((20, 0, 20, 0, 0, 20, 0, 20))


def state(counts=TransitionCounts(), d=8, last=None, belief=None):
    return AixiState(Fixed(d), counts, belief or known_belief(PD_LOSS), t=2 if last else 1, last_joint=last)


@pytest.mark.parametrize("t, d", [(1, 8), (2, 7), (7, 2), (8, 8), (15, 8), (14, 2)])
def test_consistent_cycle(t, d):
    assert horizon_depth(AlmostConsistent(), t) == d


def test_constant_horizons():
    assert horizon_depth(Moving(8), 999) == 8
    assert horizon_depth(Fixed(5), 3) == 5


@pytest.mark.parametrize("bad", [lambda: Fixed(0), lambda: Moving(-1), lambda: AlmostConsistent(3, 4), lambda: AlmostConsistent(8, 1)])
def test_horizon_validation(bad):
    with pytest.raises(ValueError):
        bad()


def test_wrapper_examples():
    assert expectimin_values(0, TransitionCounts(), known_belief(PD_LOSS), 1) == (3.0, 4.0)
    assert expectimin_values(1, TransitionCounts(), LossMatrixBelief(), 1) == (-1.0, -1.0)


def test_first_step_unknown_ties_to_defect():
    s = AixiState(AlmostConsistent(), belief=LossMatrixBelief())
    V0, V1, _ = decision_values(s)
    assert V0 == V1
    assert aixi_act(s) == 0


@pytest.mark.parametrize("d", range(1, 9))
@pytest.mark.parametrize("last", [None, (1, 1)])
def test_uniform_counts_defect(d, last):
    assert aixi_act(state(d=d, last=last)) == 0


def test_frozen_uniform_depth8():
    V0, V1, _ = decision_values(state(d=8))
    assert (V0, V1) == pytest.approx((11.852943121693121, 12.901306216931218), abs=1e-9)


@pytest.mark.parametrize(
    "last, V0, V1",
    [
        ((1, 1), 9.804398048027265, 8.05650047446149),
        ((0, 0), 12.537351913149145, 10.799595465678069),
        ((1, 0), 9.804398048027267, 8.068045182379237),
        ((0, 1), 12.525989637450841, 10.799595465678069),
    ],
)
def test_frozen_tft_depth8_cooperates(last, V0, V1):
    v0, v1, _ = decision_values(state(TFT, 8, last))
    assert (v0, v1) == pytest.approx((V0, V1), abs=1e-9)
    assert aixi_act(state(TFT, 8, last)) == 1


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("last", [None, (0, 1), (1, 1)])
def test_decision_matches_enumerator_with_unknowns(d, last):
    belief = LossMatrixBelief(entries=(3, None, None, 1))
    V0, V1, _ = decision_values(state(TFT, d, last, belief))
    flat = [3, None, None, 1]
    R0, R1, _ = brute_force_decision(TFT.cells, flat, belief.support, d, last)
    assert V0 == pytest.approx(R0, abs=1e-12) and V1 == pytest.approx(R1, abs=1e-12)


@pytest.mark.parametrize("d", range(1, 9))
def test_tree_cost_bound(d):
    *_, nodes = decision_values(state(TFT, d, (1, 1)))
    per_root = sum(4**k for k in range(d))
    assert nodes == 2 * per_root


def test_backends_agree_on_decision():
    s = AixiState(Fixed(5), TFT, LossMatrixBelief(entries=(3, None, 4, None)), t=3, last_joint=(1, 0))
    assert decision_values(s, py_values) == decision_values(s, kernel.expectimin_values)


def test_observe_first_step_leaves_counts():
    s = aixi_observe(AixiState(), (1, 0), 4)
    assert s.counts.total == 0 and s.belief.entries[2] == 4 and s.t == 2


def test_observe_second_step_one_cell():
    s = aixi_observe(aixi_observe(AixiState(), (1, 0), 4), (0, 1), 0)
    assert s.counts.total == 1 and s.counts[1, 0, 1] == 1


def test_observe_contradiction():
    s = aixi_observe(AixiState(), (1, 0), 4)
    with pytest.raises(InconsistentLossError):
        aixi_observe(s, (1, 0), 3)


@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), max_size=20))
def test_counts_total_invariant(history):
    L = ((3, 0), (4, 1))
    s = AixiState()
    for y, x in history:
        s = aixi_observe(s, (y, x), L[y][x])
        assert s.counts.total == max(s.t - 2, 0)


def test_act_is_pure():
    s = state(TFT, 6, (1, 1))
    assert aixi_act(s) == aixi_act(s)


rewards = st.lists(st.integers(0, 4), min_size=4, max_size=4)


@settings(max_examples=15, deadline=None)
@given(rewards, st.integers(2, 4))
def test_symmetry_lock_transpose_games(r, d):
    r1 = ((r[0], r[1]), (r[2], r[3]))
    r2 = tuple(tuple(r1[j][i] for j in (0, 1)) for i in (0, 1))
    game = MatrixGame("sym", r1, r2)
    s = play(game, AixiPlayer(AlmostConsistent(d)), AixiPlayer(AlmostConsistent(d)), 12)
    assert (s.actions[:, 0] == s.actions[:, 1]).all()
