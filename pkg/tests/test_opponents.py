import numpy as np
import pytest
from hypothesis import given, strategies as st

from uml_arena.games import builtin_game
from uml_arena.opponents import (
    Alternating,
    OpponentState,
    Stubborn,
    TitForTat,
    UniformRandom,
    opponent_act,
    opponent_observe,
    resolve_opponent,
    stubborn_for,
)


def play_against(spec, adversary_moves, rng=None):
    """Actions of ``spec`` at each step while the adversary plays ``adversary_moves``."""
    state = OpponentState()
    out = []
    for x in adversary_moves:
        a, state = opponent_act(spec, state, rng)
        out.append(a)
        state = opponent_observe(spec, state, a, x)
    return out


def test_tft1_cooperates_first():
    assert opponent_act(TitForTat(1), OpponentState())[0] == 1


def test_tft2_defects_first():
    assert opponent_act(TitForTat(2), OpponentState())[0] == 0


def test_tft3_after_three_cooperations():
    assert play_against(TitForTat(3), [0, 1, 1, 1, 0])[4] == 1


def test_tft3_needs_a_full_run():
    assert play_against(TitForTat(3), [1, 1, 0, 1, 1, 0])[5] == 0


def test_stubborn_chicken_yields_after_three_defections():
    spec = stubborn_for(builtin_game("chicken"), 1, 3)
    assert spec == Stubborn(3, yield_action=1, trigger_action=0)
    acts = play_against(spec, [0, 0, 0, 0, 1, 0])
    assert acts == [0, 0, 0, 1, 1, 0]


def test_stubborn_battle_of_sexes():
    # column player prefers (0, 0); it gives in once the row player insisted on 1 three times
    spec = stubborn_for(builtin_game("battle_of_sexes"), 1, 3)
    assert spec.yield_action == 1 and spec.trigger_action == 1
    assert play_against(spec, [1, 1, 1, 1]) == [0, 0, 0, 1]


def test_alternating_parity():
    assert play_against(Alternating(0), [0, 0, 0]) == [0, 1, 0]
    assert play_against(Alternating(1), [1, 1]) == [1, 0]


def test_observe_run_counter():
    s = OpponentState(run=1, step=1)
    assert opponent_observe(TitForTat(2), s, 0, 1).run == 2
    assert opponent_observe(TitForTat(2), s, 0, 0).run == 0


def test_uniform_random_frequency():
    rng = np.random.default_rng(5)
    acts = play_against(UniformRandom(), [0] * 100_000, rng)
    assert abs(np.mean(acts) - 0.5) <= 0.01


@pytest.mark.parametrize("ident", ["tft4", "pong", "stubborn1"])
def test_unknown_opponent(ident):
    with pytest.raises(KeyError):
        resolve_opponent(ident, builtin_game("chicken"), 0)


@pytest.mark.parametrize("k", [0, 4])
def test_tft_k_range(k):
    with pytest.raises(ValueError):
        TitForTat(k)


def test_tft1_copies_constant_cooperate():
    assert play_against(TitForTat(1), [1] * 50)[1:] == [1] * 49


@given(st.integers(1, 3), st.lists(st.integers(0, 1), max_size=40))
def test_tft_deterministic_and_run_rule(k, hist):
    a1 = play_against(TitForTat(k), hist)
    assert a1 == play_against(TitForTat(k), hist)
    for t in range(1, len(hist)):
        window = hist[max(0, t - k):t]
        coop = len(window) == k and all(window) if k > 1 else hist[t - 1] == 1
        assert a1[t] == int(coop)


@given(st.integers(1, 4), st.integers(0, 1), st.lists(st.integers(0, 1), max_size=40))
def test_stubborn_never_yields_without_run(k, a, hist):
    # break every run of the trigger action before it reaches length k
    run, cleaned = 0, []
    for x in hist:
        if x == a and run == k - 1:
            x = 1 - a
        run = run + 1 if x == a else 0
        cleaned.append(x)
    assert a not in play_against(Stubborn(k, a), cleaned)


@given(st.lists(st.integers(0, 1), max_size=30))
def test_counter_bounded_by_step(hist):
    state = OpponentState()
    for x in hist:
        a, state = opponent_act(TitForTat(2), state)
        state = opponent_observe(TitForTat(2), state, a, x)
        assert state.run <= state.step
