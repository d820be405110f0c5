import csv
import re

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uml_arena.arena import MatchConfig, ScriptedSpec, TimeSeries, aggregate_runs, metric_grid, run_match
from uml_arena.cli import emit_csv, main
from uml_arena.config import PLAYER_IDS, ConfigError, RunConfig, parse_config, serialize
from uml_arena.games import BUILTIN_GAMES, builtin_game


def test_aixi_defaults():
    cfg = parse_config("game=prisoners_dilemma\nrow=aixi\ncol=tft1")
    assert (cfg.steps, cfg.runs) == (100, 1)
    m = cfg.match_config()
    assert (m.steps, m.runs) == (100, 1)


def test_foe_defaults():
    cfg = parse_config("game=prisoners_dilemma\nrow=foe\ncol=tft3")
    assert (cfg.steps, cfg.runs) == (20000, 10)


@pytest.mark.parametrize(
    "text, line",
    [
        ("game=pong", 1),
        ("game=stag_hunt\nrow=aixi\ncolour=tft1", 3),
        ("# c\ngame=stag_hunt\nrow=aixi\ncol=tft1\nsteps=ten", 5),
        ("game=stag_hunt\nrow=aixi\ncol=tft9", 3),
        ("game=stag_hunt\nrow=aixi\nrow=foe", 3),
        ("game=stag_hunt\nr1=1,2;3,4", 2),
        ("game=custom\nr1=1,2;3,5\nr2=0,0;0,0\nrow=foe\ncol=foe", 2),
        ("game=stag_hunt\nrow=foe\ncol=foe\nprior=0.5,0.5", 4),
        ("game=stag_hunt\nrow=aixi\ncol=tft1\ndepth=1", 4),
        ("just words", 1),
    ],
)
def test_errors_carry_line(text, line):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_missing_required_key():
    with pytest.raises(ConfigError, match="col"):
        parse_config("game=chicken\nrow=aixi")


def test_comments_quotes_and_custom_game():
    cfg = parse_config('game = custom  # own game\nr1 = "1,2;3,4"\nr2="4,3;2,1"\nrow=aixi\ncol=foe\ndepth_b=9')
    g = cfg.matrix_game()
    assert g.r1 == ((1, 2), (3, 4)) and g.r2 == ((4, 3), (2, 1))
    assert cfg.horizon(0).d_max == 8 and cfg.horizon(1).d_max == 9


weights = st.lists(st.floats(0.001, 0.06), min_size=16, max_size=16).map(tuple)
matrix = st.tuples(st.tuples(st.integers(0, 4), st.integers(0, 4)), st.tuples(st.integers(0, 4), st.integers(0, 4)))


@st.composite
def run_configs(draw):
    custom = draw(st.booleans())
    return RunConfig(
        game="custom" if custom else draw(st.sampled_from(list(BUILTIN_GAMES))),
        row=draw(st.sampled_from(PLAYER_IDS)),
        col=draw(st.sampled_from(PLAYER_IDS)),
        steps=draw(st.integers(1, 10**6)),
        runs=draw(st.integers(1, 50)),
        seed=draw(st.integers(0, 2**64 - 1)),
        r1=draw(matrix) if custom else None,
        r2=draw(matrix) if custom else None,
        variant=draw(st.sampled_from(["fixed", "moving", "consistent"])),
        depth=draw(st.integers(2, 12)),
        depth_b=draw(st.none() | st.integers(2, 12)),
        loss_support=tuple(draw(st.lists(st.integers(-20, 20), min_size=1, max_size=8))),
        foe_variant=draw(st.sampled_from(["basic", "faster"])),
        mc_samples=draw(st.integers(1, 5000)),
        block_schedule=draw(st.sampled_from(["theorem", "theorem16", "sim024"])),
        prior=draw(st.none() | weights),
        prior_sign=draw(st.sampled_from(["paper", "penalty"])),
        out=draw(st.none() | st.from_regex(r"[a-z][a-z0-9_/]{0,12}", fullmatch=True)),
    )


@settings(max_examples=200)
@given(run_configs())
def test_round_trip(cfg):
    assert parse_config(serialize(cfg)) == cfg


def scripted_series(T, runs, seed=0):
    cfg = MatchConfig(builtin_game("chicken"), ScriptedSpec("random"), ScriptedSpec("stubborn3"), T, runs, seed)
    return run_match(cfg)


def test_series_csv_lines(tmp_path):
    p = emit_csv(scripted_series(2, 1), tmp_path / "s.csv")
    text = p.read_text()
    assert text.endswith("\n") and len(text.splitlines()) == 3
    assert text.splitlines()[0] == "run,t,action_row,action_col,reward_row,reward_col"


def test_aggregate_csv_lines(tmp_path):
    series = scripted_series(5000, 10)
    grid = metric_grid(5000)
    mean, std = aggregate_runs(series, "reward_row", grid)
    p = emit_csv((grid, mean, std), tmp_path / "a.csv")
    rows = list(csv.reader(p.open()))
    assert len(rows) == 501 and rows[0] == ["t", "metric_mean", "metric_std"]
    assert all(re.fullmatch(r"-?\d+(\.\d+)?", v) for r in rows[1:] for v in r)
    assert np.allclose([float(r[1]) for r in rows[1:]], mean, atol=1e-11)


def test_csv_byte_identical(tmp_path):
    a = emit_csv(scripted_series(300, 3, seed=4), tmp_path / "a.csv").read_bytes()
    b = emit_csv(scripted_series(300, 3, seed=4), tmp_path / "b.csv").read_bytes()
    assert a == b


def test_csv_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="cannot write"):
        emit_csv(scripted_series(2, 1), blocker / "sub" / "s.csv")


def test_list_games(capsys):
    assert main(["list-games"]) == 0
    assert capsys.readouterr().out.split() == list(BUILTIN_GAMES)


def test_list_opponents(capsys):
    assert main(["list-opponents"]) == 0
    assert len(capsys.readouterr().out.split()) == 8


def test_run_missing_config(tmp_path):
    assert main(["run", str(tmp_path / "missing.cfg")]) == 1


def test_bad_flag_is_config_error():
    with pytest.raises(SystemExit) as exc:
        main(["run", "x.cfg", "--seed", "-1"])
    assert exc.value.code == 1


def test_run_writes_outputs(tmp_path, capsys):
    cfg = tmp_path / "m.cfg"
    cfg.write_text("game=prisoners_dilemma\nrow=aixi\ncol=tft1\ndepth=4\n")
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out", str(out), "--steps", "12", "--seed", "3"]) == 0
    assert len((out / "series.csv").read_text().splitlines()) == 13
    for name in ("coop_row", "coop_col", "reward_row", "reward_col"):
        assert len((out / f"{name}.csv").read_text().splitlines()) == 13
    assert "T=12" in capsys.readouterr().out


def test_runtime_error_exit(tmp_path, monkeypatch):
    import uml_arena.cli as cli

    def boom(cfg, out):
        raise RuntimeError("kaput")

    monkeypatch.setattr(cli, "execute", boom)
    cfg = tmp_path / "m.cfg"
    cfg.write_text("game=chicken\nrow=tft1\ncol=tft1\n")
    assert main(["run", str(cfg)]) == 2


def test_sweep(tmp_path, monkeypatch):
    d = tmp_path / "cfgs"
    d.mkdir()
    (d / "a.cfg").write_text("game=chicken\nrow=tft1\ncol=alt0\nsteps=10\n")
    (d / "b.cfg").write_text("game=stag_hunt\nrow=random\ncol=tft2\nsteps=20\nruns=2\n")
    monkeypatch.setenv("UML_ARENA_THREADS", "2")
    assert main(["sweep", str(d), "--out", str(tmp_path / "o")]) == 0
    assert len((tmp_path / "o" / "b" / "series.csv").read_text().splitlines()) == 41
    monkeypatch.setenv("UML_ARENA_THREADS", "0")
    assert main(["sweep", str(d), "--out", str(tmp_path / "o")]) == 1
    assert main(["sweep", str(tmp_path / "nowhere")]) == 1


def test_selftest_subset(capsys):
    assert main(["selftest", "--only", "1", "--only", "2"]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 2


def test_selftest_failure_exit(monkeypatch):
    import uml_arena.acceptance as acc

    monkeypatch.setattr(acc, "CRITERIA", ((1, "always fails", lambda: (False, "forced"), None, True),))
    assert main(["selftest"]) == 3


@pytest.mark.slow
def test_selftest_full():
    assert main(["selftest"]) == 0
