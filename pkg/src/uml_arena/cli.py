"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 runtime error, 3 selftest failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .arena import METRICS, MatchError, TimeSeries, aggregate_runs, metric_grid, run_match
from .config import ConfigError, RunConfig, load_config, with_overrides
from .games import BUILTIN_GAMES
from .opponents import OPPONENT_IDS

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_SELFTEST = 0, 1, 2, 3
DEFAULT_OUT = "uml_arena_out"
SERIES_HEADER = ("run", "t", "action_row", "action_col", "reward_row", "reward_col")
AGGREGATE_HEADER = ("t", "metric_mean", "metric_std")

log = logging.getLogger("uml_arena")


def _num(x) -> str:
    # plain decimal, never exponent notation
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    s = f"{float(x):.12f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def _write_rows(path, header, rows):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="ascii") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def emit_series_csv(series_list: Sequence[TimeSeries], path):
    """Raw per-step records of every run, one line per (run, t)."""

    def rows():
        for s in series_list:
            for t in range(len(s)):
                a, b = s.actions[t]
                ra, rb = s.rewards[t]
                yield (s.run, t + 1, int(a), int(b), int(ra), int(rb))

    return _write_rows(path, SERIES_HEADER, rows())


def emit_aggregate_csv(grid, mean, std, path):
    rows = ((_num(t), _num(m), _num(s)) for t, m, s in zip(grid, mean, std))
    return _write_rows(path, AGGREGATE_HEADER, rows)


def emit_csv(results, path):
    """Write raw series (a list of TimeSeries) or an aggregate ``(grid, mean, std)``."""
    if isinstance(results, tuple) and len(results) == 3:
        return emit_aggregate_csv(*results, path)
    return emit_series_csv(results, path)


def execute(cfg: RunConfig, out_dir) -> list[str]:
    """Run one configured match, write its CSV files and return summary lines."""
    series = run_match(cfg.match_config())
    out = Path(out_dir)
    emit_series_csv(series, out / "series.csv")
    grid = metric_grid(cfg.steps)
    for name in METRICS:
        mean, std = aggregate_runs(series, name, grid)
        emit_aggregate_csv(grid, mean, std, out / f"{name}.csv")
    T = cfg.steps
    lines = [f"{cfg.game}: {cfg.row} vs {cfg.col}, T={T}, runs={cfg.runs}, seed={cfg.seed}"]
    for name in METRICS:
        mean, std = aggregate_runs(series, name, [T])
        lines.append(f"  {name} at t={T}: {mean[0]:.4f} +- {std[0]:.4f}")
    lines.append(f"  written to {out}")
    return lines


def _thread_cap() -> int:
    raw = os.environ.get("UML_ARENA_THREADS")
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"UML_ARENA_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"UML_ARENA_THREADS must be a positive integer, got {raw!r}")
    return n


def _overrides(args) -> dict:
    return dict(seed=args.seed, runs=args.runs, steps=args.steps)


def _load(path, args) -> RunConfig:
    cfg = with_overrides(load_config(path), **_overrides(args))
    try:
        cfg.match_config()
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def cmd_run(args) -> int:
    cfg = _load(args.config, args)
    out = args.out or cfg.out or DEFAULT_OUT
    for line in execute(cfg, out):
        print(line)
    return EXIT_OK


def _sweep_job(job):
    cfg, out = job
    return execute(cfg, out)


def cmd_sweep(args) -> int:
    root = Path(args.config_dir)
    if not root.is_dir():
        raise ConfigError(f"config directory {root} does not exist")
    paths = sorted(root.glob("*.cfg"))
    if not paths:
        raise ConfigError(f"no *.cfg files in {root}")
    base = Path(args.out or DEFAULT_OUT)
    jobs = []
    for p in paths:
        try:
            jobs.append((_load(p, args), base / p.stem))
        except ConfigError as exc:
            raise ConfigError(f"{p}: {exc}") from None
    workers = min(_thread_cap(), len(jobs))
    log.info("sweeping %d configs with %d worker(s)", len(jobs), workers)
    if workers == 1:
        results = [_sweep_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_job, jobs))
    for lines in results:
        for line in lines:
            print(line)
    return EXIT_OK


def cmd_list_games(args) -> int:
    for name in BUILTIN_GAMES:
        print(name)
    return EXIT_OK


def cmd_list_opponents(args) -> int:
    for name in OPPONENT_IDS:
        print(name)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all(args.only, echo=lambda line: print(line, flush=True))
    failed = [r for r in results if r.gating and not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria ok" + (f", {len(failed)} failed" if failed else ""))
    return EXIT_SELFTEST if failed else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, help="master seed (unsigned 64-bit)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--runs", type=_positive, help="number of runs")
    common.add_argument("--steps", type=_positive, help="elementary steps per run")

    p = _Parser(prog="uml-arena", description="Repeated 2x2 matrix games between learning agents.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    r = sub.add_parser("run", parents=[common], help="run one configured match")
    r.add_argument("config")
    r.set_defaults(func=cmd_run)
    s = sub.add_parser("sweep", parents=[common], help="run every *.cfg in a directory")
    s.add_argument("config_dir")
    s.set_defaults(func=cmd_sweep)
    sub.add_parser("list-games", help="print built-in game names").set_defaults(func=cmd_list_games)
    sub.add_parser("list-opponents", help="print scripted opponent names").set_defaults(func=cmd_list_opponents)
    st = sub.add_parser("selftest", help="run the acceptance checks")
    st.add_argument("--only", type=int, action="append", metavar="N", help="run only criterion N (repeatable)")
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (MatchError, OSError, RuntimeError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
