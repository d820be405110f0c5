"""Compare the compiled and pure-Python expectimin kernels.

    python3 bench/benchmark.py [--depths 4 6 8] [--repeat 3]

Reports the best-of-``repeat`` time per call for known and unknown loss
entries, the speedup, and one full 100-step match per backend.
"""

import argparse
import time

from uml_arena import kernel
from uml_arena._pykernel import expectimin_values as py_values
from uml_arena.aixi import AixiPlayer, AlmostConsistent
from uml_arena.arena import play
from uml_arena.bayes import DEFAULT_SUPPORT
from uml_arena.games import builtin_game
from uml_arena.opponents import ScriptedPlayer, TitForTat

TFT = [20, 0, 20, 0, 0, 20, 0, 20]
CASES = {"known": [3, 0, 4, 1], "two unknown": [3, None, 4, None]}


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def match_time(backend, steps=100):
    game = builtin_game("prisoners_dilemma")
    t = time.perf_counter()
    play(game, AixiPlayer(AlmostConsistent(8), backend=backend), ScriptedPlayer(TitForTat(1)), steps)
    return time.perf_counter() - t


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--depths", type=int, nargs="+", default=[4, 6, 8])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--no-match", action="store_true", help="skip the full-match timing")
    args = ap.parse_args()

    c_values = kernel.c_expectimin_values
    if c_values is None:
        print("compiled kernel unavailable; timing the Python kernel only")
    print(f"{'case':<12} {'d':>2} {'nodes':>9} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, entries in CASES.items():
        for d in args.depths:
            tp, (*_, nodes) = best_time(lambda: py_values(1, TFT, entries, DEFAULT_SUPPORT, d), args.repeat)
            if c_values is None:
                print(f"{name:<12} {d:>2} {nodes:>9} {tp:>10.4f} {'-':>10} {'-':>8}")
                continue
            tc, c_out = best_time(lambda: c_values(1, TFT, entries, DEFAULT_SUPPORT, d), args.repeat)
            assert c_out == py_values(1, TFT, entries, DEFAULT_SUPPORT, d), "backends disagree"
            print(f"{name:<12} {d:>2} {nodes:>9} {tp:>10.4f} {tc:>10.6f} {tp / tc:>7.0f}x")
    if not args.no_match:
        print()
        print("100-step match, AIXI (consistent horizon from d=8) vs tit-for-tat:")
        if c_values is not None:
            print(f"  cython  {match_time(c_values):8.2f} s")
        print(f"  python  {match_time(py_values):8.2f} s")


if __name__ == "__main__":
    main()
