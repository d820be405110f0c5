"""Oracles for frozen values: the enumerator from ``uml_arena.reference``
plus an exact rational version of the Laplace predictor."""

from fractions import Fraction

from uml_arena.reference import brute_force_decision, brute_force_values

__all__ = ["brute_force_decision", "brute_force_values", "laplace_exact"]


def laplace_exact(cells, y, xp, xn):
    n0 = cells[4 * y + 2 * xp]
    n1 = cells[4 * y + 2 * xp + 1]
    return Fraction((n1 if xn else n0) + 1, n0 + n1 + 2)
