"""Slow reference evaluation of the expectimin tree by explicit enumeration.

Nothing here shares code with the planning kernels.  Every path prefix is
materialised as a tuple of ``(action, reply, revealed_loss)`` steps, and the
transition counts and the set of known loss entries are rebuilt from scratch
for each prefix.  Values are then filled in bottom-up, one level at a time.
"""

from __future__ import annotations


def _laplace(cells, y, xp, xn):
    n0 = cells[4 * y + 2 * xp]
    n1 = cells[4 * y + 2 * xp + 1]
    return ((n1 if xn else n0) + 1) / (n0 + n1 + 2)


def _replay(base_cells, entries, s0, prefix):
    cells = list(base_cells)
    known = dict((i, e) for i, e in enumerate(entries) if e is not None)
    prev = s0
    for a, s, v in prefix:
        known.setdefault(2 * a + prev, v)
        cells[4 * a + 2 * prev + s] += 1
        prev = s
    return cells, known, prev


def brute_force_values(s0, base_cells, entries, support, d):
    """Per-action values ``(v0, v1)`` of the depth-``d`` tree rooted at reply ``s0``.

    ``entries[2*y + x]`` is a known loss or None; unknown entries are drawn
    from ``support`` on their first visit along a path.
    """
    support = [float(v) for v in support]
    mean = sum(support) / len(support)

    def expand(prefix):
        _, known, obs = _replay(base_cells, entries, s0, prefix)
        out = []
        for a in (0, 1):
            idx = 2 * a + obs
            draws = [known[idx]] if idx in known else support
            for v in draws:
                for s in (0, 1):
                    out.append(prefix + ((a, s, float(v)),))
        return out

    levels = [[()]]
    for _ in range(d - 1):
        levels.append([p for q in levels[-1] for p in expand(q)])

    child_min: dict = {}
    for k in range(d - 1, -1, -1):
        values = {}
        for prefix in levels[k]:
            cells, known, obs = _replay(base_cells, entries, s0, prefix)
            pair = []
            for a in (0, 1):
                idx = 2 * a + obs
                if k == d - 1:
                    pair.append(float(known[idx]) if idx in known else mean)
                    continue
                draws = [float(known[idx])] if idx in known else support
                total = 0.0
                for v in draws:
                    total += v + sum(
                        _laplace(cells, a, obs, s) * child_min[prefix + ((a, s, v),)] for s in (0, 1)
                    )
                pair.append(total / len(draws))
            values[prefix] = pair
        child_min = {p: min(v) for p, v in values.items()}
        if k == 0:
            return tuple(values[()])


def brute_force_decision(cells, entries, support, d, last_joint=None):
    """Root decision mixed over the unknown current reply.

    Returns ``(V0, V1, argmin)`` with ties going to action 0.
    """
    if last_joint is None:
        probs = {0: 0.5, 1: 0.5}
        rooted = {0: list(cells), 1: list(cells)}
    else:
        y, x = last_joint
        probs = {s: _laplace(cells, y, x, s) for s in (0, 1)}
        rooted = {}
        for s in (0, 1):
            c = list(cells)
            c[4 * y + 2 * x + s] += 1
            rooted[s] = c
    V = [0.0, 0.0]
    for s in (0, 1):
        v = brute_force_values(s, rooted[s], entries, support, d)
        for a in (0, 1):
            V[a] += probs[s] * v[a]
    return V[0], V[1], 0 if V[0] <= V[1] else 1
