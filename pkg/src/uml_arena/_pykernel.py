"""Pure-Python expectimin kernel (fallback for the compiled ``_ckernel``).

Both kernels evaluate the tree in the same order with the same double
arithmetic, so values and node counts are bit-identical.
"""


def expectimin_values(s0, cells, entries, support, d):
    """Return ``(v0, v1, nodes)`` for the tree rooted at opponent move ``s0``.

    ``cells``: the 8 transition counts, already including the transition
    into ``s0``.  ``entries``: the 4 loss entries at ``2*y + x``, ``None``
    where unknown.  An unknown entry is averaged over ``support`` the first
    time a path visits it and stays at the drawn value below that point.
    ``nodes`` counts the recursive evaluations.
    """
    if d < 1:
        raise ValueError(f"depth must be >= 1, got {d}")
    if len(cells) != 8 or len(entries) != 4 or not support:
        raise ValueError("expected 8 counts, 4 entries and a nonempty support")
    c = [int(v) for v in cells]
    known = [e is not None for e in entries]
    L = [0.0 if e is None else float(e) for e in entries]
    S = [float(v) for v in support]
    nS = len(S)
    nodes = 0

    def node(s, depth):
        nonlocal nodes
        nodes += 1
        out = [0.0, 0.0]
        for a in (0, 1):
            idx = 2 * a + s
            if depth == 1:
                if known[idx]:
                    out[a] = L[idx]
                else:
                    tot = 0.0
                    for x in S:
                        tot += x
                    out[a] = tot / nS
                continue
            base = 4 * a + 2 * s
            n0 = c[base]
            n1 = c[base + 1]
            den = n0 + n1 + 2
            p0 = (n0 + 1) / den
            p1 = (n1 + 1) / den
            if known[idx]:
                out[a] = branch(L[idx], base, p0, p1, depth)
            else:
                known[idx] = True
                tot = 0.0
                for x in S:
                    L[idx] = x
                    tot += branch(x, base, p0, p1, depth)
                known[idx] = False
                L[idx] = 0.0
                out[a] = tot / nS
        return out

    def branch(loss, base, p0, p1, depth):
        c[base] += 1
        w = node(0, depth - 1)
        m0 = w[0] if w[0] <= w[1] else w[1]
        c[base] -= 1
        c[base + 1] += 1
        w = node(1, depth - 1)
        m1 = w[0] if w[0] <= w[1] else w[1]
        c[base + 1] -= 1
        v = loss
        v += p0 * m0
        v += p1 * m1
        return v

    v0, v1 = node(s0, d)
    return v0, v1, nodes
