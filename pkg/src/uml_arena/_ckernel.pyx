# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled expectimin kernel.  Mirrors ``_pykernel`` operation for operation."""

DEF MAX_SUPPORT = 64


cdef struct Tree:
    long c[8]
    int known[4]
    double L[4]
    double S[MAX_SUPPORT]
    int nS
    long long nodes


cdef double _branch(Tree* T, double loss, int base, double p0, double p1, int depth) noexcept nogil:
    cdef double w0, w1, m0, m1, v
    T.c[base] += 1
    w0 = _node(T, 0, depth - 1, &w1)
    m0 = w0 if w0 <= w1 else w1
    T.c[base] -= 1
    T.c[base + 1] += 1
    w0 = _node(T, 1, depth - 1, &w1)
    m1 = w0 if w0 <= w1 else w1
    T.c[base + 1] -= 1
    v = loss
    v += p0 * m0
    v += p1 * m1
    return v


cdef double _node(Tree* T, int s, int depth, double* v1_out) noexcept nogil:
    cdef int a, idx, base, k
    cdef long n0, n1
    cdef double den, p0, p1, tot
    cdef double out[2]
    T.nodes += 1
    for a in range(2):
        idx = 2 * a + s
        if depth == 1:
            if T.known[idx]:
                out[a] = T.L[idx]
            else:
                tot = 0.0
                for k in range(T.nS):
                    tot += T.S[k]
                out[a] = tot / T.nS
            continue
        base = 4 * a + 2 * s
        n0 = T.c[base]
        n1 = T.c[base + 1]
        den = <double>(n0 + n1 + 2)
        p0 = (n0 + 1) / den
        p1 = (n1 + 1) / den
        if T.known[idx]:
            out[a] = _branch(T, T.L[idx], base, p0, p1, depth)
        else:
            T.known[idx] = 1
            tot = 0.0
            for k in range(T.nS):
                T.L[idx] = T.S[k]
                tot += _branch(T, T.S[k], base, p0, p1, depth)
            T.known[idx] = 0
            T.L[idx] = 0.0
            out[a] = tot / T.nS
    v1_out[0] = out[1]
    return out[0]


def expectimin_values(int s0, cells, entries, support, int d):
    """Return ``(v0, v1, nodes)``; see ``_pykernel.expectimin_values``."""
    cdef Tree T
    cdef double v0, v1
    cdef int i
    if d < 1:
        raise ValueError(f"depth must be >= 1, got {d}")
    if len(cells) != 8 or len(entries) != 4 or not support:
        raise ValueError("expected 8 counts, 4 entries and a nonempty support")
    if len(support) > MAX_SUPPORT:
        raise ValueError(f"loss support larger than {MAX_SUPPORT}")
    for i in range(8):
        T.c[i] = cells[i]
    for i in range(4):
        if entries[i] is None:
            T.known[i] = 0
            T.L[i] = 0.0
        else:
            T.known[i] = 1
            T.L[i] = entries[i]
    T.nS = len(support)
    for i in range(T.nS):
        T.S[i] = support[i]
    T.nodes = 0
    with nogil:
        v0 = _node(&T, s0, d, &v1)
    return v0, v1, T.nodes
