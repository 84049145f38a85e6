# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot loops in _pykernels (same signatures)."""

cdef enum:
    MAXR = 16


def mul(tuple t1, tuple m1, tuple t2, tuple m2, int r):
    cdef long a[MAXR * MAXR]
    cdef long b[MAXR * MAXR]
    cdef long u[MAXR]
    cdef long v[MAXR]
    cdef int i, j, k
    cdef long s
    if r > MAXR:
        raise ValueError("rank too large for compiled kernel")
    for i in range(r):
        u[i] = t1[i]
        v[i] = t2[i]
    for i in range(r * r):
        a[i] = m1[i]
        b[i] = m2[i]
    t = []
    for i in range(r):
        s = u[i]
        for k in range(r):
            s += a[i * r + k] * v[k]
        t.append(s)
    m = []
    for i in range(r):
        for j in range(r):
            s = 0
            for k in range(r):
                s += a[i * r + k] * b[k * r + j]
            m.append(s)
    return tuple(t), tuple(m)


def im_length(tuple t, tuple m, tuple roots, tuple p, int r):
    cdef long mp[MAXR]
    cdef long tt[MAXR]
    cdef int i, k, a, n
    cdef long s, lam, neg, total, x
    if r > MAXR:
        raise ValueError("rank too large for compiled kernel")
    for i in range(r):
        tt[i] = t[i]
    for i in range(r):
        s = 0
        for k in range(r):
            s += <long>m[i * r + k] * <long>p[k]
        mp[i] = s
    n = len(roots)
    total = 0
    for a in range(0, n, r):
        lam = 0
        neg = 0
        for k in range(r):
            x = roots[a + k]
            lam += x * tt[k]
            neg += x * mp[k]
        if neg < 0:
            lam -= 1
        total += lam if lam >= 0 else -lam
    return total


def act(tuple t, tuple m, tuple x, int r):
    return tuple([t[i] + sum([m[i * r + k] * x[k] for k in range(r)]) for i in range(r)])
