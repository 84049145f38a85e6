"""Exact linear algebra over the rationals and the integers.

Matrices are tuples (or lists) of rows; entries are ints or Fractions.
"""
from fractions import Fraction
from math import gcd


def frac_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m):
    return tuple(zip(*m)) if m else ()


def matmul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(m, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vecmat(v, m):
    # row vector times matrix
    n = len(m[0]) if m else 0
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(n))


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def bilinear(form, u, v):
    return dot(u, matvec(form, v))


def rref(rows, ncols=None):
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
    m = frac_matrix(rows)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows):
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows, ncols):
    """Basis of {x : rows x = 0}."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, piv):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(a, b):
    """One rational solution of a x = b, or None."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(red, piv):
        x[p] = row[n]
    return tuple(x)


def inverse(m):
    n = len(m)
    aug = [list(m[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    red, piv = rref(aug, n)
    if piv != list(range(n)):
        raise ValueError("singular matrix")
    return tuple(tuple(row[n:]) for row in red)


def det(m):
    m = frac_matrix(m)
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def as_int_matrix(m):
    out = []
    for row in m:
        r = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError("matrix is not integral")
            r.append(int(x))
        out.append(tuple(r))
    return tuple(out)


def _lcm(a, b):
    return a * b // gcd(a, b)


def has_integer_solution(a, b):
    """Decide whether a z = b has a solution z in Z^n.

    a, b rational.  Column operations bring a to lower echelon form
    (a unimodular change of the unknowns), after which the system is
    solved by forward substitution.
    """
    rows = len(a)
    if rows == 0:
        return True
    n = len(a[0])
    h = []
    rhs = []
    for row, bi in zip(a, b):
        den = 1
        for x in list(row) + [bi]:
            den = _lcm(den, Fraction(x).denominator)
        h.append([int(Fraction(x) * den) for x in row])
        rhs.append(int(Fraction(bi) * den))

    col = 0
    pivot_rows = []
    for i in range(rows):
        if col == n:
            break
        # gcd-reduce row i over columns col..n-1 into column col
        while True:
            nz = [j for j in range(col, n) if h[i][j] != 0]
            if len(nz) <= 1:
                break
            jmin = min(nz, key=lambda j: abs(h[i][j]))
            for j in nz:
                if j != jmin:
                    q = h[i][j] // h[i][jmin]
                    for r in range(rows):
                        h[r][j] -= q * h[r][jmin]
        nz = [j for j in range(col, n) if h[i][j] != 0]
        if not nz:
            continue
        j = nz[0]
        if j != col:
            for r in range(rows):
                h[r][j], h[r][col] = h[r][col], h[r][j]
        pivot_rows.append(i)
        col += 1

    y = [0] * col
    for k, i in enumerate(pivot_rows):
        s = rhs[i] - sum(h[i][j] * y[j] for j in range(k))
        if s % h[i][k] != 0:
            return False
        y[k] = s // h[i][k]
    for i in range(rows):
        if sum(h[i][j] * y[j] for j in range(col)) != rhs[i]:
            return False
    return True
