from fractions import Fraction

from hypothesis import given, strategies as st

from alcove_pieces import linalg

small = st.integers(-5, 5)


def matrices(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


@given(matrices(3))
def test_inverse_and_det(m):
    d = linalg.det(m)
    if d == 0:
        assert linalg.rank(m) < 3
        return
    inv = linalg.inverse(m)
    assert linalg.matmul(m, inv) == linalg.identity(3)
    assert linalg.det(inv) == Fraction(1) / d


@given(matrices(3), st.lists(small, min_size=3, max_size=3))
def test_solve_and_nullspace(m, b):
    x = linalg.solve(m, b)
    if x is not None:
        assert tuple(linalg.matvec(m, x)) == tuple(Fraction(v) for v in b)
    for v in linalg.nullspace(m, 3):
        assert not any(linalg.matvec(m, v))
    assert len(linalg.nullspace(m, 3)) == 3 - linalg.rank(m)


@given(st.lists(st.lists(small, min_size=2, max_size=2), min_size=1, max_size=3),
       st.lists(small, min_size=2, max_size=2))
def test_integer_solvability_matches_search(cols, x):
    # a has the columns given; b = a x is always solvable, b + small shift is checked by search
    a = [[c[i] for c in cols] for i in range(2)]
    b = linalg.matvec(a, x[:len(cols)] + [0] * (len(cols) - len(x)))
    assert linalg.has_integer_solution(a, b)
    b2 = [b[0] + 1, b[1]]
    found = any(list(linalg.matvec(a, list(y))) == b2
                for y in _box(len(cols), 12))
    if found:
        assert linalg.has_integer_solution(a, b2)


def _box(n, r):
    if n == 0:
        yield ()
        return
    for t in _box(n - 1, r):
        for v in range(-r, r + 1):
            yield t + (v,)
