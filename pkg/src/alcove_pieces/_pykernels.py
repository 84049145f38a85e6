"""Pure-Python versions of the hot loops.  Matrices are row-major flat tuples."""


def mul(t1, m1, t2, m2, r):
    """(t_1 w_1)(t_2 w_2) = t_{t_1 + w_1 t_2} w_1 w_2."""
    t = tuple(t1[i] + sum(m1[i * r + k] * t2[k] for k in range(r)) for i in range(r))
    m = tuple(sum(m1[i * r + k] * m2[k * r + j] for k in range(r))
              for i in range(r) for j in range(r))
    return t, m


def im_length(t, m, roots, p, r):
    """Iwahori-Matsumoto length of t_lambda w.

    roots is the flat tuple of positive roots (covectors), p = 2 rho^vee.
    """
    mp = [sum(m[i * r + k] * p[k] for k in range(r)) for i in range(r)]
    total = 0
    for a in range(0, len(roots), r):
        lam = 0
        neg = 0
        for k in range(r):
            lam += roots[a + k] * t[k]
            neg += roots[a + k] * mp[k]
        if neg < 0:
            lam -= 1
        total += lam if lam >= 0 else -lam
    return total


def act(t, m, x, r):
    return tuple(t[i] + sum(m[i * r + k] * x[k] for k in range(r)) for i in range(r))
