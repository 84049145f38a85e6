"""Compare the compiled and pure-Python kernels.

Micro timings call both kernel modules directly on the same inputs; the
end-to-end timing runs an enumeration in a subprocess per backend.
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from alcove_pieces import _pykernels
from alcove_pieces.affine_weyl import affine_weyl_group

try:
    from alcove_pieces import _kernels
except ImportError:
    _kernels = None

END_TO_END = (
    "import time;"
    "from alcove_pieces.affine_weyl import affine_weyl_group;"
    "from alcove_pieces.kernels import BACKEND;"
    "G = affine_weyl_group('{spec}');"
    "t = time.perf_counter();"
    "n = len(G.elements_up_to({L}));"
    "print(BACKEND, n, time.perf_counter() - t)"
)


def inputs(spec, count, seed):
    G = affine_weyl_group(spec)
    rng = random.Random(seed)
    elems = G.elements_up_to(6)
    pairs = [(rng.choice(elems), rng.choice(elems)) for _ in range(count)]
    return G, pairs


def micro(mod, G, pairs, number):
    r = G.rank
    roots, p = G._roots_flat, G._p

    def run_mul():
        for a, b in pairs:
            mod.mul(a.translation, a.finite, b.translation, b.finite, r)

    def run_len():
        for a, _ in pairs:
            mod.im_length(a.translation, a.finite, roots, p, r)

    return (min(timeit.repeat(run_mul, number=number, repeat=3)),
            min(timeit.repeat(run_len, number=number, repeat=3)))


def end_to_end(spec, L, pure):
    env = dict(os.environ)
    env.pop("ALCOVE_PIECES_PURE", None)
    if pure:
        env["ALCOVE_PIECES_PURE"] = "1"
    out = subprocess.run([sys.executable, "-c", END_TO_END.format(spec=spec, L=L)],
                         env=env, capture_output=True, text=True, check=True)
    backend, n, secs = out.stdout.split()
    return backend, int(n), float(secs)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--types", default="A2:sc,C2:sc,G2:sc")
    ap.add_argument("--pairs", type=int, default=2000)
    ap.add_argument("--number", type=int, default=5)
    ap.add_argument("--L", type=int, default=24)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled kernel not available; only the Python fallback is timed")
    print(f"{'type':8} {'kernel':8} {'mul':>10} {'length':>10}")
    for spec in args.types.split(","):
        G, pairs = inputs(spec, args.pairs, args.seed)
        mods = [("python", _pykernels)] + ([("cython", _kernels)] if _kernels else [])
        for name, mod in mods:
            tm, tl = micro(mod, G, pairs, args.number)
            print(f"{spec:8} {name:8} {tm:10.4f} {tl:10.4f}")
    print()
    print(f"{'type':8} {'backend':8} {'elements':>9} {'seconds':>9}")
    for spec in args.types.split(","):
        for pure in (True, False):
            backend, n, secs = end_to_end(spec, args.L, pure)
            print(f"{spec:8} {backend:8} {n:9d} {secs:9.3f}")


if __name__ == "__main__":
    main()
