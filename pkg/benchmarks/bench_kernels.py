"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from layered_catalan import _pykernels
from layered_catalan.detlab import TRIAL_PRIME, cayley_table
from layered_catalan.monoid import build_universe
from layered_catalan.oracle import lc_presentation

try:
    from layered_catalan import _ckernels
except ImportError:
    _ckernels = None


def cases():
    p = lc_presentation(4)
    lhs = [l for l, _ in p.relations]
    rhs = [r for _, r in p.relations]
    yield "arena_union_find LC_4, arena 10", "arena_union_find", (4, 10, lhs, rhs)

    u = build_universe(8)
    x = np.random.default_rng(0).integers(1, TRIAL_PRIME, size=u.size)
    m = np.array(cayley_table(u).evaluate(x), dtype=np.int64)
    yield f"det_mod_p {u.size}x{u.size}", "det_mod_p", (m, TRIAL_PRIME)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; only the fallback is timed")
    print(f"{'case':36s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for label, name, call_args in cases():
        py = min(timeit.repeat(lambda: getattr(_pykernels, name)(*call_args), number=1, repeat=args.repeat))
        if _ckernels is None:
            print(f"{label:36s} {py:10.4f}")
            continue
        cy = min(timeit.repeat(lambda: getattr(_ckernels, name)(*call_args), number=1, repeat=args.repeat))
        print(f"{label:36s} {py:10.4f} {cy:10.4f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
