"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

from wreathcount import _kernels_py as py

try:
    from wreathcount import _kernels as cy
except ImportError:
    cy = None

CASES = [
    ("kronecker_table(-99991)", lambda k: k.kronecker_table(-99991)),
    ("fundamental_discriminants(1e6)", lambda k: k.fundamental_discriminants(10**6)),
    ("squarefree_flags(1e6)", lambda k: k.squarefree_flags(10**6)),
    ("odd_char_moment(-99991)", lambda k: k.odd_char_moment(-99991)),
    ("even_logsin_sum(99989)", lambda k: k.even_logsin_sum(99989)),
    ("l2_partial(-4, 1e6)", lambda k: k.l2_partial(-4, 10**6)),
    ("count_reduced_forms(99989)", lambda k: k.count_reduced_forms(99989)),
]


def best(fn, mod, repeat):
    return min(timeit.repeat(lambda: fn(mod), number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'kernel':34s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn in CASES:
        tp = best(fn, py, args.repeat)
        if cy is None:
            print(f"{name:34s} {tp:10.4f} {'n/a':>10s} {'':>8s}")
            continue
        tc = best(fn, cy, args.repeat)
        print(f"{name:34s} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
