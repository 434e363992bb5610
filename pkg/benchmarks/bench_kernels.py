#!/usr/bin/env python3
"""Compare the numba and numpy implementations of each hot kernel.

    python benchmarks/bench_kernels.py [--repeat 200]

Both paths are called directly through ``tomoinfo.kernels.KERNELS`` so the
``TOMOINFO_NO_NUMBA`` flag does not matter here. The first call of every jitted
kernel is made before timing.
"""

import argparse
import time

import numpy as np

from tomoinfo import _accel
from tomoinfo.bases import random_design
from tomoinfo.kernels import KERNELS


def timeit(fn, args, repeat):
    fn(*args)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def cases(n):
    bases = random_design(n, 0).as_array()
    table = KERNELS["transition_table"][1](bases)
    keep = np.arange(n - 1, dtype=np.int64)
    rng = np.random.default_rng(0)
    prior = rng.dirichlet(np.ones(4 * n))
    cond = np.ascontiguousarray(rng.dirichlet(np.ones(n * (n + 1)), size=4 * n).T)
    return {
        "transition_table": (bases,),
        "assemble_gram": (table, keep, n),
        "reduced_blocks": (table, keep, n - 1),
        "max_spread": (table,),
        "mutual_information": (prior, cond),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=200)
    parser.add_argument("--n", type=int, action="append")
    args = parser.parse_args()
    if not _accel.HAS_NUMBA:
        print("numba not installed; both columns time the same numpy code")
    print(f"{'kernel':<20}{'n':>4}{'numba [us]':>14}{'numpy [us]':>14}{'speedup':>10}")
    for n in args.n or [2, 3, 5, 7, 13]:
        for name, kargs in cases(n).items():
            jit, ref = KERNELS[name]
            tj = timeit(jit, kargs, args.repeat)
            tn = timeit(ref, kargs, args.repeat)
            print(f"{name:<20}{n:>4}{tj * 1e6:>14.2f}{tn * 1e6:>14.2f}{tn / tj:>10.2f}")


if __name__ == "__main__":
    main()
