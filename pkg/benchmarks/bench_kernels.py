"""Time the subset-BFS and pair-table kernels under numba and plain numpy.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--sizes 12 14 16 18]

Both backends are called directly, so one process compares them; results are
checked for equality before timing is reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from resetword import _kernels
from resetword.codes import gen_cerny, gen_random_dfa


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = fn()
        times.append(time.perf_counter() - t0)
    return min(times), res


def run(sizes, repeat):
    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy backend is timed")
    print(f"{'kernel':<10}{'automaton':<16}{'numpy s':>10}{'numba s':>10}{'speedup':>9}")
    for n in sizes:
        cases = [("cerny", gen_cerny(n)), ("random", gen_random_dfa(n, 2, np.random.SeedSequence([7, n])))]
        for name, a in cases:
            delta = np.ascontiguousarray(a.delta)
            full = (1 << n) - 1
            for kernel, np_fn, nb_fn in (
                ("subset", lambda: _kernels.subset_bfs_np(delta, full), lambda: _kernels._subset_bfs_nb(delta, np.int64(full))),
                ("pairs", lambda: _kernels.pair_tables_np(delta), lambda: _kernels._pair_tables_nb(delta)),
            ):
                t_np, r_np = _best(np_fn, repeat)
                if _kernels.HAVE_NUMBA:
                    nb_fn()  # compile outside the timing
                    t_nb, r_nb = _best(nb_fn, repeat)
                    same = all(np.array_equal(np.asarray(x), np.asarray(y)) for x, y in zip(r_np, r_nb))
                    if not same:
                        raise SystemExit(f"backend mismatch on {kernel} {name} n={n}")
                    print(f"{kernel:<10}{f'{name} n={n}':<16}{t_np:>10.4f}{t_nb:>10.4f}{t_np / t_nb:>8.1f}x")
                else:
                    print(f"{kernel:<10}{f'{name} n={n}':<16}{t_np:>10.4f}{'-':>10}{'-':>9}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[10, 14, 18])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    run(args.sizes, args.repeat)


if __name__ == "__main__":
    main()
