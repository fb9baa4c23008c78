"""Time each array kernel compiled with numba against its plain Python source.

    python benchmarks/bench_kernels.py [--repeat 3] [--seed 0] [--scale 1.0]

With FRAGWORDS_DISABLE_NUMBA=1 both columns run the Python source.
"""

import argparse
import time

import numpy as np

from fragwords import _accel, kernels
from fragwords import automata as am
from fragwords.words import Word


def random_word(rng, n_gens, length):
    return Word(rng.integers(0, 2 * n_gens, length).tolist())


def workloads(rng, scale):
    n = max(10, int(2000 * scale))
    codes = rng.integers(0, 6, 50 * n).astype(np.int64)
    yield "reduce_codes", kernels.reduce_codes, (codes,)

    L = am.linear_automaton(random_word(rng, 2, n), 2)
    E = np.asarray(L.positive_edges(), np.int64).reshape(-1, 3)
    empty = np.zeros(0, np.int64)
    yield "fold_edges", kernels.fold_edges, (L.n_states, 4, E[:, 0].copy(), E[:, 1].copy(), E[:, 2].copy(), empty, empty)

    M = am.munn_tree(random_word(rng, 2, n), 2)
    words = rng.integers(0, 4, (10 * n, 30)).astype(np.int64)
    lengths = rng.integers(0, 31, 10 * n).astype(np.int64)
    yield "run_many", kernels.run_many, (M.table, M.initial, words, lengths)

    # the eraser's product: trees of the three deletions of one word
    w = random_word(rng, 3, 5 * n)
    trees = [am.munn_tree(w.delete(j), 3) for j in range(3)]
    size = max(T.n_states for T in trees)
    tables = np.full((3, size, 6), -1, np.int64)
    for j, T in enumerate(trees):
        tables[j, :T.n_states] = T.table
    sizes = np.asarray([T.n_states for T in trees], np.int64)
    yield "product_bfs", kernels.product_bfs, (tables, sizes, np.zeros(3, np.int64), np.arange(3, dtype=np.int64))


def best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--scale", type=float, default=1.0, help="workload size multiplier")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"numba enabled: {_accel.USE_NUMBA}")
    print(f"{'kernel':<14}{'compiled (s)':>14}{'python (s)':>14}{'speedup':>10}")
    for name, fn, fargs in workloads(rng, args.scale):
        fn(*fargs)  # compile outside the timed region
        fast = best_of(fn, fargs, args.repeat)
        slow = best_of(fn.py_func, fargs, 1)
        print(f"{name:<14}{fast:>14.4f}{slow:>14.4f}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
