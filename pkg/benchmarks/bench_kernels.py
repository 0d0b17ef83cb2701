"""Time the numba and numpy kernel paths on the same inputs.

    python3 benchmarks/bench_kernels.py [--sequences 3000] [--repeat 5]

Both paths are called directly, so the COGMINE_DISABLE_NUMBA flag does not
matter here. Results are checked for equality before timing.
"""
import argparse
import sys
import timeit

import numpy as np

from cogmine import kernels


def support_inputs(rng, n_seq, max_len, alphabet, n_cand, k):
    rows = [rng.integers(0, alphabet, rng.integers(1, max_len + 1)).tolist() for _ in range(n_seq)]
    db, lengths = kernels.pad_sequences(rows)
    candidates = rng.integers(0, alphabet, (n_cand, k)).astype(np.int64)
    return db, lengths, candidates


def coverage_inputs(rng, n_units, n_visits, n_sub):
    visits = rng.integers(-1, n_units, n_visits).astype(np.int64)
    membership = rng.random((n_sub, n_units)) < 0.3
    return visits, membership


def bench(label, fn_numba, fn_numpy, args, repeat):
    a, b = fn_numba(*args), fn_numpy(*args)
    if not np.array_equal(a, b):
        sys.exit(f"{label}: numba and numpy results differ")
    fn_numba(*args)  # make sure compilation is not timed
    t_numba = min(timeit.repeat(lambda: fn_numba(*args), number=1, repeat=repeat))
    t_numpy = min(timeit.repeat(lambda: fn_numpy(*args), number=1, repeat=repeat))
    print(f"{label:<34} numba {t_numba * 1e3:9.2f} ms   numpy {t_numpy * 1e3:9.2f} ms   "
          f"ratio {t_numpy / t_numba:6.1f}x")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--sequences", type=int, default=3000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if not kernels.HAVE_NUMBA:
        sys.exit("numba is unavailable or disabled; nothing to compare")

    rng = np.random.default_rng(args.seed)
    for k in (2, 3):
        inputs = support_inputs(rng, args.sequences, 40, 27, 500, k)
        bench(f"count_support k={k} ({args.sequences} seqs)", kernels.count_support_numba,
              kernels.count_support_numpy, inputs, args.repeat)
    for n_visits in (1_000, 100_000):
        inputs = coverage_inputs(rng, 500, n_visits, 3)
        bench(f"cumulative_hits ({n_visits} visits)", kernels.cumulative_hits_numba,
              kernels.cumulative_hits_numpy, inputs, args.repeat)


if __name__ == "__main__":
    main()
