"""Compare the numpy and numba paths of the hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Numba functions are compiled once before timing. Each row reports the best of
``--repeat`` runs, and the two backends are checked for identical output.
"""

import argparse
import timeit

import numpy as np

from changkit import kernels
from changkit._accel import HAVE_NUMBA, NUMBA_DISABLED


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def fwht_cases():
    rng = np.random.default_rng(0)
    for n, batch in ((10, 256), (16, 8), (20, 1), (22, 1)):
        a = (rng.random((batch, 1 << n)) < 0.5).astype(np.int64)
        yield f"fwht n={n} batch={batch}", kernels._fwht_rows_numpy, kernels._fwht_rows_numba, (a,)


def swap_cases():
    rng = np.random.default_rng(1)
    for n, m in ((8, 64), (10, 200), (12, 600)):
        N = 1 << n
        masks = np.array([1 << i for i in range(n)], dtype=np.int64)
        chi = kernels.character_matrix(masks, n)
        members = np.sort(rng.choice(N, size=m, replace=False))
        outs = members
        ins = np.setdiff1d(np.arange(N), members)
        F = chi[:, members].sum(axis=1, dtype=np.int64)
        yield f"swap_sumsq n={n} m={m}", kernels._swap_sumsq_numpy, kernels._swap_sumsq_numba, (F, chi, outs, ins)
        yield (
            f"swap_biased n={n} m={m}",
            lambda *a: kernels._swap_biased_numpy(*a, m),
            lambda *a: kernels._swap_biased_numba(*a, m),
            (F, chi, outs, ins),
        )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if not HAVE_NUMBA or NUMBA_DISABLED:
        raise SystemExit("numba is unavailable or disabled; nothing to compare")

    print(f"{'case':<28}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for label, np_fn, nb_fn, inputs in [*fwht_cases(), *swap_cases()]:
        # the FWHT works in place, so every call gets a fresh copy of its input
        copy = lambda: [x.copy() if x.ndim == 2 and x.dtype == np.int64 else x for x in inputs]
        ref, got = np_fn(*copy()), nb_fn(*copy())  # first numba call compiles
        same = np.array_equal(ref, got) if ref.dtype.kind == "i" else np.allclose(ref, got, rtol=1e-12)
        assert same, label
        t_np = best_of(lambda: np_fn(*copy()), args.repeat)
        t_nb = best_of(lambda: nb_fn(*copy()), args.repeat)
        print(f"{label:<28}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
