"""Hot numeric kernels, each with a numba and a pure-numpy implementation.

The public names (``fwht_rows``, ``swap_sumsq``, ``swap_biased``) dispatch to
the numba version unless ``CHANGKIT_DISABLE_NUMBA`` is set. Both variants are
importable under their private names so tests and benchmarks can compare them.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# Walsh-Hadamard butterfly
# ---------------------------------------------------------------------------


def _fwht_rows_numpy(a):
    """In-place unnormalized WHT of every row of a C-contiguous int64 array."""
    batch, size = a.shape
    h = 1
    while h < size:
        v = a.reshape(batch, size // (2 * h), 2, h)
        lo = v[:, :, 0, :].copy()
        hi = v[:, :, 1, :]
        v[:, :, 0, :] += hi
        np.subtract(lo, hi, out=hi)
        h *= 2
    return a


def _fwht_rows_loops(a):
    batch, size = a.shape
    for b in range(batch):
        h = 1
        while h < size:
            for i in range(0, size, 2 * h):
                for j in range(i, i + h):
                    x = a[b, j]
                    y = a[b, j + h]
                    a[b, j] = x + y
                    a[b, j + h] = x - y
            h *= 2
    return a


_fwht_rows_numba = njit(_fwht_rows_loops)


def fwht_rows(a):
    """Transform each row of ``a`` in place; ``a`` must be int64, C-contiguous,
    with a power-of-two row length."""
    if a.dtype != np.int64 or not a.flags.c_contiguous or a.ndim != 2:
        raise TypeError("fwht_rows expects a C-contiguous 2-D int64 array")
    size = a.shape[1]
    if size & (size - 1):
        raise ValueError(f"row length {size} is not a power of two")
    if USE_NUMBA:
        return _fwht_rows_numba(a)
    return _fwht_rows_numpy(a)


# ---------------------------------------------------------------------------
# Character tables
# ---------------------------------------------------------------------------


def parity(x):
    """Parity of the popcount of each entry of a non-negative integer array."""
    return np.bitwise_count(np.asarray(x, dtype=np.uint64)) & 1


def character_matrix(masks, n):
    """int8 table ``chi[k, idx] = (-1)^popcount(masks[k] & idx)`` over all 2^n points."""
    masks = np.asarray(masks, dtype=np.uint64).reshape(-1)
    points = np.arange(1 << n, dtype=np.uint64)
    par = parity(masks[:, None] & points[None, :])
    return (1 - 2 * par).astype(np.int8)


# ---------------------------------------------------------------------------
# Single-swap neighbourhood scoring for local search
#
# F[k] = sum over members x of chi[k, x]. Swapping member u for non-member v
# gives F'[k] = F[k] - chi[k, u] + chi[k, v].
# ---------------------------------------------------------------------------


def _swap_sumsq_numpy(F, chi, outs, ins):
    G = F[:, None] - chi[:, outs].astype(np.int64)
    C = chi[:, ins].astype(np.int64)
    # sum_k (G + C)^2 with C = +-1
    return (G * G).sum(axis=0)[:, None] + 2 * (G.T @ C) + chi.shape[0]


def _swap_sumsq_loops(F, chi, outs, ins):
    K = chi.shape[0]
    res = np.zeros((outs.shape[0], ins.shape[0]), dtype=np.int64)
    for a in range(outs.shape[0]):
        u = outs[a]
        for b in range(ins.shape[0]):
            v = ins[b]
            s = 0
            for k in range(K):
                t = F[k] - chi[k, u] + chi[k, v]
                s += t * t
            res[a, b] = s
    return res


_swap_sumsq_numba = njit(_swap_sumsq_loops)


def swap_sumsq(F, chi, outs, ins):
    """Exact sum of squared coefficients after each (out, in) swap."""
    F = np.ascontiguousarray(F, dtype=np.int64)
    outs = np.ascontiguousarray(outs, dtype=np.int64)
    ins = np.ascontiguousarray(ins, dtype=np.int64)
    if USE_NUMBA:
        return _swap_sumsq_numba(F, chi, outs, ins)
    return _swap_sumsq_numpy(F, chi, outs, ins)


def _delta_term_numpy(d):
    safe = np.where(d > 0, d, 1.0)
    return np.where(d > 0, d * (1.0 - np.log(safe)), 0.0)


def _swap_biased_numpy(F, chi, outs, ins, size, chunk=256):
    res = np.empty((outs.shape[0], ins.shape[0]), dtype=np.float64)
    C = chi[:, ins].astype(np.int64)
    for start in range(0, outs.shape[0], chunk):
        stop = min(start + chunk, outs.shape[0])
        G = F[:, None] - chi[:, outs[start:stop]].astype(np.int64)
        T = np.abs(G[:, :, None] + C[:, None, :])
        delta = (size - T) / (2.0 * size)
        res[start:stop] = _delta_term_numpy(delta).sum(axis=0)
    return res


def _swap_biased_loops(F, chi, outs, ins, size):
    K = chi.shape[0]
    res = np.zeros((outs.shape[0], ins.shape[0]), dtype=np.float64)
    for a in range(outs.shape[0]):
        u = outs[a]
        for b in range(ins.shape[0]):
            v = ins[b]
            s = 0.0
            for k in range(K):
                t = abs(F[k] - chi[k, u] + chi[k, v])
                if t < size:
                    d = (size - t) / (2.0 * size)
                    s += d * (1.0 - math.log(d))
            res[a, b] = s
    return res


_swap_biased_numba = njit(_swap_biased_loops)


def swap_biased(F, chi, outs, ins, size):
    """Sum of delta*(1 - ln delta) over coordinates after each (out, in) swap."""
    F = np.ascontiguousarray(F, dtype=np.int64)
    outs = np.ascontiguousarray(outs, dtype=np.int64)
    ins = np.ascontiguousarray(ins, dtype=np.int64)
    if USE_NUMBA:
        return _swap_biased_numba(F, chi, outs, ins, int(size))
    return _swap_biased_numpy(F, chi, outs, ins, int(size))
