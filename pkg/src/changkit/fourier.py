"""Exact Walsh-Hadamard spectra of set indicators.

Coefficients are kept unnormalized as integers, F(S) = 2^n * fhat(S); every
query returns an exact ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .cube import PointSet, check_mask
from .gf2 import Gf2Basis, as_basis


@dataclass(frozen=True)
class Spectrum:
    n: int
    coeffs: np.ndarray = field(repr=False, compare=False)
    set_size: int

    @property
    def universe(self) -> int:
        return 1 << self.n

    def level1(self) -> np.ndarray:
        """F({i}) for i = 1..n."""
        return self.coeffs[1 << np.arange(self.n)]

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return (
            self.n == other.n
            and self.set_size == other.set_size
            and np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None


@dataclass(frozen=True)
class MarginalProfile:
    n: int
    p_plus: tuple[Fraction, ...]
    delta: tuple[Fraction, ...]


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


# Checkers call wht on the same set repeatedly; only small cubes are memoized.
_CACHE_MAX_N = 16


def _wht(A: PointSet) -> Spectrum:
    buf = np.ascontiguousarray(A.indicator, dtype=np.int64).reshape(1, -1).copy()
    kernels.fwht_rows(buf)
    return Spectrum(A.n, _freeze(buf[0]), A.size)


_wht_cached = lru_cache(maxsize=64)(_wht)


def wht(A: PointSet) -> Spectrum:
    """Integer spectrum F(S) = sum_{x in A} chi_S(x) by the radix-2 butterfly."""
    if A.n <= _CACHE_MAX_N:
        return _wht_cached(A)
    return _wht(A)


def wht_batch(indicators: np.ndarray) -> np.ndarray:
    """Spectra of many sets at once; rows are 0/1 indicators of equal length."""
    buf = np.array(indicators, dtype=np.int64, order="C", copy=True)
    if buf.ndim != 2:
        raise ValueError("expected a 2-D array of indicators")
    return kernels.fwht_rows(buf)


def _spectrum(A) -> Spectrum:
    return A if isinstance(A, Spectrum) else wht(A)


def coefficient(sp, mask: int) -> Fraction:
    sp = _spectrum(sp)
    mask = check_mask(mask, sp.n)
    return Fraction(int(sp.coeffs[mask]), sp.universe)


@lru_cache(maxsize=None)
def level_masks(n: int, k: int) -> np.ndarray:
    """All masks of popcount k, ascending."""
    if not 0 <= k <= n:
        raise ValueError(f"level k={k} out of range 0..{n}")
    masks = np.arange(1 << n, dtype=np.uint64)
    return _freeze(masks[np.bitwise_count(masks) == k].astype(np.int64))


def level_sumsq(sp, k: int) -> int:
    """sum of F(S)^2 over |S| = k, as a Python int."""
    sp = _spectrum(sp)
    c = sp.coeffs[level_masks(sp.n, k)]
    return int(np.dot(c, c))


def level_weight(sp, k: int) -> Fraction:
    """Fourier weight at level k: sum over |S| = k of fhat(S)^2."""
    sp = _spectrum(sp)
    return Fraction(level_sumsq(sp, k), sp.universe**2)


def basis_weight(sp, B) -> Fraction:
    """sum over S in B of fhat(S)^2 for a basis B of F_2^n."""
    sp = _spectrum(sp)
    B = as_basis(B, sp.n)
    total = sum(int(sp.coeffs[v]) ** 2 for v in B.vectors)
    return Fraction(total, sp.universe**2)


def marginals(sp) -> MarginalProfile:
    """Exact per-coordinate probabilities p_i^+ and minority masses delta_i."""
    sp = _spectrum(sp)
    size = sp.set_size
    if size == 0:
        raise ValueError("marginals are undefined for the empty set")
    lvl = [int(v) for v in sp.level1()]
    p_plus = tuple(Fraction(size + F, 2 * size) for F in lvl)
    delta = tuple(Fraction(size - abs(F), 2 * size) for F in lvl)
    return MarginalProfile(sp.n, p_plus, delta)


def linear_substitution(A: PointSet, L) -> PointSet:
    """Re-coordinatize A by the parities y_j = prod_{i in B_j} x_i.

    The image A' satisfies fhat_{A'}(e_j) = fhat_A(B_j).
    """
    B = as_basis(L, A.n)
    return PointSet.from_indicator(A.n, _scatter(A.n, B.apply(A.indices)))


def _scatter(n: int, idx: np.ndarray) -> np.ndarray:
    bits = np.zeros(1 << n, dtype=bool)
    bits[idx] = True
    return bits


__all__ = [
    "Gf2Basis",
    "MarginalProfile",
    "Spectrum",
    "basis_weight",
    "coefficient",
    "level_masks",
    "level_sumsq",
    "level_weight",
    "linear_substitution",
    "marginals",
    "wht",
    "wht_batch",
]
