"""Linear algebra over F_2^n with character masks held as int bitsets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .cube import check_dim, check_mask

MAX_SAMPLE_ATTEMPTS = 1_000_000


def _validated(masks: Iterable[int], n: int | None) -> list[int]:
    out = [int(m) for m in masks]
    if n is not None:
        for m in out:
            check_mask(m, n)
    elif any(m < 0 for m in out):
        raise ValueError("masks must be non-negative")
    return out


class _Reducer:
    """Incremental echelon basis keyed by leading bit."""

    def __init__(self):
        self.pivots: dict[int, int] = {}

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            p = self.pivots.get(top)
            if p is None:
                return v
            v ^= p
        return 0

    def add(self, v: int) -> bool:
        r = self.reduce(v)
        if r:
            self.pivots[r.bit_length() - 1] = r
            return True
        return False

    def __len__(self):
        return len(self.pivots)


def rank(masks: Iterable[int], n: int | None = None) -> int:
    """GF(2) rank of the given masks."""
    red = _Reducer()
    for m in _validated(masks, n):
        red.add(m)
    return len(red)


def independent_subset(masks: Iterable[int], n: int | None = None) -> list[int]:
    """Greedy maximal independent sublist, keeping masks in input order."""
    red = _Reducer()
    return [m for m in _validated(masks, n) if red.add(m)]


def in_span(v: int, masks: Iterable[int]) -> bool:
    red = _Reducer()
    for m in masks:
        red.add(int(m))
    return red.reduce(int(v)) == 0


@dataclass(frozen=True)
class Gf2Basis:
    n: int
    vectors: tuple[int, ...]

    def __post_init__(self):
        check_dim(self.n)
        vecs = tuple(_validated(self.vectors, self.n))
        object.__setattr__(self, "vectors", vecs)
        if len(vecs) != self.n:
            raise ValueError(f"a basis of F_2^{self.n} needs {self.n} vectors, got {len(vecs)}")
        if rank(vecs) != self.n:
            raise ValueError("vectors are linearly dependent; not a basis")

    @classmethod
    def standard(cls, n: int) -> "Gf2Basis":
        return cls(n, tuple(1 << i for i in range(n)))

    def __iter__(self):
        return iter(self.vectors)

    def __len__(self):
        return self.n

    def apply(self, idx):
        """Map point indices to the parity coordinates y_j = parity(vectors[j] & idx)."""
        idx = np.asarray(idx, dtype=np.uint64)
        out = np.zeros(idx.shape, dtype=np.uint64)
        for j, v in enumerate(self.vectors):
            out |= (np.bitwise_count(idx & np.uint64(v)) & np.uint64(1)) << np.uint64(j)
        return out.astype(np.int64)


def as_basis(B, n: int | None = None) -> Gf2Basis:
    if isinstance(B, Gf2Basis):
        if n is not None and B.n != n:
            raise ValueError(f"basis dimension {B.n} does not match n={n}")
        return B
    vecs = tuple(int(v) for v in B)
    return Gf2Basis(len(vecs) if n is None else n, vecs)


def complete_basis(independent: Sequence[int], n: int) -> Gf2Basis:
    """Extend an independent list to a basis with standard vectors e_1, e_2, ... in order."""
    n = check_dim(n)
    vecs = _validated(independent, n)
    red = _Reducer()
    for v in vecs:
        if not red.add(v):
            raise ValueError("input masks are not linearly independent")
    for i in range(n):
        if len(red) == n:
            break
        if red.add(1 << i):
            vecs.append(1 << i)
    return Gf2Basis(n, tuple(vecs))


def sample_weight_k_basis(n: int, k: int, seed) -> Gf2Basis:
    """Random basis of F_2^n whose vectors all have Hamming weight k.

    Candidates are drawn as uniformly random k-subsets from numpy's PCG64
    generator and kept when they raise the rank. Even k is rejected: every
    even-weight vector lies in the even-weight hyperplane.
    """
    n = check_dim(n)
    if not 1 <= k <= n:
        raise ValueError(f"weight k={k} out of range 1..{n}")
    if k % 2 == 0:
        raise ValueError(
            f"no basis of weight-{k} vectors exists: even-weight vectors span at most "
            "the even-weight hyperplane"
        )
    if k == n and n > 1:
        raise ValueError(f"only one vector of weight {n} exists in F_2^{n}")
    rng = np.random.default_rng(seed)
    red = _Reducer()
    vecs: list[int] = []
    for _ in range(MAX_SAMPLE_ATTEMPTS):
        if len(vecs) == n:
            return Gf2Basis(n, tuple(vecs))
        coords = rng.choice(n, size=k, replace=False)
        v = 0
        for c in coords:
            v |= 1 << int(c)
        if red.add(v):
            vecs.append(v)
    raise RuntimeError("weight-k basis sampling did not terminate")  # pragma: no cover


def random_basis(n: int, seed) -> Gf2Basis:
    """Uniform random invertible map, drawn row by row with rejection."""
    n = check_dim(n)
    rng = np.random.default_rng(seed)
    red = _Reducer()
    vecs: list[int] = []
    while len(vecs) < n:
        v = int(rng.integers(1, 1 << n))
        if red.add(v):
            vecs.append(v)
    return Gf2Basis(n, tuple(vecs))
