"""Subsets of the Boolean cube {+1,-1}^n stored as packed bitmaps.

Point ``idx`` (0 <= idx < 2^n) encodes x by bit i of idx being 0 when
x_{i+1} = +1 and 1 when x_{i+1} = -1. Under this encoding the character
chi_S(x) is (-1)^popcount(mask & idx), where bit i of mask marks i+1 in S.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import numpy as np

MIN_N = 1
MAX_N = 24


def check_dim(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"cube dimension must be an integer, got {n!r}")
    n = int(n)
    if not MIN_N <= n <= MAX_N:
        raise ValueError(f"cube dimension n={n} outside supported range [{MIN_N}, {MAX_N}]")
    return n


def check_mask(mask: int, n: int) -> int:
    mask = int(mask)
    if not 0 <= mask < (1 << n):
        raise ValueError(f"character mask {mask} out of range for n={n}")
    return mask


@dataclass(frozen=True)
class PointSet:
    """A subset A of {+1,-1}^n.

    ``bitmap`` holds 2^n membership bits, little-endian: the least significant
    bit of byte 0 is point index 0.
    """

    n: int
    bitmap: bytes = field(repr=False)
    size: int = field(compare=False)

    def __post_init__(self):
        check_dim(self.n)
        nbytes = max(1, (1 << self.n) // 8)
        if len(self.bitmap) != nbytes:
            raise ValueError(f"bitmap must be {nbytes} bytes for n={self.n}")
        if self.n < 3 and self.bitmap[0] >> (1 << self.n):
            raise ValueError("bitmap has bits set beyond 2^n")
        count = int(np.bitwise_count(np.frombuffer(self.bitmap, dtype=np.uint8)).sum())
        if count != self.size:
            raise ValueError(f"size {self.size} does not match bitmap popcount {count}")

    @classmethod
    def from_indicator(cls, n: int, indicator) -> "PointSet":
        n = check_dim(n)
        bits = np.asarray(indicator, dtype=bool)
        if bits.shape != (1 << n,):
            raise ValueError(f"indicator must have length 2^{n}")
        packed = np.packbits(bits, bitorder="little").tobytes()
        return cls(n, packed, int(bits.sum()))

    @property
    def universe(self) -> int:
        return 1 << self.n

    @property
    def alpha(self) -> Fraction:
        """Density |A| / 2^n, exact."""
        return Fraction(self.size, self.universe)

    @cached_property
    def indicator(self) -> np.ndarray:
        bits = np.unpackbits(np.frombuffer(self.bitmap, dtype=np.uint8), bitorder="little")
        out = bits[: self.universe].astype(np.uint8)
        out.flags.writeable = False
        return out

    @cached_property
    def indices(self) -> np.ndarray:
        out = np.flatnonzero(self.indicator).astype(np.int64)
        out.flags.writeable = False
        return out

    def __contains__(self, idx) -> bool:
        idx = int(idx)
        return 0 <= idx < self.universe and bool((self.bitmap[idx >> 3] >> (idx & 7)) & 1)

    def __len__(self) -> int:
        return self.size

    def code(self) -> int:
        """The bitmap read as one little-endian integer."""
        return int.from_bytes(self.bitmap, "little")

    def to_hex(self) -> str:
        """ceil(2^n / 4) hex digits; byte 0 first."""
        if self.n < 3:
            return format(self.bitmap[0] & 0xF, "x")
        return self.bitmap.hex()

    @classmethod
    def from_hex(cls, n: int, text: str) -> "PointSet":
        n = check_dim(n)
        text = text.strip().lower()
        want = -(-(1 << n) // 4)
        if len(text) != want or not re.fullmatch(r"[0-9a-f]+", text):
            raise ValueError(f"expected {want} hex digits for n={n}, got {text!r}")
        if n < 3:
            raw = bytes([int(text, 16)])
        else:
            raw = bytes.fromhex(text)
        count = int(np.bitwise_count(np.frombuffer(raw, dtype=np.uint8)).sum())
        return cls(n, raw, count)

    @classmethod
    def from_code(cls, n: int, code: int) -> "PointSet":
        n = check_dim(n)
        nbytes = max(1, (1 << n) // 8)
        code = int(code)
        if code < 0 or code >> (1 << n):
            raise ValueError(f"subset code out of range for n={n}")
        return cls(n, code.to_bytes(nbytes, "little"), bin(code).count("1"))


def make_set(n: int, indices: Iterable[int]) -> PointSet:
    """PointSet with the given point indices (duplicates allowed)."""
    n = check_dim(n)
    idx = np.asarray(list(indices), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= (1 << n)):
        raise ValueError(f"point index out of range for n={n}")
    bits = np.zeros(1 << n, dtype=bool)
    bits[idx] = True
    return PointSet.from_indicator(n, bits)


def character_eval(mask: int, idx: int, n: int | None = None) -> int:
    """chi_S at the point idx, as +1 or -1."""
    if n is not None:
        check_mask(mask, n)
        if not 0 <= int(idx) < (1 << n):
            raise ValueError(f"point index {idx} out of range for n={n}")
    elif int(mask) < 0 or int(idx) < 0:
        raise ValueError("mask and index must be non-negative")
    return -1 if (int(mask) & int(idx)).bit_count() & 1 else 1


def point_to_signs(idx: int, n: int) -> tuple[int, ...]:
    return tuple(-1 if (idx >> i) & 1 else 1 for i in range(n))


def signs_to_point(x: Iterable[int]) -> int:
    idx = 0
    for i, s in enumerate(x):
        if s == -1:
            idx |= 1 << i
        elif s != 1:
            raise ValueError(f"coordinate {s!r} is not +1 or -1")
    return idx


# ---------------------------------------------------------------------------
# Structured families
# ---------------------------------------------------------------------------

FAMILIES = ("dictator", "subcube", "weight1", "ball", "random")


def _points(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def dictator(n: int, i: int) -> PointSet:
    """{x : x_i = +1}, 1-based coordinate i."""
    n = check_dim(n)
    if not 1 <= i <= n:
        raise ValueError(f"coordinate {i} out of range 1..{n}")
    return PointSet.from_indicator(n, ((_points(n) >> (i - 1)) & 1) == 0)


def subcube(n: int, c: int) -> PointSet:
    """{x : x_1 = ... = x_c = +1}."""
    n = check_dim(n)
    if not 0 <= c <= n:
        raise ValueError(f"subcube codimension {c} out of range 0..{n}")
    return PointSet.from_indicator(n, (_points(n) & ((1 << c) - 1)) == 0)


def weight1(n: int) -> PointSet:
    """The n points with exactly one coordinate equal to +1."""
    n = check_dim(n)
    full = (1 << n) - 1
    return make_set(n, [full ^ (1 << i) for i in range(n)])


def ball(n: int, r: int) -> PointSet:
    """Points with at most r coordinates equal to -1."""
    n = check_dim(n)
    if r < 0:
        raise ValueError("ball radius must be non-negative")
    return PointSet.from_indicator(n, np.bitwise_count(_points(n).astype(np.uint64)) <= r)


def random_set(n: int, m: int, seed: int) -> PointSet:
    """m distinct points drawn with numpy's PCG64 generator seeded by ``seed``."""
    n = check_dim(n)
    if not 0 <= m <= (1 << n):
        raise ValueError(f"cannot draw {m} distinct points from 2^{n}")
    rng = np.random.default_rng(seed)
    return make_set(n, rng.choice(1 << n, size=m, replace=False))


def parse_family(spec: str) -> tuple[str, list[int]]:
    m = re.fullmatch(r"\s*([a-z0-9_]+)\s*:\s*([0-9,\s]+)\s*", spec)
    if not m:
        raise ValueError(f"malformed family spec {spec!r}")
    name = m.group(1)
    try:
        args = [int(a) for a in m.group(2).split(",")]
    except ValueError:
        raise ValueError(f"malformed family arguments in {spec!r}") from None
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")
    return name, args


FAMILY_ARITY = {"dictator": 2, "subcube": 2, "weight1": 1, "ball": 2, "random": 3}
_BUILDERS = {
    "dictator": dictator,
    "subcube": subcube,
    "weight1": weight1,
    "ball": ball,
    "random": random_set,
}


def make_family(spec: str) -> PointSet:
    """Build a set from a descriptor such as ``dictator:3,1`` or ``random:6,10,42``.

    Arguments always start with n: ``dictator:n,i``, ``subcube:n,c``,
    ``weight1:n``, ``ball:n,r``, ``random:n,m,seed``.
    """
    name, args = parse_family(spec)
    if len(args) != FAMILY_ARITY[name]:
        raise ValueError(f"family {name} takes {FAMILY_ARITY[name]} argument(s), got {len(args)}")
    return _BUILDERS[name](*args)
