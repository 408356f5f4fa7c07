"""Binary entropy in nats and analytic upper bounds on it.

Functions accept Python scalars (including ``Fraction``) or numpy arrays.
Scalars return ``float``; arrays return float64 arrays.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

LN2 = math.log(2.0)


def _prep(v, lo, hi, what):
    scalar = np.ndim(v) == 0
    if scalar and isinstance(v, Fraction):
        v = float(v)
    arr = np.asarray(v, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr < lo) or np.any(arr > hi):
        raise ValueError(f"{what} must lie in [{lo}, {hi}]")
    return arr, scalar


def _out(arr, scalar):
    return float(arr) if scalar else arr


def _xlnx(p):
    """-p ln p with 0 ln 0 = 0."""
    safe = np.where(p > 0, p, 1.0)
    return np.where(p > 0, -p * np.log(safe), 0.0)


def h(p):
    """Binary entropy -p ln p - (1-p) ln(1-p)."""
    p, scalar = _prep(p, 0.0, 1.0, "probability")
    return _out(_xlnx(p) + _xlnx(1.0 - p), scalar)


def taylor_bound(x):
    """ln 2 - x^2/2, an upper bound on h((1+x)/2)."""
    x, scalar = _prep(x, -1.0, 1.0, "x")
    return _out(LN2 - x * x / 2.0, scalar)


def taylor_partial(x, T: int):
    """ln 2 minus the even-power series terms x^t / (t(t-1)) for t = 2, 4, ..., T."""
    if isinstance(T, bool) or int(T) != T or T < 2 or T % 2:
        raise ValueError(f"truncation order T must be an even integer >= 2, got {T!r}")
    x, scalar = _prep(x, -1.0, 1.0, "x")
    total = np.zeros_like(x)
    x2 = x * x
    power = np.ones_like(x)
    for t in range(2, int(T) + 1, 2):
        power = power * x2
        total = total + power / (t * (t - 1))
    return _out(LN2 - total, scalar)


def biased_bound_p(p):
    """p (1 - ln p), tight as p -> 0; 0 at p = 0."""
    p, scalar = _prep(p, 0.0, 1.0, "probability")
    safe = np.where(p > 0, p, 1.0)
    return _out(np.where(p > 0, p * (1.0 - np.log(safe)), 0.0), scalar)


def biased_bound_x(x):
    """Biased bound applied to the minority probability (1 - |x|)/2."""
    x, scalar = _prep(x, -1.0, 1.0, "x")
    q = (1.0 - np.abs(x)) / 2.0
    return _out(biased_bound_p(q), scalar)


def h_counts(a: int, b: int) -> float:
    """Entropy of a bit that is 1 in a of a+b equally likely outcomes."""
    total = a + b
    if a < 0 or b < 0 or total == 0:
        raise ValueError("counts must be non-negative with a positive total")
    ln_total = math.log(total)
    out = 0.0
    for c in (a, b):
        if c:
            out -= c / total * (math.log(c) - ln_total)
    return out


def delta_term_counts(c: int, total: int) -> float:
    """d (1 - ln d) at d = c / total."""
    if c == 0:
        return 0.0
    return c / total * (1.0 - (math.log(c) - math.log(total)))


def bound_crossing() -> float:
    """The x in (0, 1) where the Taylor and biased bounds cross."""
    return brentq(lambda x: taylor_bound(x) - biased_bound_x(x), 1e-9, 1.0 - 1e-12, xtol=1e-15)


def curves(points: int = 2001):
    """x grid on [-1, 1] with h((1+x)/2), the Taylor bound, and the biased bound."""
    if points < 2:
        raise ValueError("need at least 2 grid points")
    x = np.linspace(-1.0, 1.0, points)
    if points % 2:
        x[points // 2] = 0.0
    p = np.clip((1.0 + x) / 2.0, 0.0, 1.0)
    return x, h(p), taylor_bound(x), biased_bound_x(x)
