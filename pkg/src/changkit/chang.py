"""Inequality checkers producing auditable reports.

Every checker returns a :class:`BoundReport` whose ``margin`` is oriented so
that ``margin >= 0`` means the inequality holds. Floating point enters only
through logarithms; the exact integer and rational inputs are attached to
each report so a failure can be re-adjudicated at higher precision.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from . import gf2
from .cube import PointSet
from .entropy import delta_term_counts, h_counts
from .fourier import basis_weight, level_sumsq, wht
from .gf2 import as_basis

REL_EPS = 1e-9
LN2 = math.log(2.0)


def tolerance(lhs: float, rhs: float) -> float:
    return REL_EPS * max(1.0, abs(lhs), abs(rhs))


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    return v


@dataclass(frozen=True)
class BoundReport:
    name: str
    lhs: float
    rhs: float
    margin: float
    satisfied: bool
    flags: dict = field(default_factory=dict)
    exact_inputs: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def _report(name, lhs, rhs, *, ge=False, flags=None, exact=None) -> BoundReport:
    lhs, rhs = float(lhs), float(rhs)
    margin = lhs - rhs if ge else rhs - lhs
    flags = dict(flags or {})
    flags.setdefault("form", ">=" if ge else "<=")
    return BoundReport(
        name=name,
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        satisfied=margin >= -tolerance(lhs, rhs),
        flags=flags,
        exact_inputs=dict(exact or {}),
    )


def log_inv_alpha(size: int, n: int) -> float:
    """ln(2^n / |A|) from exact integers; 0 for the full cube."""
    if size <= 0:
        raise ValueError("ln(1/alpha) is undefined for the empty set")
    if size == 1 << n:
        return 0.0
    return n * LN2 - math.log(size)


def chang_rhs(coef: Fraction, size: int, n: int) -> float:
    """coef * alpha^2 * ln(1/alpha), with value 0 at alpha in {0, 1}."""
    if size == 0 or size == 1 << n:
        return 0.0
    alpha_sq = Fraction(size * size, 1 << (2 * n))
    return float(coef) * float(alpha_sq) * log_inv_alpha(size, n)


def _base_inputs(sp) -> dict:
    return {
        "n": sp.n,
        "size": sp.set_size,
        "level1_coeffs": [int(v) for v in sp.level1()],
    }


def _require_nonempty(A: PointSet):
    if A.size == 0:
        raise ValueError("this check requires a non-empty set")


def check_level1(A: PointSet) -> BoundReport:
    """sum_i fhat(i)^2 <= 2 alpha^2 ln(1/alpha)."""
    sp = wht(A)
    lhs = Fraction(level_sumsq(sp, 1), 1 << (2 * A.n))
    rhs = chang_rhs(Fraction(2), A.size, A.n)
    exact = _base_inputs(sp) | {"lhs": lhs}
    return _report("level1", lhs, rhs, exact=exact)


def check_subadditivity(A: PointSet) -> BoundReport:
    """ln|A| <= sum_i h(p_i^+), with p_i^+ = (|A| + F(i)) / (2|A|)."""
    _require_nonempty(A)
    sp = wht(A)
    rhs = math.fsum(h_counts(A.size + F, A.size - F) for F in sp.level1().tolist())
    return _report("subadditivity", math.log(A.size), rhs, exact=_base_inputs(sp))


def check_biased(A: PointSet) -> BoundReport:
    """sum_i delta_i (1 - ln delta_i) >= ln|A|, with delta_i = (|A| - |F(i)|) / (2|A|)."""
    _require_nonempty(A)
    sp = wht(A)
    two = 2 * A.size
    lhs = math.fsum(delta_term_counts(A.size - abs(F), two) for F in sp.level1().tolist())
    return _report("biased", lhs, math.log(A.size), ge=True, exact=_base_inputs(sp))


def check_basis(A: PointSet, B) -> BoundReport:
    """sum_{S in B} fhat(S)^2 <= 2 alpha^2 ln(1/alpha) for a basis B."""
    B = as_basis(B, A.n)
    sp = wht(A)
    lhs = basis_weight(sp, B)
    rhs = chang_rhs(Fraction(2), A.size, A.n)
    exact = {
        "n": A.n,
        "size": A.size,
        "basis": list(B.vectors),
        "basis_coeffs": [int(sp.coeffs[v]) for v in B.vectors],
        "lhs": lhs,
    }
    return _report("basis", lhs, rhs, exact=exact)


def weight_k_proven(n: int, k: int) -> bool:
    """Whether a basis of weight-k vectors exists, so the averaging argument applies."""
    return k % 2 == 1 and (k < n or n == k == 1)


def check_weight_k(A: PointSet, k: int) -> BoundReport:
    """sum_{|S|=k} fhat(S)^2 <= (2/n) C(n,k) alpha^2 ln(1/alpha).

    Even k is evaluated and reported rather than rejected; the ``proven`` flag
    records whether a weight-k basis exists.
    """
    n = A.n
    if not 1 <= k <= n:
        raise ValueError(f"weight k={k} out of range 1..{n}")
    sp = wht(A)
    lhs = Fraction(level_sumsq(sp, k), 1 << (2 * n))
    coef = Fraction(2 * comb(n, k), n)
    rhs = chang_rhs(coef, A.size, n)
    exact = {"n": n, "size": A.size, "k": k, "lhs": lhs, "coef": coef}
    return _report(
        "weightk", lhs, rhs, flags={"k": k, "proven": weight_k_proven(n, k)}, exact=exact
    )


# ---------------------------------------------------------------------------
# Large spectrum
# ---------------------------------------------------------------------------


def as_rho(rho) -> Fraction:
    if isinstance(rho, str):
        try:
            rho = Fraction(rho.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"malformed rho {rho!r}; expected p/q") from None
    rho = Fraction(rho)
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    return rho


@dataclass(frozen=True)
class LargeSpectrum:
    n: int
    size: int
    rho: Fraction
    members: tuple[int, ...]
    span_dim: int
    bound_d: float

    @property
    def degenerate(self) -> bool:
        return self.size == 1 << self.n

    def to_dict(self) -> dict:
        return _jsonable(
            {
                "n": self.n,
                "size": self.size,
                "rho": self.rho,
                "members": list(self.members),
                "span_dim": self.span_dim,
                "bound_d": self.bound_d,
                "degenerate": self.degenerate,
            }
        )


def large_spectrum(A: PointSet, rho) -> LargeSpectrum:
    """Characters with |fhat(S)| > rho * alpha, decided by exact integer comparison."""
    rho = as_rho(rho)
    _require_nonempty(A)
    sp = wht(A)
    p, q = rho.numerator, rho.denominator
    if q < (1 << 38) and p * A.size < (1 << 62):
        hit = np.abs(sp.coeffs) * q > p * A.size
        members = tuple(int(m) for m in np.flatnonzero(hit))
    else:
        members = tuple(m for m, F in enumerate(sp.coeffs.tolist()) if abs(F) * q > p * A.size)
    bound_d = 2.0 * q * q / (p * p) * log_inv_alpha(A.size, A.n)
    return LargeSpectrum(A.n, A.size, rho, members, gf2.rank(members), bound_d)


def check_dimension(A: PointSet, rho) -> BoundReport:
    """dim span{S : |fhat(S)| > rho alpha} < 2 rho^-2 ln(1/alpha).

    For the full cube both sides are 0; that case is reported satisfied with
    the ``degenerate`` flag set.
    """
    ls = large_spectrum(A, rho)
    exact = {
        "n": A.n,
        "size": A.size,
        "rho": ls.rho,
        "members": list(ls.members),
    }
    return _report(
        "dimension",
        ls.span_dim,
        ls.bound_d,
        flags={"rho": str(ls.rho), "strict": True, "degenerate": ls.degenerate},
        exact=exact,
    )


CHECKS = ("level1", "subadd", "biased")


def run_checks(A: PointSet, names=CHECKS, *, rho="1/2", basis=None, k=1) -> list[BoundReport]:
    out = []
    for name in names:
        if name == "level1":
            out.append(check_level1(A))
        elif name == "subadd":
            out.append(check_subadditivity(A))
        elif name == "biased":
            out.append(check_biased(A))
        elif name == "dimension":
            out.append(check_dimension(A, rho))
        elif name == "basis":
            out.append(check_basis(A, basis))
        elif name == "weightk":
            out.append(check_weight_k(A, k))
        else:
            raise ValueError(f"unknown check {name!r}")
    return out
