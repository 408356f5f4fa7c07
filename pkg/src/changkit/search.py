"""Searches for sets that come close to equality in the level-1 inequalities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from . import kernels
from .chang import (
    BoundReport,
    check_biased,
    check_dimension,
    check_level1,
    check_subadditivity,
    chang_rhs,
    weight_k_proven,
)
from .cube import FAMILY_ARITY, PointSet, check_dim, make_family, parse_family
from .entropy import delta_term_counts
from .fourier import level_masks, wht, wht_batch
from .gf2 import as_basis

MAX_EXHAUSTIVE_N = 4
# int8 character table entries allowed for local search (256 MiB)
MAX_TABLE_ENTRIES = 1 << 28
TIE_RTOL = 1e-12
THEOREM_SLACK = 1e-9


class TheoremViolation(AssertionError):
    """A set was found that breaks an inequality that is supposed to hold."""


OBJECTIVE_KINDS = ("level1_ratio", "biased_slack", "basis_ratio", "weightk_ratio")


@dataclass(frozen=True)
class Objective:
    """A tightness functional.

    Ratio kinds divide a Fourier weight by its Chang-type upper bound and are
    maximized; ``biased_slack`` is the gap in the biased inequality and is
    minimized.
    """

    kind: str
    k: int | None = None
    basis: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in OBJECTIVE_KINDS:
            raise ValueError(f"unknown objective {self.kind!r}")
        if self.kind == "weightk_ratio" and (self.k is None or self.k < 1):
            raise ValueError("weightk_ratio needs a level k >= 1")
        if self.kind == "basis_ratio" and not self.basis:
            raise ValueError("basis_ratio needs a basis")

    @classmethod
    def parse(cls, text: str) -> "Objective":
        """``level1_ratio``, ``biased_slack``, ``weightk_ratio:3`` or ``basis_ratio:3,5,6``."""
        name, _, arg = text.strip().partition(":")
        try:
            if name == "weightk_ratio":
                return cls(name, k=int(arg))
            if name == "basis_ratio":
                return cls(name, basis=tuple(int(v, 0) for v in arg.split(",")))
        except ValueError:
            raise ValueError(f"malformed objective {text!r}") from None
        if arg:
            raise ValueError(f"objective {name!r} takes no argument")
        return cls(name)

    def __str__(self):
        if self.kind == "weightk_ratio":
            return f"weightk_ratio:{self.k}"
        if self.kind == "basis_ratio":
            return "basis_ratio:" + ",".join(str(v) for v in self.basis)
        return self.kind

    @property
    def maximize(self) -> bool:
        return self.kind != "biased_slack"

    @property
    def is_ratio(self) -> bool:
        return self.kind != "biased_slack"

    def masks(self, n: int) -> np.ndarray:
        """Characters whose coefficients the objective depends on."""
        if self.kind in ("level1_ratio", "biased_slack"):
            return level_masks(n, 1)
        if self.kind == "weightk_ratio":
            return level_masks(n, self.k)
        return np.asarray(as_basis(self.basis, n).vectors, dtype=np.int64)

    def coef(self, n: int) -> Fraction:
        if self.kind == "weightk_ratio":
            return Fraction(2 * comb(n, self.k), n)
        return Fraction(2)

    def proven(self, n: int) -> bool:
        return self.kind != "weightk_ratio" or weight_k_proven(n, self.k)

    def ratio_from_sumsq(self, sumsq, size: int, n: int):
        rhs = chang_rhs(self.coef(n), size, n)
        if rhs == 0.0:
            return 0.0 * np.asarray(sumsq, dtype=np.float64)
        return np.asarray(sumsq, dtype=np.float64) / float(1 << (2 * n)) / rhs

    def evaluate(self, A: PointSet) -> float:
        """Objective value by full recomputation of the spectrum."""
        n = A.n
        if self.kind == "weightk_ratio" and not 1 <= self.k <= n:
            raise ValueError(f"level k={self.k} out of range 1..{n}")
        if self.is_ratio:
            if A.size in (0, 1 << n):
                return 0.0
            c = wht(A).coeffs[self.masks(n)]
            return float(self.ratio_from_sumsq(int(np.dot(c, c)), A.size, n))
        if A.size == 0:
            raise ValueError("biased_slack is undefined for the empty set")
        F = wht(A).level1().tolist()
        two = 2 * A.size
        lhs = math.fsum(delta_term_counts(A.size - abs(v), two) for v in F)
        return lhs - math.log(A.size)


@dataclass
class SearchResult:
    best_set: PointSet
    best_value: float
    evaluations: int
    trace: list[tuple[int, float]] | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        out = {
            "n": self.best_set.n,
            "size": self.best_set.size,
            "set": f"hex:{self.best_set.n}:{self.best_set.to_hex()}",
            "indices": self.best_set.indices.tolist(),
            "best_value": self.best_value,
            "evaluations": self.evaluations,
        }
        if self.trace is not None:
            out["trace"] = [list(t) for t in self.trace]
        return out


def _better(a: float, b: float, maximize: bool) -> bool:
    tol = TIE_RTOL * max(1.0, abs(a), abs(b))
    return a > b + tol if maximize else a < b - tol


def _check_invariant(obj: Objective, values: np.ndarray, n: int):
    if not obj.proven(n):
        return
    if obj.is_ratio:
        bad = values > 1.0 + THEOREM_SLACK
    else:
        bad = values < -THEOREM_SLACK
    if np.any(bad):
        raise TheoremViolation(f"{obj} violates its bound on {int(bad.sum())} set(s)")


def exhaustive_extremal(n: int, obj: Objective, verify: bool = True) -> SearchResult:
    """Global optimum of ``obj`` over all subsets of {+1,-1}^n for n <= 4.

    Empty sets are skipped, and the full cube too for ratio objectives. Ties
    within a relative 1e-12 go to the smallest bitmap code.
    """
    n = check_dim(n)
    if n > MAX_EXHAUSTIVE_N:
        raise ValueError(f"exhaustive search supports n <= {MAX_EXHAUSTIVE_N}, got {n}")
    N = 1 << n
    codes = np.arange(1 << N, dtype=np.int64)
    ind = (codes[:, None] >> np.arange(N)) & 1
    sizes = ind.sum(axis=1)
    keep = sizes > 0
    if obj.is_ratio:
        keep &= sizes < N
    codes, ind, sizes = codes[keep], ind[keep], sizes[keep]
    spectra = wht_batch(ind)
    F = spectra[:, obj.masks(n)]
    if obj.is_ratio:
        sumsq = (F * F).sum(axis=1)
        coef = float(obj.coef(n))
        alpha_sq = sizes.astype(np.float64) ** 2 / float(1 << (2 * n))
        rhs = coef * alpha_sq * (n * math.log(2.0) - np.log(sizes))
        values = sumsq / float(1 << (2 * n)) / rhs
    else:
        s = sizes[:, None]
        d = (s - np.abs(F)) / (2.0 * s)
        safe = np.where(d > 0, d, 1.0)
        values = np.where(d > 0, d * (1.0 - np.log(safe)), 0.0).sum(axis=1) - np.log(sizes)
    if verify:
        _check_invariant(obj, values, n)
    target = values.max() if obj.maximize else values.min()
    tol = TIE_RTOL * max(1.0, abs(target))
    tied = np.abs(values - target) <= tol
    best_code = int(codes[np.flatnonzero(tied)[0]])
    best = PointSet.from_code(n, best_code)
    return SearchResult(best, obj.evaluate(best), int(codes.size))


def _verify_set(A: PointSet):
    reports: list[BoundReport] = [check_level1(A)]
    if A.size:
        reports += [check_subadditivity(A), check_biased(A), check_dimension(A, "1/2")]
    for rep in reports:
        if not rep.satisfied:
            raise TheoremViolation(f"{rep.name} violated on {A.to_hex()}: {rep.to_json()}")


def local_search(
    n: int,
    m: int,
    obj: Objective,
    seed: int,
    iters: int = 100,
    verify: bool = False,
) -> SearchResult:
    """Best-improvement hill climbing over sets of fixed size m.

    Starts from m distinct points drawn with ``numpy.random.default_rng(seed)``.
    Each step scores every single-point swap (one member out, one non-member
    in) and takes the best strictly improving one; ties go to the smallest
    outgoing, then incoming, index. Stops at a local optimum or after
    ``iters`` steps. With ``verify`` every visited set is run through the
    theorem checkers.
    """
    n = check_dim(n)
    N = 1 << n
    if not 1 <= m <= N - 1:
        raise ValueError(f"target size m={m} must lie in 1..{N - 1}")
    if iters < 0:
        raise ValueError("iters must be non-negative")
    masks = obj.masks(n)
    if masks.size * N > MAX_TABLE_ENTRIES:
        raise ValueError("character table too large for local search at this n")
    chi = kernels.character_matrix(masks, n)

    rng = np.random.default_rng(seed)
    member = np.zeros(N, dtype=bool)
    member[rng.choice(N, size=m, replace=False)] = True
    F = chi[:, member].astype(np.int64).sum(axis=1)

    def value_of(raw):
        if obj.is_ratio:
            return obj.ratio_from_sumsq(raw, m, n)
        return raw - math.log(m)

    def current_raw():
        if obj.is_ratio:
            return int(np.dot(F, F))
        return math.fsum(delta_term_counts(m - abs(v), 2 * m) for v in F.tolist())

    raw = current_raw()
    evaluations = 1
    trace = [(0, float(value_of(raw)))]
    if verify:
        _verify_set(PointSet.from_indicator(n, member))

    for step in range(1, iters + 1):
        outs = np.flatnonzero(member)
        ins = np.flatnonzero(~member)
        if obj.is_ratio:
            scores = kernels.swap_sumsq(F, chi, outs, ins)
        else:
            scores = kernels.swap_biased(F, chi, outs, ins, m)
        evaluations += scores.size
        flat = int(scores.argmax() if obj.maximize else scores.argmin())
        cand = scores.flat[flat]
        if obj.is_ratio:
            improved = int(cand) > raw
        else:
            improved = _better(float(cand), raw, maximize=False)
        if not improved:
            break
        u = int(outs[flat // ins.size])
        v = int(ins[flat % ins.size])
        member[u] = False
        member[v] = True
        F += chi[:, v].astype(np.int64) - chi[:, u].astype(np.int64)
        raw = current_raw()
        trace.append((step, float(value_of(raw))))
        if verify:
            _verify_set(PointSet.from_indicator(n, member))

    best = PointSet.from_indicator(n, member)
    return SearchResult(best, obj.evaluate(best), evaluations, trace)


def merge_results(results, maximize: bool = True) -> SearchResult:
    """Best of several results; ties go to the smallest bitmap code."""
    results = list(results)
    if not results:
        raise ValueError("nothing to merge")
    sign = -1.0 if maximize else 1.0
    return min(results, key=lambda r: (sign * r.best_value, r.best_set.code()))


# ---------------------------------------------------------------------------
# Family sweeps
# ---------------------------------------------------------------------------

SWEEP_CHECKS = ("level1", "subadditivity", "biased", "dimension")


@dataclass
class SweepRow:
    family: str
    n: int
    size: int
    level1_ratio: float
    biased_slack: float
    reports: list[BoundReport]

    def records(self) -> list[dict]:
        return [
            {
                "family": self.family,
                "n": self.n,
                "size": self.size,
                "check": r.name,
                "lhs": r.lhs,
                "rhs": r.rhs,
                "margin": r.margin,
                "satisfied": r.satisfied,
                "level1_ratio": self.level1_ratio,
                "biased_slack": self.biased_slack,
            }
            for r in self.reports
        ]


def family_spec(template: str, n: int) -> str:
    """Insert n into a family template: ``subcube:2`` -> ``subcube:n,2``."""
    name, _, rest = template.strip().partition(":")
    return f"{name}:{n},{rest}" if rest else f"{name}:{n}"


def sweep_families(n_range, families, rho="1/2") -> list[SweepRow]:
    """Run the theorem checkers on each family member for every n.

    Templates omit n (``weight1``, ``subcube:2``, ``ball:1``, ``dictator:1``,
    ``random:8,7``). Combinations that do not exist at a given n (say
    ``subcube:5`` at n = 3) are skipped.
    """
    rows = []
    level1 = Objective("level1_ratio")
    biased = Objective("biased_slack")
    for template in families:
        name, args = parse_family(family_spec(template, 1))
        if len(args) != FAMILY_ARITY[name]:
            raise ValueError(f"family template {template!r} has the wrong number of arguments")
        for n in n_range:
            spec = family_spec(template, n)
            try:
                A = make_family(spec)
            except ValueError:
                # family member does not exist at this n
                continue
            if A.size == 0:
                continue
            reports = [
                check_level1(A),
                check_subadditivity(A),
                check_biased(A),
                check_dimension(A, rho),
            ]
            rows.append(
                SweepRow(spec, n, A.size, level1.evaluate(A), biased.evaluate(A), reports)
            )
    return rows
