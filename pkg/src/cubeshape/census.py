"""Counting strongly carefree couples and pure cubic fields.

Couples (a, b) are counted below the hyperbola ab <= N inside the cone
1/R <= a/b <= R; all comparisons are done exactly after clearing square
roots, so N may be any positive real (it only enters through N^2).  Field
counts and empirical shape measures are normalized by C_I sqrt(X) or
C_II sqrt(X), where C_I = 2C sqrt(3)/15 and C_II = C sqrt(3)/10.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .arith import (ConstantEstimate, build_squarefree_sieve, euler_product_C, is_strongly_carefree,
                    scan_carefree, type_ii_mask)
from .field import FieldType, RatioWindow, as_fraction, field_batches, field_from_couple, open_window


class ConsistencyError(RuntimeError):
    """Two independent counting routes disagreed."""


# C_? = coefficient * C * sqrt(3)
NORMALIZER_COEFF = {FieldType.I: Fraction(2, 15), FieldType.II: Fraction(1, 10)}


def normalizer(field_type: FieldType, C: float) -> float:
    return float(NORMALIZER_COEFF[field_type]) * C * math.sqrt(3)


def _resolve_workers(workers: Optional[int]) -> int:
    return max(1, int(workers or 1))


def _sharded_sum(fn, items: Sequence, workers: int) -> np.ndarray:
    """Sum ``fn(shard)`` over contiguous shards of ``items``.

    Partial results are integer vectors, so the total does not depend on the
    shard layout or the number of threads.
    """
    if workers == 1 or len(items) < 2:
        return fn(items)
    size = -(-len(items) // workers)
    shards = [items[i:i + size] for i in range(0, len(items), size)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(fn, shards))


# ---------------------------------------------------------------------------
# couples


@dataclass(frozen=True)
class CoupleCount:
    N: float
    R: float
    total: int
    type_i: int
    type_ii: int


def _hyperbola_cap(n_sq: Fraction, x: int) -> int:
    """Largest y with (x*y)^2 <= n_sq."""
    return math.isqrt(math.floor(n_sq / (x * x)))


def _couple_core(n_sq: Fraction, R: Fraction, workers: int = 1) -> tuple[int, int]:
    """(total, type II) for S(N, R), counting a > b once and doubling.

    The set is symmetric under (a, b) -> (b, a), and (1, 1) is the only
    diagonal couple.
    """
    if n_sq < 1:
        return 0, 0
    n_floor = _hyperbola_cap(n_sq, 1)
    b_max = math.isqrt(n_floor)  # b < a and ab <= N force b^2 < N
    a_cap = min(n_floor, math.floor(R * b_max))
    sieve = build_squarefree_sieve(max(a_cap, 2))

    def a_range(b):
        return b + 1, min(math.floor(R * b), _hyperbola_cap(n_sq, b))

    def part(bs):
        acc = np.zeros(2, dtype=np.int64)
        for b, a in scan_carefree(bs, a_range, sieve):
            acc[0] += a.size
            acc[1] += int(np.count_nonzero(type_ii_mask(a, b)))
        return acc

    half_total, half_ii = _sharded_sum(part, range(1, b_max + 1), workers)
    # (1, 1): 3 does not divide 1 and 1 = 1 mod 9, so it is a Type II couple
    return 2 * int(half_total) + 1, 2 * int(half_ii) + 1


def count_couples(N, R, workers: Optional[int] = None) -> CoupleCount:
    """S(N, R), S_I(N, R), S_II(N, R)."""
    n, r = as_fraction(N), as_fraction(R)
    if n < 1 or r < 1:
        raise ValueError(f"need N >= 1 and R >= 1, got N={N}, R={R}")
    total, ii = _couple_core(n * n, r, _resolve_workers(workers))
    return CoupleCount(float(N), float(R), total, total - ii, ii)


@dataclass(frozen=True)
class RegionCounts:
    i: int
    ii: int
    iii: int
    iv: int

    @property
    def combined(self) -> int:
        return self.i - self.ii + self.iii - self.iv


def count_couples_by_regions(N, R, type_ii_only: bool = False) -> RegionCounts:
    """The four region counts of the inclusion-exclusion cover, by scanning a.

    (i)   a <= sqrt(RN),  b <= N/a
    (ii)  a <= sqrt(N/R), b <= N/a
    (iii) a <= sqrt(N/R), b <= Ra
    (iv)  a <= sqrt(RN),  b <  a/R

    Region (iv) is taken strictly below the ray a = Rb so that couples on
    the cone boundary are counted once.
    """
    n, r = as_fraction(N), as_fraction(R)
    if n < 1 or r < 1:
        raise ValueError(f"need N >= 1 and R >= 1, got N={N}, R={R}")
    n_sq = n * n
    a_big = math.isqrt(math.floor(r * n))        # a <= sqrt(RN)
    a_small = math.isqrt(math.floor(n / r))      # a <= sqrt(N/R)
    limit = max(2, _hyperbola_cap(n_sq, 1), math.floor(r * a_small))
    sieve = build_squarefree_sieve(limit)

    def tally(a_values, b_range):
        # roles swapped: scan over a, collect admissible b
        total = 0
        for a, b in scan_carefree(a_values, b_range, sieve):
            total += int(np.count_nonzero(type_ii_mask(b, a))) if type_ii_only else b.size
        return total

    def below_ray(a):
        q = a / r
        return 1, (math.ceil(q) - 1)

    return RegionCounts(
        i=tally(range(1, a_big + 1), lambda a: (1, _hyperbola_cap(n_sq, a))),
        ii=tally(range(1, a_small + 1), lambda a: (1, _hyperbola_cap(n_sq, a))),
        iii=tally(range(1, a_small + 1), lambda a: (1, math.floor(r * a))),
        iv=tally(range(1, a_big + 1), below_ray),
    )


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class FieldCount:
    X: int
    R1: float
    R2: float
    n_i: int
    n_ii: int

    @property
    def n_total(self) -> int:
        return self.n_i + self.n_ii


def _count_window(X: int, window: RatioWindow) -> tuple[int, int]:
    n_i = n_ii = 0
    for _, a, ii in field_batches(X, window):
        k = int(np.count_nonzero(ii))
        n_ii += k
        n_i += a.size - k
    return n_i, n_ii


def fields_via_couples(X: int, R1, R2, workers: Optional[int] = None) -> tuple[int, int]:
    """(N_I, N_II) from S_? counts: N_? = (S_?(N, R2) - S_?(N, R1))/2 - boundary.

    N^2 = X/27 for Type I and X/3 for Type II.  The couple cone is closed,
    the field window open, so couples with a/b = R2 exactly are removed.
    """
    lo, hi = as_fraction(R1), as_fraction(R2)
    w = _resolve_workers(workers)
    out = []
    for ftype, n_sq in ((FieldType.I, Fraction(X, 27)), (FieldType.II, Fraction(X, 3))):
        t2, ii2 = _couple_core(n_sq, hi, w)
        t1, ii1 = _couple_core(n_sq, lo, w)
        s2 = ii2 if ftype is FieldType.II else t2 - ii2
        s1 = ii1 if ftype is FieldType.II else t1 - ii1
        diff = s2 - s1
        if diff % 2:
            raise ConsistencyError("odd difference of symmetric couple counts")
        out.append(diff // 2 - _on_ray(X, hi, ftype))
    return out[0], out[1]


def _on_ray(X: int, ratio: Fraction, ftype: FieldType) -> int:
    """Number of fields of the given type with |disc| <= X and a/b exactly ``ratio``."""
    a, b = ratio.numerator, ratio.denominator
    if a <= b or not is_strongly_carefree(a, b):
        return 0
    f = field_from_couple(a, b)
    return int(f.field_type is ftype and -f.discriminant <= X)


def count_fields(X: int, R1, R2, check: bool = True, workers: Optional[int] = None) -> FieldCount:
    """N_I, N_II for |disc| <= X and ratio in the open interval (R1, R2).

    With ``check`` the direct count is compared against the couple-count
    identity and :class:`ConsistencyError` is raised on mismatch.
    """
    if int(X) != X or X < 1:
        raise ValueError(f"X must be a positive integer, got {X!r}")
    X = int(X)
    n_i, n_ii = _count_window(X, open_window(R1, R2))
    if check:
        other = fields_via_couples(X, R1, R2, workers)
        if other != (n_i, n_ii):
            raise ConsistencyError(f"direct count {(n_i, n_ii)} != couple identity {other}")
    return FieldCount(X, float(R1), float(R2), n_i, n_ii)


# ---------------------------------------------------------------------------
# empirical shape measures


def shape_bin_to_ratio_window(y_lo, y_hi) -> RatioWindow:
    """Shapes with y-parameter in [y_lo, y_hi) are fields with r in [y_lo^3, y_hi^3).

    The y-parameter is r^(1/3) on both families (for Type II it is three
    times the imaginary part).  This is the only place the cube is taken.
    """
    lo, hi = as_fraction(y_lo), as_fraction(y_hi)
    if lo < 1 or hi <= lo:
        raise ValueError(f"need 1 <= y_lo < y_hi, got [{y_lo}, {y_hi})")
    return RatioWindow(lo ** 3, hi ** 3, lo_closed=True, hi_closed=False)


@dataclass(frozen=True)
class EmpiricalMeasure:
    field_type: FieldType
    X: int
    edges: tuple[float, ...]
    counts: tuple[int, ...]
    normalizer_C: ConstantEstimate

    @property
    def scale(self) -> float:
        return normalizer(self.field_type, self.normalizer_C.value) * math.sqrt(self.X)

    @property
    def exact_masses(self) -> tuple[Fraction, ...]:
        """Each count times one fixed rational 1/scale, so bin masses add exactly."""
        inv = Fraction(1 / self.scale)
        return tuple(c * inv for c in self.counts)

    @property
    def masses(self) -> tuple[float, ...]:
        return tuple(float(m) for m in self.exact_masses)

    def targets(self) -> tuple[float, ...]:
        return tuple(math.log(hi / lo) for lo, hi in zip(self.edges, self.edges[1:]))


def _count_type(X: int, window: RatioWindow, ftype: FieldType) -> int:
    n_i, n_ii = _count_window(X, window)
    return n_ii if ftype is FieldType.II else n_i


def empirical_measure(field_type: FieldType, X: int, edges: Sequence,
                      C: Optional[ConstantEstimate] = None,
                      prime_bound: int = 10 ** 6) -> EmpiricalMeasure:
    field_type = FieldType(field_type) if not isinstance(field_type, FieldType) else field_type
    edges = tuple(edges)
    if len(edges) < 2 or any(e < 1 for e in edges) or any(b <= a for a, b in zip(edges, edges[1:])):
        raise ValueError(f"bin edges must be increasing and >= 1, got {edges}")
    if int(X) != X or X < 1:
        raise ValueError(f"X must be a positive integer, got {X!r}")
    C = C if C is not None else euler_product_C(prime_bound)
    counts = tuple(_count_type(int(X), shape_bin_to_ratio_window(lo, hi), field_type)
                   for lo, hi in zip(edges, edges[1:]))
    return EmpiricalMeasure(field_type, int(X), tuple(float(e) for e in edges), counts, C)


@dataclass(frozen=True)
class ConvergenceRow:
    X: int
    count: int
    mass: float
    target: float

    @property
    def deviation(self) -> float:
        return abs(self.mass - self.target)


def convergence_table(field_type: FieldType, interval: tuple, X_list: Sequence[int],
                      C: Optional[ConstantEstimate] = None) -> list[ConvergenceRow]:
    lo, hi = interval
    if not hi > lo:
        raise ValueError(f"interval [{lo}, {hi}) has no length")
    if any(b <= a for a, b in zip(X_list, X_list[1:])):
        raise ValueError("X_list must be increasing")
    C = C if C is not None else euler_product_C(10 ** 6)
    rows = []
    for X in X_list:
        em = empirical_measure(field_type, X, (lo, hi), C)
        rows.append(ConvergenceRow(int(X), em.counts[0], em.masses[0], em.targets()[0]))
    return rows
