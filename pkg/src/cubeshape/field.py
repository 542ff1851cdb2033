"""Pure cubic fields Q(m^(1/3)) in canonical form.

Every pure cubic field is Q((a b^2)^(1/3)) for a unique pair of coprime
squarefree integers a > b >= 1 with ab >= 2.  The field is Type II exactly
when 3 is tamely ramified, i.e. 3 does not divide ab and a^2 = b^2 (mod 9).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .arith import build_squarefree_sieve, is_strongly_carefree, scan_carefree, type_ii_mask

MAX_M = 2 ** 63 - 1


class FieldType(enum.Enum):
    I = "I"
    II = "II"

    def __str__(self) -> str:
        return self.value


class DegenerateFieldError(ValueError):
    """Raised when the requested radicand generates Q itself."""


@dataclass(frozen=True, order=True)
class CarefreeCouple:
    a: int
    b: int

    def __post_init__(self):
        if self.a <= self.b:
            raise ValueError(f"need a > b, got ({self.a}, {self.b})")
        if self.a * self.b < 2:
            raise ValueError("need ab >= 2")
        if not is_strongly_carefree(self.a, self.b):
            raise ValueError(f"({self.a}, {self.b}) is not a strongly carefree couple")


@dataclass(frozen=True)
class PureCubicField:
    couple: CarefreeCouple
    m: int
    m_prime: int
    field_type: FieldType
    discriminant: int
    ratio: Fraction

    @property
    def a(self) -> int:
        return self.couple.a

    @property
    def b(self) -> int:
        return self.couple.b

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "m": self.m,
            "m_prime": self.m_prime,
            "type": str(self.field_type),
            "discriminant": self.discriminant,
            "ratio_num": self.ratio.numerator,
            "ratio_den": self.ratio.denominator,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_json())


# element c0 + c1*alpha + c2*alpha^2
Element = tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class IntegralBasis:
    elements: tuple[Element, Element, Element]
    sign: Optional[int] = None

    def to_json(self) -> list[list[str]]:
        return [[str(c) for c in e] for e in self.elements]


def classify(a: int, b: int) -> FieldType:
    if a % 3 and b % 3 and (a * a - b * b) % 9 == 0:
        return FieldType.II
    return FieldType.I


def field_from_couple(a: int, b: int) -> PureCubicField:
    couple = CarefreeCouple(a, b)
    ftype = classify(a, b)
    m = a * b * b
    # cross-check against Dedekind's criterion on m itself
    assert (ftype is FieldType.II) == (m % 3 != 0 and m % 9 in (1, 8))
    ab2 = (a * b) ** 2
    disc = -27 * ab2 if ftype is FieldType.I else -3 * ab2
    return PureCubicField(couple, m, a * a * b, ftype, disc, Fraction(a, b))


def _cubefree_split(m: int) -> tuple[int, int]:
    """Write the cube-free part of ``m`` as a * b^2 with a, b squarefree, coprime.

    Trial division only runs while p^3 <= remaining cofactor: what is left
    afterwards has at most two prime factors, all above the trial bound, so
    it is 1, p, pq or p^2.
    """
    a = b = 1
    p = 2
    while p * p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e % 3 == 1:
                a *= p
            elif e % 3 == 2:
                b *= p
        p += 1 if p == 2 else 2
    if m > 1:
        r = math.isqrt(m)
        if r * r == m:
            b *= r
        else:
            a *= m
    return a, b


def canonicalize(m_raw: int) -> PureCubicField:
    """Canonical datum for Q(m_raw^(1/3))."""
    if int(m_raw) != m_raw or m_raw <= 1:
        raise ValueError(f"m must be an integer >= 2, got {m_raw!r}")
    if m_raw > MAX_M:
        raise ValueError(f"m must be below 2^63, got {m_raw}")
    a, b = _cubefree_split(int(m_raw))
    if a * b == 1:
        raise DegenerateFieldError(f"degenerate: perfect cube ({m_raw})")
    if a < b:
        a, b = b, a
    return field_from_couple(a, b)


def integral_basis(field: PureCubicField) -> IntegralBasis:
    """{1, alpha, beta} for Type I and {1, nu, beta} for Type II.

    Here alpha^3 = m, beta = alpha^2/b and nu = (1 + eps*alpha + alpha^2)/3
    with eps = m (mod 9).
    """
    one = (Fraction(1), Fraction(0), Fraction(0))
    beta = (Fraction(0), Fraction(0), Fraction(1, field.b))
    if field.field_type is FieldType.I:
        alpha = (Fraction(0), Fraction(1), Fraction(0))
        return IntegralBasis((one, alpha, beta))
    eps = 1 if field.m % 9 == 1 else -1
    nu = (Fraction(1, 3), Fraction(eps, 3), Fraction(1, 3))
    return IntegralBasis((one, nu, beta), sign=eps)


def minimal_polynomial(element: Element, m: int) -> tuple[Fraction, Fraction, Fraction]:
    """Coefficients (c2, c1, c0) of the monic cubic x^3 + c2 x^2 + c1 x + c0
    satisfied by ``element`` in Q(m^(1/3)).

    Uses the multiplication-by-element matrix on the power basis; its
    characteristic polynomial is the minimal polynomial whenever the element
    is not rational.
    """
    c0, c1, c2 = element
    # columns: element * 1, element * alpha, element * alpha^2
    M = [
        [c0, m * c2, m * c1],
        [c1, c0, m * c2],
        [c2, c1, c0],
    ]
    trace = M[0][0] + M[1][1] + M[2][2]
    minors = (M[0][0] * M[1][1] - M[0][1] * M[1][0]
              + M[0][0] * M[2][2] - M[0][2] * M[2][0]
              + M[1][1] * M[2][2] - M[1][2] * M[2][1])
    det = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
           - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
           + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
    return -trace, minors, -det


# ---------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class RatioWindow:
    """Interval of ratios a/b with independently open/closed ends.

    ``hi=None`` means unbounded above.
    """

    lo: Fraction = Fraction(1)
    hi: Optional[Fraction] = None
    lo_closed: bool = False
    hi_closed: bool = False

    def a_bounds(self, b: int) -> tuple[int, Optional[int]]:
        """Inclusive integer range of a with a/b inside the window."""
        lb = self.lo * b
        a_lo = math.ceil(lb) if self.lo_closed else math.floor(lb) + 1
        if self.hi is None:
            return a_lo, None
        hb = self.hi * b
        a_hi = math.floor(hb) if self.hi_closed else math.ceil(hb) - 1
        return a_lo, a_hi

    def contains(self, r: Fraction) -> bool:
        above = r >= self.lo if self.lo_closed else r > self.lo
        if self.hi is None:
            return above
        below = r <= self.hi if self.hi_closed else r < self.hi
        return above and below


def as_fraction(value) -> Fraction:
    """Exact rational for an int, Fraction, decimal string or binary float."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite bound {value}")
        return Fraction(value)
    return Fraction(value)


def open_window(R1, R2) -> RatioWindow:
    lo, hi = as_fraction(R1), (None if R2 is None else as_fraction(R2))
    if lo < 1 or (hi is not None and hi <= lo):
        raise ValueError(f"need 1 <= R1 < R2, got ({R1}, {R2})")
    return RatioWindow(lo, hi)


def field_batches(X: int, window: RatioWindow, products: Optional[tuple[int, int]] = None
                  ) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Yield ``(b, a, is_type_ii)`` for every field with |disc| <= X in ``window``.

    ``products=(lo, hi)`` further restricts to lo <= ab <= hi.  Arrays are
    ascending in ``a``.
    """
    if int(X) != X or X < 1:
        raise ValueError(f"X must be a positive integer, got {X!r}")
    X = int(X)
    # Type II fields need 3(ab)^2 <= X; Type I the stricter 27(ab)^2 <= X
    ab_max_ii = math.isqrt(X // 3)
    ab_max_i = math.isqrt(X // 27)
    p_lo, p_hi = (1, ab_max_ii) if products is None else (max(products[0], 1), min(products[1], ab_max_ii))
    if p_hi < p_lo:
        return
    sieve = build_squarefree_sieve(max(p_hi, 2))

    def a_range(b):
        lo, hi = window.a_bounds(b)
        lo = max(lo, b + 1, -(-p_lo // b))
        cap = p_hi // b
        hi = cap if hi is None else min(hi, cap)
        return lo, hi

    for b, a in scan_carefree(range(1, math.isqrt(p_hi) + 1), a_range, sieve):
        if a.size == 0:
            continue
        ii = type_ii_mask(a, b)
        keep = ii | (a * b <= ab_max_i)
        yield b, a[keep], ii[keep]


def enumerate_fields(X: int, ratio_window: Optional[tuple] = None,
                     chunk: int = 1 << 16) -> Iterator[PureCubicField]:
    """Every pure cubic field with |disc| <= X (ratio in the open window, if given).

    Output is ordered by ab, then a.  Work proceeds in slabs of ``chunk``
    consecutive products so memory stays bounded.
    """
    if int(X) != X or X < 1:
        raise ValueError(f"X must be a positive integer, got {X!r}")
    window = RatioWindow() if ratio_window is None else open_window(*ratio_window)
    ab_max = math.isqrt(int(X) // 3)
    for start in range(2, ab_max + 1, chunk):
        stop = min(start + chunk - 1, ab_max)
        aa, bb = [], []
        for b, a, _ in field_batches(X, window, (start, stop)):
            aa.append(a)
            bb.append(np.full(a.size, b, dtype=np.int64))
        if not aa:
            continue
        a = np.concatenate(aa)
        b = np.concatenate(bb)
        order = np.lexsort((a, a * b))
        for i in order:
            yield field_from_couple(int(a[i]), int(b[i]))
