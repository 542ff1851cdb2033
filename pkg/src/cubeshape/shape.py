"""Shapes of pure cubic fields as points of the upper half-plane.

The lattice O_K^perp has an explicit basis whose Gram matrix, divided by
alpha^2, has entries in Q + Q*r^(2/3) where r = a/b is the field's ratio:

    Type I:   [[3, 0], [0, 3 r^(2/3)]]            ->  z = i r^(1/3)
    Type II:  [[3, 1], [1, (1 + r^(2/3))/3]]      ->  z = (1 + i r^(1/3))/3

Type I points already lie in the GL(2, Z) fundamental domain
F = {0 <= x <= 1/2, x^2 + y^2 >= 1}.  Type II points are moved into F by one
of four fixed matrices depending on which interval r^(1/3) falls in.
"""

from __future__ import annotations

import cmath
import math
from collections import defaultdict
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .field import FieldType, PureCubicField, canonicalize, integral_basis

OMEGA = cmath.exp(2j * math.pi / 3)


# ---------------------------------------------------------------------------
# exact real cube roots


def icbrt(n: int) -> int:
    """floor(n^(1/3)) for a non-negative integer."""
    if n < 0:
        raise ValueError("icbrt of negative number")
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    assert x ** 3 <= n < (x + 1) ** 3
    return x


def cbrt(q) -> float:
    """Correctly rounded real cube root of a positive rational."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("cbrt expects a positive rational")
    p, d = q.numerator, q.denominator
    # scale so the integer root carries at least 64 bits
    s = max(0, 64 - (p.bit_length() - d.bit_length()) // 3 + 1)
    scaled = (p << (3 * s))
    root = icbrt(scaled // d)
    if root ** 3 * d == scaled:
        return float(Fraction(root, 1 << s))
    # the true root is strictly inside (root, root + 1) / 2^s; the midpoint
    # rounds identically because root has more bits than a double
    return float(Fraction(2 * root + 1, 1 << (s + 1)))


# ---------------------------------------------------------------------------
# GL(2, Z)


@dataclass(frozen=True)
class UnimodularMatrix:
    """Integer matrix [[a, b], [c, d]] with determinant +-1.

    Acts on the upper half-plane by z -> (az + b)/(cz + d) when det = +1 and
    by z -> (a zbar + b)/(c zbar + d) when det = -1, so W = [[0,1],[1,0]]
    sends z to 1/zbar.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise ValueError(f"determinant {self.det} is not +-1")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "UnimodularMatrix":
        k = self.det
        return UnimodularMatrix(self.d * k, -self.b * k, -self.c * k, self.a * k)

    def act(self, z: complex) -> complex:
        if self.det == -1:
            z = z.conjugate()
        return (self.a * z + self.b) / (self.c * z + self.d)

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]


IDENTITY = UnimodularMatrix(1, 0, 0, 1)
W = UnimodularMatrix(0, 1, 1, 0)
S = UnimodularMatrix(0, -1, 1, 0)
U = UnimodularMatrix(1, -1, 0, 1)

# translates of F covering the Type II line, indexed by interval I_0..I_3
TYPE_II_TRANSLATES = (IDENTITY, W, S @ U, S @ U @ S @ W)

# circle (centre, radius) carrying the image of each interval inside F;
# I_0 stays on the line Re z = 1/3
TYPE_II_ARCS = {1: (1.5, 1.5), 2: (-0.5, 1.5), 3: (0.5, 1.5)}


def in_fundamental_domain(z: complex, tol: float = 1e-12) -> bool:
    return -tol <= z.real <= 0.5 + tol and abs(z) ** 2 >= 1 - tol and z.imag > 0


# ---------------------------------------------------------------------------
# Gram matrices


Entry = tuple[Fraction, Fraction]  # q0 + q1 * r^(2/3)


@dataclass(frozen=True)
class ExactGram:
    """Symmetric 2x2 Gram matrix over Q + Q*r^(2/3), normalized by alpha^2."""

    ratio: Fraction
    g00: Entry
    g01: Entry
    g11: Entry

    def det_coefficients(self) -> tuple[Fraction, Fraction, Fraction]:
        """Determinant as c0 + c1 u + c2 u^2 in u = r^(2/3)."""
        (a0, a1), (b0, b1), (c0, c1) = self.g00, self.g01, self.g11
        return (a0 * c0 - b0 * b0,
                a0 * c1 + a1 * c0 - 2 * b0 * b1,
                a1 * c1 - b1 * b1)

    def u(self) -> float:
        return cbrt(self.ratio ** 2)

    def evaluate(self, u: Optional[float] = None) -> np.ndarray:
        u = self.u() if u is None else u

        def ev(e):
            return float(e[0]) + float(e[1]) * u

        off = ev(self.g01)
        return np.array([[ev(self.g00), off], [off, ev(self.g11)]])


def gram_perp(field: PureCubicField) -> ExactGram:
    F0, F1, F3 = Fraction(0), Fraction(1), Fraction(3)
    r = field.ratio
    if field.field_type is FieldType.I:
        return ExactGram(r, (F3, F0), (F0, F0), (F0, F3))
    return ExactGram(r, (F3, F0), (F1, F0), (Fraction(1, 3), Fraction(1, 3)))


def point_from_gram(B) -> tuple[float, float]:
    """Upper half-plane point of the lattice with Gram matrix ``B``."""
    B = np.asarray(B, dtype=float)
    if B.shape != (2, 2) or B[0, 0] <= 0 or B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0] <= 0:
        raise ValueError("Gram matrix is not positive definite")
    x = B[0, 1] / B[0, 0]
    return x, math.sqrt(B[1, 1] / B[0, 0] - x * x)


def gauss_reduce(B) -> tuple[complex, UnimodularMatrix]:
    """Lagrange-Gauss reduction of a 2x2 Gram matrix.

    Returns the point of the reduced basis in F and the integer matrix whose
    rows express the reduced basis in the original one.  Used as an
    independent check on the closed-form reduction.
    """
    B = np.asarray(B, dtype=float)

    def ip(s, t):
        return s[0] * (B[0, 0] * t[0] + B[0, 1] * t[1]) + s[1] * (B[1, 0] * t[0] + B[1, 1] * t[1])

    u, v = (1, 0), (0, 1)
    if ip(u, u) > ip(v, v):
        u, v = v, u
    for _ in range(10_000):
        mu = round(ip(u, v) / ip(u, u))
        v = (v[0] - mu * u[0], v[1] - mu * u[1])
        if ip(v, v) >= ip(u, u):
            break
        u, v = v, u
    else:
        raise RuntimeError("Gauss reduction did not terminate")
    if ip(u, v) < 0:
        v = (-v[0], -v[1])
    x, y = point_from_gram([[ip(u, u), ip(u, v)], [ip(u, v), ip(v, v)]])
    return complex(x, y), UnimodularMatrix(u[0], u[1], v[0], v[1])


# ---------------------------------------------------------------------------
# shape points


@dataclass(frozen=True)
class ShapePoint:
    field_type: FieldType
    ratio: Fraction
    x: Fraction
    y_cubed: Fraction
    z: complex
    reduced_z: Optional[complex] = None
    reducer: Optional[UnimodularMatrix] = None

    def to_json(self) -> dict:
        out = {
            "a": self.ratio.numerator,
            "b": self.ratio.denominator,
            "type": str(self.field_type),
            "x_num": self.x.numerator,
            "x_den": self.x.denominator,
            "y_cubed_num": self.y_cubed.numerator,
            "y_cubed_den": self.y_cubed.denominator,
            "z": [self.z.real, self.z.imag],
        }
        if self.reduced_z is not None:
            out["reduced_z"] = [self.reduced_z.real, self.reduced_z.imag]
            out["reducer"] = self.reducer.rows()
        return out


def shape(field: PureCubicField, reduce: bool = True) -> ShapePoint:
    if field.field_type is FieldType.I:
        x, y3 = Fraction(0), field.ratio
    else:
        x, y3 = Fraction(1, 3), field.ratio / 27
    p = ShapePoint(field.field_type, field.ratio, x, y3, complex(float(x), cbrt(y3)))
    return reduce_to_fundamental_domain(p) if reduce else p


def type_ii_interval(ratio: Fraction) -> int:
    """Index i of the interval I_i containing r^(1/3), decided on r^2.

    r^(1/3) > sqrt(8) iff r^2 > 512, and likewise 125 for sqrt(5), 8 for sqrt(2).
    """
    r2 = ratio * ratio
    if r2 in (512, 125, 8) or ratio <= 1:
        raise ValueError(f"ratio {ratio} lies on an interval boundary")
    if r2 > 512:
        return 0
    if r2 > 125:
        return 1
    if r2 > 8:
        return 2
    return 3


def reduce_to_fundamental_domain(p: ShapePoint) -> ShapePoint:
    if p.field_type is FieldType.I:
        g = IDENTITY
    else:
        g = TYPE_II_TRANSLATES[type_ii_interval(p.ratio)].inverse()
    w = g.act(p.z)
    if not in_fundamental_domain(w):
        raise ArithmeticError(f"reduced point {w} is outside F")
    return replace(p, reduced_z=w, reducer=g)


# ---------------------------------------------------------------------------
# Minkowski embedding


def _embed(field: PureCubicField, elements) -> np.ndarray:
    """Rows j_R(e) = (sigma(e), Re tau(e), Im tau(e)) for each element."""
    alpha = cbrt(field.m)
    rows = []
    for c0, c1, c2 in elements:
        c0, c1, c2 = float(c0), float(c1), float(c2)
        sigma = c0 + c1 * alpha + c2 * alpha * alpha
        tau = c0 + c1 * OMEGA * alpha + c2 * OMEGA ** 2 * alpha * alpha
        rows.append((sigma, tau.real, tau.imag))
    return np.array(rows)


PAIRING = np.diag([1.0, 2.0, 2.0])


def numeric_embedding_gram(field: PureCubicField) -> np.ndarray:
    V = _embed(field, integral_basis(field).elements)
    return V @ PAIRING @ V.T


def projected_basis(field: PureCubicField) -> np.ndarray:
    """Numeric vectors of the O_K^perp basis that :func:`gram_perp` describes.

    Type I: alpha^perp, beta^perp.  Type II: v1 = 3 nu^perp - b beta^perp and
    v2 = nu^perp - k beta^perp where b = 3k + eps.
    """
    V = _embed(field, integral_basis(field).elements)
    one = V[0]
    perp = V - np.outer(V @ PAIRING @ one / 3.0, one)
    if field.field_type is FieldType.I:
        return perp[1:]
    b = field.b
    k, eps = divmod(b, 3)
    if eps == 2:
        k, eps = k + 1, -1
    gamma = np.array([[3.0, -b], [1.0, -k]])
    return gamma @ perp[1:]


def projected_gram_numeric(field: PureCubicField) -> np.ndarray:
    P = projected_basis(field)
    return P @ PAIRING @ P.T


# ---------------------------------------------------------------------------
# injectivity


@dataclass(frozen=True)
class InjectivityReport:
    n_fields: int
    n_collisions: int
    collisions: tuple
    witness_same_discriminant: bool
    witness_distinct_shapes: bool

    @property
    def ok(self) -> bool:
        return self.n_collisions == 0 and self.witness_same_discriminant and self.witness_distinct_shapes


def shape_key(field: PureCubicField) -> tuple[str, Fraction]:
    """Exact shape invariant: (type, x, y^3) determines and is determined by (type, ratio)."""
    p = shape(field, reduce=False)
    return str(p.field_type), p.x, p.y_cubed


def verify_injectivity(fields: Iterable[PureCubicField]) -> InjectivityReport:
    groups: dict = defaultdict(set)
    n = 0
    for f in fields:
        groups[shape_key(f)].add(f.couple)
        n += 1
    bad = tuple(sorted((k, tuple(sorted(v))) for k, v in groups.items() if len(v) > 1))
    f6, f12 = canonicalize(6), canonicalize(12)
    return InjectivityReport(
        n_fields=n,
        n_collisions=len(bad),
        collisions=bad,
        witness_same_discriminant=f6.discriminant == f12.discriminant,
        witness_distinct_shapes=shape_key(f6) != shape_key(f12),
    )
