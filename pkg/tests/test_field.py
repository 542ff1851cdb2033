import json
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from sympy.polys.numberfields.basis import round_two

from cubeshape.arith import is_squarefree
from cubeshape.field import (CarefreeCouple, DegenerateFieldError, FieldType, canonicalize, classify,
                             enumerate_fields, field_from_couple, integral_basis, minimal_polynomial)
from cubeshape.shape import numeric_embedding_gram

x = sympy.symbols("x")


@pytest.mark.parametrize("m,couple,ftype,disc", [
    (6, (6, 1), FieldType.I, -972),
    (12, (3, 2), FieldType.I, -972),
    (4, (2, 1), FieldType.I, -108),
    (2, (2, 1), FieldType.I, -108),
    (10, (10, 1), FieldType.II, -300),
    (80, (10, 1), FieldType.II, -300),    # 80 = 2^3 * 10
    (28, (7, 2), FieldType.II, -588),
])
def test_canonicalize_examples(m, couple, ftype, disc):
    f = canonicalize(m)
    assert (f.a, f.b) == couple
    assert f.field_type is ftype
    assert f.discriminant == disc
    assert f.ratio == Fraction(*couple)
    assert f.m == couple[0] * couple[1] ** 2 and f.m_prime == couple[0] ** 2 * couple[1]


def test_ratio_of_twelve():
    assert canonicalize(12).ratio == Fraction(3, 2)


@pytest.mark.parametrize("m", [8, 27, 1000, 2 ** 60])
def test_perfect_cube_rejected(m):
    with pytest.raises(DegenerateFieldError, match="perfect cube"):
        canonicalize(m)


@pytest.mark.parametrize("m", [1, 0, -5, 2 ** 63])
def test_out_of_range_rejected(m):
    with pytest.raises(ValueError):
        canonicalize(m)


def test_canonicalize_large_inputs():
    # 2^63 - 1 = 7^2 * 73 * 127 * 337 * 92737 * 649657
    f = canonicalize(2 ** 63 - 1)
    assert f.b == 7 and f.a == 73 * 127 * 337 * 92737 * 649657
    p = 1_000_003
    assert (canonicalize(p * p).a, canonicalize(p * p).b) == (p, 1)
    assert (canonicalize(2 * p * p).a, canonicalize(2 * p * p).b) == (p, 2)


def test_couple_validation():
    for a, b in [(1, 1), (2, 3), (4, 1), (6, 3)]:
        with pytest.raises(ValueError):
            CarefreeCouple(a, b)


@pytest.mark.parametrize("a,b,ftype", [(10, 1, FieldType.II), (3, 2, FieldType.I), (2, 1, FieldType.I),
                                        (17, 1, FieldType.II), (7, 2, FieldType.II), (5, 1, FieldType.I)])
def test_classify(a, b, ftype):
    assert classify(a, b) is ftype


def test_classify_agrees_with_m_mod_9():
    for a in range(2, 300):
        for b in range(1, a):
            if math.gcd(a, b) != 1 or not (is_squarefree(a) and is_squarefree(b)):
                continue
            m = a * b * b
            tame = m % 3 != 0 and m % 9 in (1, 8)
            assert (classify(a, b) is FieldType.II) == tame


def test_bijectivity_up_to_1e5():
    for m in range(2, 10 ** 5 + 1):
        try:
            f = canonicalize(m)
        except DegenerateFieldError:
            assert round(m ** (1 / 3)) ** 3 == m
            continue
        assert canonicalize(f.m_prime) == f
        assert canonicalize(f.m) == f


def test_discriminant_divisibility():
    for f in enumerate_fields(10 ** 7):
        assert (f.discriminant % 27 == 0) == (f.field_type is FieldType.I)
        assert (f.discriminant % 9 != 0) == (f.field_type is FieldType.II)


def test_integral_basis_examples():
    e = integral_basis(canonicalize(6)).elements
    assert e == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    e = integral_basis(canonicalize(12)).elements
    assert e == ((1, 0, 0), (0, 1, 0), (0, 0, Fraction(1, 2)))
    basis = integral_basis(canonicalize(10))
    assert basis.sign == 1
    assert basis.elements == ((1, 0, 0), (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)), (0, 0, 1))
    assert integral_basis(canonicalize(17)).sign == -1


def test_nu_is_integral_for_m_10():
    nu = integral_basis(canonicalize(10)).elements[1]
    coeffs = minimal_polynomial(nu, 10)
    assert all(c.denominator == 1 for c in coeffs)
    # cross-check with sympy's minimal polynomial of (1 + 10^(1/3) + 10^(2/3))/3
    r = sympy.cbrt(10)
    poly = sympy.Poly(sympy.minimal_polynomial((1 + r + r ** 2) / 3, x), x)
    assert [Fraction(int(c)) for c in poly.all_coeffs()[1:]] == list(coeffs)


@pytest.mark.parametrize("m", [m for m in range(2, 160) if round(m ** (1 / 3)) ** 3 != m])
def test_integral_basis_matches_maximal_order(m):
    f = canonicalize(m)
    ZK, dK = round_two(sympy.Poly(x ** 3 - f.m))
    assert dK == f.discriminant
    ours = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in e]
                         for e in integral_basis(f).elements])
    theirs = ZK.QQ_matrix.to_Matrix().T  # rows: basis elements in the power basis
    change = ours * theirs.inv()
    assert all(v.is_integer for v in change)
    assert abs(change.det()) == 1
    for e in integral_basis(f).elements[1:]:
        assert all(c.denominator == 1 for c in minimal_polynomial(e, f.m))


def test_gram_determinant_equals_discriminant():
    for f in enumerate_fields(10 ** 6):
        det = np.linalg.det(numeric_embedding_gram(f))
        assert det == pytest.approx(-f.discriminant, rel=1e-9)


def _brute_fields(X):
    out = []
    for ab in range(2, math.isqrt(X // 3) + 1):
        for b in range(1, math.isqrt(ab) + 1):
            if ab % b:
                continue
            a = ab // b
            if a <= b or math.gcd(a, b) != 1 or not (is_squarefree(a) and is_squarefree(b)):
                continue
            m = a * b * b
            tame = m % 3 != 0 and m % 9 in (1, 8)
            disc = (3 if tame else 27) * ab * ab
            if disc <= X:
                out.append((a, b))
    return sorted(out, key=lambda c: (c[0] * c[1], c[0]))


def test_enumerate_examples():
    fields = list(enumerate_fields(1000))
    assert len(fields) == 8
    type_i = {(f.a, f.b) for f in fields if f.field_type is FieldType.I}
    type_ii = {(f.a, f.b) for f in fields if f.field_type is FieldType.II}
    assert type_i == {(2, 1), (3, 1), (5, 1), (6, 1), (3, 2)}
    assert type_ii == {(10, 1), (7, 2), (17, 1)}
    assert list(enumerate_fields(107)) == []
    assert [(f.a, f.b) for f in enumerate_fields(108)] == [(2, 1)]


@pytest.mark.parametrize("X", [10 ** 4, 10 ** 6, 3 * 10 ** 7])
def test_enumerate_matches_brute_force(X):
    assert [(f.a, f.b) for f in enumerate_fields(X, chunk=997)] == _brute_fields(X)


def test_enumerate_window_is_open():
    ratios = [f.ratio for f in enumerate_fields(10 ** 6, (2, 5))]
    assert ratios and all(2 < r < 5 for r in ratios)
    full = [f for f in enumerate_fields(10 ** 6) if 2 < f.ratio < 5]
    assert len(full) == len(ratios)
    with pytest.raises(ValueError):
        list(enumerate_fields(1000, (3, 2)))
    with pytest.raises(ValueError):
        list(enumerate_fields(1000, (0.5, 2)))


def test_distinct_couples_distinct_keys():
    seen = {}
    for f in enumerate_fields(10 ** 7):
        key = (f.field_type, f.ratio)
        assert key not in seen
        seen[key] = f


def test_json_line():
    rec = json.loads(field_from_couple(7, 2).to_json_line())
    assert rec == {"a": 7, "b": 2, "m": 28, "m_prime": 98, "type": "II", "discriminant": -588,
                   "ratio_num": 7, "ratio_den": 2}
