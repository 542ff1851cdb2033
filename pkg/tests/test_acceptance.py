"""Acceptance criteria 1-9, each at its stated tolerance.

Every test prints one ``[ACCEPTANCE n] PASS|FAIL ...`` line with the observed
deviation so tolerances can be tightened empirically.  Run with::

    pytest tests/test_acceptance.py -v
"""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from cubeshape import census
from cubeshape.arith import (build_squarefree_sieve, count_S, count_T, euler_product_C, formula_S, formula_T,
                             omega, perron_sum)
from cubeshape.field import FieldType, canonicalize, enumerate_fields
from cubeshape.shape import (TYPE_II_ARCS, cbrt, gauss_reduce, gram_perp, in_fundamental_domain,
                             numeric_embedding_gram, point_from_gram, projected_gram_numeric, shape,
                             type_ii_interval, verify_injectivity)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[ACCEPTANCE {n}] {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail
    return emit


def _fields_ab_upto(limit):
    # Type II fields with ab <= limit need |disc| <= 3 limit^2, Type I 27 limit^2
    return [f for f in enumerate_fields(27 * limit * limit) if f.a * f.b <= limit]


def test_1_exact_shape_formulas(report):
    f6, f12 = canonicalize(6), canonicalize(12)
    p6, p12 = shape(f6), shape(f12)
    exact = (p6.x == 0 and p6.y_cubed == 6 and p12.x == 0 and p12.y_cubed == Fraction(3, 2)
             and f6.discriminant == f12.discriminant == -972)
    dev = max(abs(p6.z - 1j * 6 ** (1 / 3)), abs(p12.z - 1j * 1.5 ** (1 / 3)))
    report(1, exact and dev <= 1e-12, f"exact fields match={exact}; float deviation {dev:.2e} (tol 1e-12)")


def test_2_pipeline_equivalence(report):
    fields = _fields_ab_upto(10 ** 4)
    worst_point = worst_gram = worst_det = 0.0
    for f in fields:
        x, y = point_from_gram(gram_perp(f).evaluate())
        worst_point = max(worst_point, abs(complex(x, y) - shape(f, reduce=False).z))
        exact = gram_perp(f).evaluate() * cbrt(f.m) ** 2
        num = projected_gram_numeric(f)
        worst_gram = max(worst_gram, float(np.max(np.abs(num - exact)) / np.max(np.abs(exact))))
        worst_det = max(worst_det, abs(np.linalg.det(numeric_embedding_gram(f)) / -f.discriminant - 1))
    ok = worst_point <= 1e-12 and worst_gram <= 1e-9 and worst_det <= 1e-9
    report(2, ok, f"{len(fields)} fields; closed form {worst_point:.2e} (tol 1e-12); "
                  f"embedding Gram rel {worst_gram:.2e}, det rel {worst_det:.2e} (tol 1e-9)")


def test_3_fundamental_domain_reduction(report):
    fields = [f for f in _fields_ab_upto(10 ** 4) if f.field_type is FieldType.II]
    worst_locus = worst_gauss = 0.0
    outside = 0
    for f in fields:
        w = shape(f).reduced_z
        outside += not in_fundamental_domain(w, tol=1e-12)
        i = type_ii_interval(f.ratio)
        if i == 0:
            d = abs(w.real - 1 / 3)
        else:
            c, r = TYPE_II_ARCS[i]
            d = abs(abs(w - c) - r)
        worst_locus = max(worst_locus, d)
        g, _ = gauss_reduce(gram_perp(f).evaluate())
        worst_gauss = max(worst_gauss, abs(g - w))
    ok = outside == 0 and worst_locus <= 1e-9 and worst_gauss <= 1e-9
    report(3, ok, f"{len(fields)} Type II fields; outside F: {outside}; locus {worst_locus:.2e}; "
                  f"Gauss oracle {worst_gauss:.2e} (tol 1e-9)")


def test_4_injectivity(report):
    rep = verify_injectivity(enumerate_fields(10 ** 10))
    report(4, rep.ok, f"{rep.n_fields} fields with |disc| <= 1e10; collisions {rep.n_collisions}; "
                      f"6 vs 12 same disc={rep.witness_same_discriminant}, distinct={rep.witness_distinct_shapes}")


def test_5_carefree_asymptotic(report):
    N, R = 10 ** 7, 10
    C = euler_product_C(10 ** 6).value
    c = census.count_couples(N, R)
    r_total = c.total / (N * math.log(R)) / C
    r_ii = (c.type_ii / c.total) / 0.2
    r_i = (c.type_i / c.total) / 0.8
    devs = [abs(r_total - 1), abs(r_ii - 1), abs(r_i - 1)]
    report(5, max(devs) <= 0.05, f"S={c.total}: S/(N log R)/C={r_total:.5f}, (S_II/S)/(1/5)={r_ii:.5f}, "
                                 f"(S_I/S)/(4/5)={r_i:.5f} (tol 5%)")


def test_6_field_count_asymptotics(report):
    X = 10 ** 12
    C = euler_product_C(10 ** 6).value
    fc = census.count_fields(X, 1, 8, check=True)
    scale = math.sqrt(X) * math.log(8)
    r_i = fc.n_i / scale / (2 * C / (15 * math.sqrt(3)))
    r_ii = fc.n_ii / scale / (C / (10 * math.sqrt(3)))
    r_t = fc.n_total / scale / (7 * C / (30 * math.sqrt(3)))
    ok = abs(r_i - 1) <= 0.05 and abs(r_ii - 1) <= 0.10 and abs(r_t - 1) <= 0.05
    report(6, ok, f"N_I={fc.n_i} ratio {r_i:.5f} (tol 5%), N_II={fc.n_ii} ratio {r_ii:.5f} (tol 10%), "
                  f"total ratio {r_t:.5f} (tol 5%)")


def test_7_equidistribution(report):
    X = 10 ** 12
    C = euler_product_C(10 ** 6)
    worst = 0.0
    additive = True
    for t in FieldType:
        em = census.empirical_measure(t, X, (1, 2, 4, 8), C)
        worst = max(worst, max(abs(m / math.log(2) - 1) for m in em.masses))
        whole = census.empirical_measure(t, X, (1, 8), C)
        additive &= sum(em.exact_masses) == whole.exact_masses[0] and sum(em.counts) == whole.counts[0]
    rows = census.convergence_table(FieldType.I, (1, 2), [10 ** 8, 10 ** 10, 10 ** 12], C)
    devs = [r.deviation for r in rows]
    ok = worst <= 0.10 and additive and devs[-1] < devs[0]
    report(7, ok, f"worst bin rel deviation {worst:.4f} (tol 10%); additivity exact={additive}; "
                  f"Type I [1,2) deviations {', '.join(f'{d:.4f}' for d in devs)}")


def test_8_progression_error_bounds(report):
    rng = random.Random(8)
    sieve = build_squarefree_sieve(10 ** 6)
    worst_T = worst_S = 0.0
    n_tuples = 0
    while n_tuples < 200:
        a = rng.randint(1, 10 ** 4)
        n = rng.choice([1, 2, 3, 4, 5, 7, 9, 12, 16, 25])
        ap = rng.randint(0, 10 * n)
        if math.gcd(a, n) != 1 or math.gcd(ap, n) != 1:
            continue
        x = rng.uniform(1, 10 ** 6)
        n_tuples += 1
        w = 2 ** omega(a)
        worst_T = max(worst_T, abs(count_T(a, ap, n, x) - formula_T(a, n, x)) / (2 * w))
        worst_S = max(worst_S, abs(count_S(a, ap, n, x, sieve) - formula_S(a, n, x)) / (4 * w * math.sqrt(x)))
    perron = []
    for n in (1, 9):
        s, main = perron_sum(0, n, 10 ** 7)
        perron.append(abs(s / main - 1))
    region_bad = 0
    for _ in range(100):
        N, R = rng.uniform(1, 10 ** 4), rng.uniform(1, 20)
        region_bad += census.count_couples_by_regions(N, R).combined != census.count_couples(N, R).total
    ok = worst_T <= 1 and worst_S <= 1 and max(perron) <= 0.01 and region_bad == 0
    report(8, ok, f"T error/bound max {worst_T:.3f}, S error/bound max {worst_S:.3f} (<= 1); Perron rel "
                  f"n=1 {perron[0]:.2e}, n=9 {perron[1]:.2e} (tol 1%); region mismatches {region_bad}/100")


def test_9_constants(report):
    C6, C7 = euler_product_C(10 ** 6), euler_product_C(10 ** 7)
    diff = abs(C6.value - C7.value)
    ratio = census.NORMALIZER_COEFF[FieldType.I] / census.NORMALIZER_COEFF[FieldType.II]
    ok = C6.tail_bound < 1e-5 and diff <= C6.tail_bound and ratio == Fraction(4, 3)
    report(9, ok, f"C(1e6)={C6.value:.12f}, C(1e7)={C7.value:.12f}, |diff| {diff:.2e} <= tail {C6.tail_bound:.2e}; "
                  f"C_I/C_II = {ratio}")
