"""Integer sieves, multiplicative-function sums and the Euler-product constants.

Everything here is built on numpy boolean/integer tables indexed directly by
``n`` (index 0 is unused padding).  The constants

    C     = prod_p (1 - 3/p^2 + 2/p^3)
    kappa = sum_p log(p) / (p^2 + p - 2)
    gamma = Euler-Mascheroni

are returned as :class:`ConstantEstimate` objects that carry a rigorous bound
on their truncation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

ZETA2 = math.pi ** 2 / 6


@dataclass(frozen=True)
class SquarefreeSieve:
    """``flags[n]`` is True iff ``n`` is squarefree, for ``1 <= n <= limit``."""

    limit: int
    flags: np.ndarray

    def __contains__(self, n: int) -> bool:
        return bool(self.flags[n])

    def count(self, upto: Optional[int] = None) -> int:
        upto = self.limit if upto is None else upto
        return int(np.count_nonzero(self.flags[1:upto + 1]))


@dataclass(frozen=True)
class MobiusSieve:
    limit: int
    values: np.ndarray  # int8, values[n] = mu(n)

    def __getitem__(self, n: int) -> int:
        return int(self.values[n])


@dataclass(frozen=True)
class ConstantEstimate:
    """A truncated series/product together with a bound on what was dropped.

    ``prime_bound`` is the truncation point: the largest prime admitted for
    the Euler products, or the harmonic-sum cutoff for Euler's constant.
    """

    value: float
    prime_bound: int
    tail_bound: float

    def __float__(self) -> float:
        return self.value


def _check_limit(limit: int) -> None:
    if int(limit) != limit or limit < 1:
        raise ValueError(f"sieve limit must be a positive integer, got {limit!r}")


def prime_flags(limit: int) -> np.ndarray:
    """Sieve of Eratosthenes; returns ``is_prime`` of length ``limit + 1``."""
    is_prime = np.ones(max(limit, 1) + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return is_prime


@lru_cache(maxsize=8)
def primes_upto(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    return np.flatnonzero(prime_flags(limit)).astype(np.int64)


def build_squarefree_sieve(limit: int) -> SquarefreeSieve:
    _check_limit(limit)
    flags = np.ones(limit + 1, dtype=bool)
    flags[0] = False
    for p in primes_upto(math.isqrt(limit)):
        p2 = int(p) * int(p)
        flags[p2::p2] = False
    flags.setflags(write=False)
    return SquarefreeSieve(limit, flags)


def build_mobius_sieve(limit: int) -> MobiusSieve:
    _check_limit(limit)
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in primes_upto(limit):
        p = int(p)
        mu[p::p] *= -1
        if p * p <= limit:
            mu[p * p::p * p] = 0
    mu.setflags(write=False)
    return MobiusSieve(limit, mu)


def squarefree_count(x: int, mobius: Optional[MobiusSieve] = None) -> int:
    """Q(x) = sum_{d <= sqrt x} mu(d) floor(x/d^2), without sieving up to x."""
    r = math.isqrt(x)
    if r == 0:
        return 0
    mobius = mobius if mobius is not None and mobius.limit >= r else build_mobius_sieve(r)
    d = np.arange(1, r + 1, dtype=np.int64)
    return int(np.sum(mobius.values[1:r + 1].astype(np.int64) * (x // (d * d))))


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    if n % 4 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        if n % d == 0:
            n //= d
        d += 2
    return True


def is_strongly_carefree(a: int, b: int) -> bool:
    """True iff ``a`` and ``b`` are coprime and both squarefree."""
    return math.gcd(a, b) == 1 and is_squarefree(a) and is_squarefree(b)


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of ``n`` by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def omega(n: int) -> int:
    return len(prime_factors(n))


def euler_phi(n: int) -> int:
    result = n
    for p in prime_factors(n):
        result -= result // p
    return result


# ---------------------------------------------------------------------------
# constants


def _check_prime_bound(prime_bound: int) -> None:
    if prime_bound < 2:
        raise ValueError(f"prime_bound must be >= 2, got {prime_bound}")


def euler_product_C(prime_bound: int) -> ConstantEstimate:
    """prod_{p <= P} (1 - 3/p^2 + 2/p^3) with a bound on the omitted factors.

    Each omitted factor satisfies -log(1 - 3/p^2 + 2/p^3) <= 4/p^2 and
    sum_{n > P} 1/n^2 <= 1/(P - 1), so the true constant lies in
    [value * exp(-4/(P-1)), value].
    """
    _check_prime_bound(prime_bound)
    p = primes_upto(prime_bound).astype(np.float64)
    log_value = math.fsum(np.log1p(-3.0 / p ** 2 + 2.0 / p ** 3))
    value = math.exp(log_value)
    tail = value * -math.expm1(-4.0 / (prime_bound - 1))
    return ConstantEstimate(value, prime_bound, tail)


def kappa(prime_bound: int) -> ConstantEstimate:
    """sum_{p <= P} log(p)/(p^2 + p - 2).

    Tail: log p/(p^2+p-2) <= log n/n^2, and log t/t^2 decreases for t >= 2,
    so sum_{n > P} log n/n^2 <= (log P + 1)/P.
    """
    _check_prime_bound(prime_bound)
    p = primes_upto(prime_bound).astype(np.float64)
    value = math.fsum(np.log(p) / (p * p + p - 2.0))
    tail = (math.log(prime_bound) + 1.0) / prime_bound
    return ConstantEstimate(value, prime_bound, tail)


def euler_gamma(cutoff: int = 100) -> ConstantEstimate:
    """Euler's constant from H_n - log n via Euler-Maclaurin.

    The correction terms through n^-6 are applied; the remainder is bounded
    by the next term 1/(240 n^8).  A 1e-15 allowance covers float rounding.
    """
    if cutoff < 10:
        raise ValueError("cutoff must be >= 10")
    n = cutoff
    harmonic = math.fsum(1.0 / k for k in range(1, n + 1))
    value = math.fsum([
        harmonic,
        -math.log(n),
        -1.0 / (2 * n),
        1.0 / (12 * n ** 2),
        -1.0 / (120 * n ** 4),
        1.0 / (252 * n ** 6),
    ])
    return ConstantEstimate(value, cutoff, 1.0 / (240 * n ** 8) + 1e-15)


# ---------------------------------------------------------------------------
# progression counts T, S and the Perron sum


def _check_admissible(a: int, a_prime: int, n: int) -> None:
    if a < 1 or n < 1:
        raise ValueError("a and n must be positive")
    if math.gcd(a, n) != 1 or math.gcd(a_prime, n) != 1:
        raise ValueError(f"need gcd(a, n) = gcd(a', n) = 1; got a={a}, a'={a_prime}, n={n}")


def _progression(a_prime: int, n: int, x: float) -> np.ndarray:
    """All b in [1, x] with b = a' (mod n)."""
    start = a_prime % n or n
    return np.arange(start, math.floor(x) + 1, n, dtype=np.int64)


def count_T(a: int, a_prime: int, n: int, x: float) -> int:
    """#{b <= x : gcd(a, b) = 1, b = a' mod n}, by enumeration."""
    _check_admissible(a, a_prime, n)
    b = _progression(a_prime, n, x)
    return int(np.count_nonzero(np.gcd(b, a) == 1))


def formula_T(a: int, n: int, x: float) -> float:
    return euler_phi(a) * x / (a * n)


def count_S(a: int, a_prime: int, n: int, x: float,
            sieve: Optional[SquarefreeSieve] = None) -> int:
    """Like :func:`count_T` but only squarefree ``b`` are counted."""
    _check_admissible(a, a_prime, n)
    top = max(1, math.floor(x))
    if sieve is None or sieve.limit < top:
        sieve = build_squarefree_sieve(top)
    b = _progression(a_prime, n, x)
    return int(np.count_nonzero(sieve.flags[b] & (np.gcd(b, a) == 1)))


def formula_S(a: int, n: int, x: float) -> float:
    local = 1.0
    for p in prime_factors(a * n):
        local *= p * p / (p * p - 1.0)
    return formula_T(a, n, x) / ZETA2 * local


def _carefree_weights(x: int, n: int) -> np.ndarray:
    """w[a] = mu^2(a) prod_{p | a} 1/(p+1), zeroed where gcd(a, n) > 1."""
    w = np.ones(x + 1, dtype=np.float64)
    w[0] = 0.0
    for p in primes_upto(x):
        p = int(p)
        w[p::p] /= p + 1
        if p * p <= x:
            w[p * p::p * p] = 0.0
    for p in prime_factors(n):
        w[p::p] = 0.0
    return w


def perron_main_term(k: int, n: int, x: float, prime_bound: int = 10 ** 6) -> float:
    """Residue main term for sum_{a <= x, (a,n)=1} A_k(a)."""
    C = euler_product_C(prime_bound).value
    h0 = ZETA2 * C
    for p in prime_factors(n):
        h0 /= 1.0 + 1.0 / (p + 1)
    if k > 0:
        return h0 * x ** k / k
    log_derivative = 3 * kappa(prime_bound).value + sum(
        math.log(p) / (p + 2) for p in prime_factors(n))
    return h0 * (math.log(x) + euler_gamma().value + log_derivative)


def perron_sum(k: int, n: int, x: float, prime_bound: int = 10 ** 6) -> tuple[float, float]:
    """Return ``(exact_sum, main_term)`` for A_k(a) = mu^2(a) prod_{p|a} p^k/(p+1).

    The exact side is a sieve over ``a <= x``; it uses A_k(a) = a^k A_0(a).
    """
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    if x < 2:
        raise ValueError("need x >= 2")
    top = math.floor(x)
    w = _carefree_weights(top, n)
    if k > 0:
        w *= np.arange(top + 1, dtype=np.float64) ** k
    return math.fsum(w), perron_main_term(k, n, x, prime_bound)


# ---------------------------------------------------------------------------
# carefree-couple scanning shared by field enumeration and the census


def scan_carefree(b_values: range, a_range, sieve: SquarefreeSieve) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(b, a_array)`` for squarefree ``b`` in ``b_values``.

    ``a_range(b)`` gives an inclusive integer interval ``(lo, hi)``; the
    yielded array holds the ``a`` in it that are squarefree and coprime to
    ``b``.  ``sieve`` must cover every ``hi``.
    """
    flags = sieve.flags
    for b in b_values:
        if not flags[b]:
            continue
        lo, hi = a_range(b)
        lo = max(lo, 1)
        if hi < lo:
            continue
        if hi > sieve.limit:
            raise ValueError(f"sieve limit {sieve.limit} below required {hi}")
        a = np.arange(lo, hi + 1, dtype=np.int64)
        a = a[flags[lo:hi + 1]]
        if b > 1:
            a = a[np.gcd(a, b) == 1]
        yield b, a


def type_ii_mask(a: np.ndarray, b) -> np.ndarray:
    """3 does not divide ab and a^2 = b^2 (mod 9), elementwise."""
    a9 = np.asarray(a) % 9
    b9 = np.asarray(b) % 9
    return (a9 % 3 != 0) & (b9 % 3 != 0) & ((a9 * a9 - b9 * b9) % 9 == 0)
