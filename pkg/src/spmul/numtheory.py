"""Prime tables, random primes, and smooth factorization over a fixed
prime basis."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple


@dataclass(frozen=True)
class PrimeBasis:
    """The first n primes p_1 < ... < p_n plus a degree bound d and the
    derived magnitude bound B = p_n ** d."""

    primes: Tuple[int, ...]
    d: int
    B: int

    @property
    def n(self) -> int:
        return len(self.primes)


@dataclass(frozen=True)
class Modulus:
    value: int


def first_primes(n: int, d: int = 1) -> PrimeBasis:
    """Exact first ``n`` primes via a sieve; B = p_n ** d."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if d < 0:
        raise ValueError("d must be >= 0")
    # p_n < n (ln n + ln ln n) for n >= 6
    limit = 15 if n < 6 else int(n * (math.log(n) + math.log(math.log(n)))) + 10
    while True:
        sieve = bytearray([1]) * (limit + 1)
        sieve[0] = sieve[1] = 0
        for i in range(2, int(limit**0.5) + 1):
            if sieve[i]:
                sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
        primes = [i for i in range(limit + 1) if sieve[i]]
        if len(primes) >= n:
            primes = primes[:n]
            break
        limit *= 2
    return PrimeBasis(tuple(primes), d, primes[-1] ** d)


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_probable_prime(n: int, rounds: int = 64) -> bool:
    """Miller-Rabin strong probable-prime test, error < 4**-rounds.

    Witness choice is deterministic in ``n`` so results are reproducible.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = random.Random(n)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(lo: int, hi: int, rng: random.Random | int, max_tries: int | None = None) -> int:
    """Uniformly sampled prime in the closed interval [lo, hi].

    The caller guarantees the interval contains a prime; a retry budget
    turns an implausible interval into an error instead of a hang.
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    if hi < lo or hi < 2:
        raise ValueError(f"empty prime interval [{lo}, {hi}]")
    if max_tries is None:
        # prime density ~ 1/ln(hi); give a generous margin
        max_tries = 64 * (hi.bit_length() + 2)
    for _ in range(max_tries):
        c = rng.randint(lo, hi)
        if is_probable_prime(c):
            return c
    raise ValueError(f"no prime found in [{lo}, {hi}] after {max_tries} tries")


def choose_pi(B: int, T: int, eps: float, seed: random.Random | int) -> Modulus:
    """A prime between ceil(B*T/eps) and twice that."""
    if B < 2 or T < 1 or not 0 < eps < 1:
        raise ValueError("need B >= 2, T >= 1, 0 < eps < 1")
    m = -((-B * T) // Fraction(eps))  # ceil(B*T/eps), exact
    m = int(m)
    return Modulus(random_prime(m, 2 * m, seed))


def choose_reduction_prime(t: int, coeff_bits: int, seed: random.Random | int,
                           min_value: int = 0) -> Modulus:
    """A random prime in (2^b, 2^{b+1}) with b = max(30, ceil(log2(10*t*B)))
    so that a t-term polynomial with coefficients below 2^B keeps its
    exponent set under reduction with probability >= 1 - 5tB/2^b.

    ``min_value`` optionally forces a larger prime (bumps b).
    """
    if t < 1 or coeff_bits < 1:
        raise ValueError("need t >= 1 and coeff_bits >= 1")
    b = max(30, (10 * t * coeff_bits - 1).bit_length())
    while (1 << b) < min_value:
        b += 1
    return Modulus(random_prime((1 << b) + 1, (1 << (b + 1)) - 1, seed))


def _ilog(v: int, p: int) -> int:
    k = 0
    while v > 1:
        v //= p
        k += 1
    return k


def smooth_factor(q: int, basis: PrimeBasis, d: int | None = None) -> Optional[Tuple[int, ...]]:
    """Exponents (k_1..k_n) with q = p_1^k_1 ... p_n^k_n and sum k_i <= d,
    or None if no such factorization exists.

    Prime divisors are located by gcd against halved products of the
    basis primes, then each multiplicity comes from gcd(q, p^d) and an
    exact integer logarithm.
    """
    if d is None:
        d = basis.d
    if q <= 0:
        return None
    n = basis.n
    ks = [0] * n
    if q == 1:
        return tuple(ks)

    hits: list[int] = []

    def descend(g: int, lo: int, hi: int) -> None:
        # g divides q and the product of primes[lo:hi]
        if g == 1:
            return
        if hi - lo == 1:
            hits.append(lo)
            return
        mid = (lo + hi) // 2
        left = math.prod(basis.primes[lo:mid])
        right = math.prod(basis.primes[mid:hi])
        descend(math.gcd(g, left), lo, mid)
        descend(math.gcd(g, right), mid, hi)

    descend(math.gcd(q, math.prod(basis.primes)), 0, n)
    if not hits:
        return None
    rem = q
    total = 0
    for j in hits:
        p = basis.primes[j]
        pk = math.gcd(rem, p**d)
        k = _ilog(pk, p)
        ks[j] = k
        total += k
        rem //= pk
    if rem != 1 or total > d:
        return None
    return tuple(ks)
