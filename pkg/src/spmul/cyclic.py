"""Arithmetic in A[u]/(u^r - 1) for A = Z or a prime field, and evaluation
of sparse polynomials at power-of-u points.

The dense cyclic multiplication is tiered: schoolbook below a crossover,
big-integer packed (Kronecker segmentation) convolution through GMP above
it.  Both paths are exact; the result is folded modulo r and, for a prime
field, reduced modulo the characteristic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import gmpy2

from .polycore import SparsePoly

SCHOOLBOOK_CROSSOVER = 64


class IntegerDomain:
    """Arbitrary-precision integers."""

    modulus: Optional[int] = None

    def normalize(self, x: int) -> int:
        return x

    def __repr__(self):
        return "IntegerDomain()"

    def __eq__(self, other):
        return isinstance(other, IntegerDomain)

    def __hash__(self):
        return hash("IntegerDomain")


class PrimeField:
    """Z/pZ for a prime p; elements are canonical representatives."""

    def __init__(self, p: int):
        if p < 2:
            raise ValueError("modulus must be >= 2")
        self.modulus = p

    def normalize(self, x: int) -> int:
        return x % self.modulus

    def inv(self, x: int) -> int:
        return int(gmpy2.invert(x, self.modulus))

    def __repr__(self):
        return f"PrimeField({self.modulus})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("PrimeField", self.modulus))


ZZ = IntegerDomain()


@dataclass
class CyclicPoly:
    """Dense length-r residue sequence; index j holds the u^j coefficient."""

    r: int
    coeffs: List[int]
    domain: object = ZZ

    def __post_init__(self):
        if self.r < 1 or len(self.coeffs) != self.r:
            raise ValueError("coefficient sequence must have length r >= 1")

    @classmethod
    def zero(cls, r: int, domain=ZZ) -> "CyclicPoly":
        return cls(r, [0] * r, domain)

    def copy(self) -> "CyclicPoly":
        return CyclicPoly(self.r, list(self.coeffs), self.domain)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, CyclicPoly)
            and self.r == other.r
            and self.domain == other.domain
            and self.coeffs == other.coeffs
        )

    def __sub__(self, other: "CyclicPoly") -> "CyclicPoly":
        if self.r != other.r or self.domain != other.domain:
            raise ValueError("length/domain mismatch")
        d = self.domain
        m = d.modulus
        if m is not None:
            coeffs = [(a - b) % m for a, b in zip(self.coeffs, other.coeffs)]
        else:
            coeffs = [a - b for a, b in zip(self.coeffs, other.coeffs)]
        return CyclicPoly(self.r, coeffs, d)


def _check_pair(a: CyclicPoly, b: CyclicPoly) -> None:
    if a.r != b.r:
        raise ValueError(f"length mismatch: {a.r} vs {b.r}")
    if a.domain != b.domain:
        raise ValueError("domain mismatch")


def _schoolbook(a: Sequence[int], b: Sequence[int], r: int) -> List[int]:
    out = [0] * r
    for i, ai in enumerate(a):
        if ai:
            for k, bk in enumerate(b):
                if bk:
                    out[(i + k) % r] += ai * bk
    return out


def _sparse_schoolbook(
    a_items: List[tuple], b_items: List[tuple], r: int, mod: Optional[int]
) -> List[int]:
    out = [0] * r
    for i, ai in a_items:
        for k, bk in b_items:
            out[(i + k) % r] += ai * bk
    if mod is not None:
        return [x % mod for x in out]
    return out


def _packed_signed(v: Sequence[int], s: int) -> "gmpy2.mpz":
    """sum v_i 2^(s*i) for signed v with |v_i| < 2^(s-1)."""
    if any(x < 0 for x in v):
        pos = gmpy2.pack([x if x > 0 else 0 for x in v], s)
        neg = gmpy2.pack([-x if x < 0 else 0 for x in v], s)
        return pos - neg
    return gmpy2.pack(list(v), s)


def _packed_convolution(
    a: Sequence[int], b: Sequence[int], r: int,
    bound: Optional[int] = None, mod: Optional[int] = None,
) -> List[int]:
    if bound is not None:
        # inputs known nonnegative and <= bound: no sign handling, and the
        # linear convolution itself is nonnegative, so no offset is needed
        if bound == 0:
            return [0] * r
        big = r * bound * bound
        s = big.bit_length() + 2
        prod = gmpy2.pack(list(a), s) * gmpy2.pack(list(b), s)
        # wrap u^r -> 1 in packed form: digits are <= big and s has two
        # guard bits, so adding the top half cannot carry between digits
        high = prod >> (s * r)
        folded = prod - (high << (s * r)) + high
        if mod is not None:
            out = [v % mod for v in gmpy2.unpack(folded, s)]
        else:
            out = [int(v) for v in gmpy2.unpack(folded, s)]
        return out + [0] * (r - len(out))  # unpack drops leading zero digits
    max_a = max((abs(x) for x in a), default=0)
    max_b = max((abs(x) for x in b), default=0)
    if max_a == 0 or max_b == 0:
        return [0] * r
    big = r * max_a * max_b  # strict bound on |linear conv coefficient| + offset room
    s = big.bit_length() + 2
    prod = _packed_signed(a, s) * _packed_signed(b, s)
    # shift every slot by +big so the digits of prod+offset are the (nonnegative)
    # slot values big + c_j, then fold the top half as above; folded digit j
    # carries offset 2*big except the unpaired top slot j = r-1
    slots = 2 * r - 1
    offset = big * ((gmpy2.mpz(1) << (s * slots)) - 1) // ((gmpy2.mpz(1) << s) - 1)
    shifted = prod + offset
    high = shifted >> (s * r)
    folded = shifted - (high << (s * r)) + high
    lin = gmpy2.unpack(folded, s)
    if len(lin) < r:
        lin = list(lin) + [0] * (r - len(lin))
    two = 2 * big
    out = [int(v) - two for v in lin]
    out[r - 1] += big
    return out


mul_seconds = 0.0  # cumulative wall time spent inside cyclic_mul


def reset_mul_timer() -> None:
    global mul_seconds
    mul_seconds = 0.0


def cyclic_mul(a: CyclicPoly, b: CyclicPoly,
               crossover: int = SCHOOLBOOK_CROSSOVER) -> CyclicPoly:
    """Exact product in A[u]/(u^r - 1): c_j = sum_{i+k = j mod r} a_i b_k."""
    global mul_seconds
    t0 = time.perf_counter()
    _check_pair(a, b)
    r = a.r
    d = a.domain
    if r < crossover:
        out = _schoolbook(a.coeffs, b.coeffs, r)
        if d.modulus is not None:
            out = [x % d.modulus for x in out]
    else:
        a_items = [(i, x) for i, x in enumerate(a.coeffs) if x]
        b_items = [(i, x) for i, x in enumerate(b.coeffs) if x]
        if len(a_items) * len(b_items) <= 8 * r:
            # evaluation transcripts are often far sparser than their
            # length; term-by-term beats the packed dense convolution then
            out = _sparse_schoolbook(a_items, b_items, r, d.modulus)
        elif d.modulus is not None:
            m = d.modulus
            ca = [x % m for x in a.coeffs]
            cb = [x % m for x in b.coeffs]
            out = _packed_convolution(ca, cb, r, bound=m - 1, mod=m)
        else:
            out = _packed_convolution(a.coeffs, b.coeffs, r)
    mul_seconds += time.perf_counter() - t0
    return CyclicPoly(r, out, d)


def _power_tables(weights: Sequence[int], max_exps: Sequence[int], domain) -> List[List[int]]:
    mod = domain.modulus
    tables = []
    for w, m in zip(weights, max_exps):
        row = [1] * (m + 1)
        acc = 1
        for e in range(1, m + 1):
            acc = acc * w
            if mod is not None:
                acc %= mod
            row[e] = acc
        tables.append(row)
    return tables


def eval_at_powers(
    p: SparsePoly,
    lam: Sequence[int],
    r: int,
    domain=ZZ,
    weights: Optional[Sequence[int]] = None,
) -> CyclicPoly:
    """Image of ``p`` under x_j -> w_j * u^lam_j in A[u]/(u^r - 1).

    Each term c*x^e contributes c * prod w_j^e_j to slot (lam . e) mod r.
    """
    if len(lam) != p.n:
        raise ValueError("lambda arity mismatch")
    mod = domain.modulus
    tables = None
    if weights is not None:
        if len(weights) != p.n:
            raise ValueError("weights arity mismatch")
        if mod is not None:
            for w in weights:
                if math.gcd(w % mod, mod) != 1:
                    raise ValueError(f"weight {w} not invertible modulo {mod}")
        max_exps = [0] * p.n
        for exp, _ in p.terms:
            for j, e in enumerate(exp):
                if e > max_exps[j]:
                    max_exps[j] = e
        if max(max_exps, default=0) <= 1 << 16:
            tables = _power_tables(weights, max_exps, domain)
    coeffs = [0] * r
    for exp, c in p.terms:
        slot = 0
        v = c
        for j, e in enumerate(exp):
            if e:
                slot += lam[j] * e
                if weights is not None:
                    if tables is not None:
                        v *= tables[j][e]
                    elif mod is not None:
                        v *= pow(weights[j], e, mod)
                    else:
                        v *= weights[j] ** e
                    if mod is not None:
                        v %= mod
        coeffs[slot % r] += v
    if mod is not None:
        coeffs = [x % mod for x in coeffs]
    return CyclicPoly(r, coeffs, domain)


def sub_monomial(rc: CyclicPoly, c: int, slot: int) -> None:
    """Subtract ``c`` from the accumulator at ``slot`` (in place)."""
    if not 0 <= slot < rc.r:
        raise ValueError(f"slot {slot} out of range [0, {rc.r})")
    rc.coeffs[slot] = rc.domain.normalize(rc.coeffs[slot] - c)
