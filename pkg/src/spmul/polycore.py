"""Sparse multivariate polynomials over Z.

A polynomial is a canonical sequence of (exponent vector, coefficient)
terms: exponent vectors pairwise distinct, strictly decreasing
lexicographic order, no zero coefficients.  Values are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Tuple

Exponents = Tuple[int, ...]
TermPair = Tuple[Exponents, int]


class PolyError(ValueError):
    pass


class ParseError(PolyError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class PolyStats:
    total_degree: int
    term_count: int
    power_count: int
    height: int


class SparsePoly:
    """Canonical sparse polynomial in ``n`` variables."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Iterable[TermPair] = ()):
        if n < 1:
            raise PolyError("variable count must be >= 1")
        merged: dict[Exponents, int] = {}
        for exp, coeff in terms:
            exp = tuple(exp)
            if len(exp) != n:
                raise PolyError(f"exponent vector {exp} has arity {len(exp)}, expected {n}")
            if any(e < 0 for e in exp):
                raise PolyError(f"negative exponent in {exp}")
            merged[exp] = merged.get(exp, 0) + coeff
        canon = tuple(
            (exp, c) for exp, c in sorted(merged.items(), reverse=True) if c != 0
        )
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", canon)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    @classmethod
    def _raw(cls, n: int, canon_terms: Tuple[TermPair, ...]) -> "SparsePoly":
        # trusted constructor: terms already canonical
        self = object.__new__(cls)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", canon_terms)
        return self

    @classmethod
    def zero(cls, n: int) -> "SparsePoly":
        return cls._raw(n, ())

    @classmethod
    def constant(cls, n: int, c: int) -> "SparsePoly":
        if c == 0:
            return cls.zero(n)
        return cls._raw(n, (((0,) * n, c),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self) -> Iterator[TermPair]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparsePoly)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.n, self.terms))

    def __repr__(self) -> str:
        return f"SparsePoly(n={self.n}, {len(self.terms)} terms)"

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        _check_arity(self, other)
        return SparsePoly(self.n, list(self.terms) + list(other.terms))

    def __neg__(self) -> "SparsePoly":
        return SparsePoly._raw(self.n, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def map_coeffs(self, f) -> "SparsePoly":
        """Apply ``f`` to every coefficient, dropping terms that map to 0."""
        return SparsePoly._raw(
            self.n, tuple((e, fc) for e, c in self.terms if (fc := f(c)) != 0)
        )


def _check_arity(p: SparsePoly, q: SparsePoly) -> None:
    if p.n != q.n:
        raise PolyError(f"variable count mismatch: {p.n} vs {q.n}")


def poly_stats(p: SparsePoly) -> PolyStats:
    """Total degree, term count, nonzero-power count, and coefficient height.

    The zero polynomial maps to (0, 0, 0, 0) by convention.
    """
    if p.is_zero:
        return PolyStats(0, 0, 0, 0)
    d = max(sum(e) for e, _ in p.terms)
    s = sum(1 for e, _ in p.terms for x in e if x > 0)
    h = max(abs(c) for _, c in p.terms)
    return PolyStats(d, len(p.terms), s, h)


def naive_mul(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    """Exact schoolbook product; the correctness oracle for everything else."""
    _check_arity(p, q)
    acc: dict[Exponents, int] = {}
    for pe, pc in p.terms:
        for qe, qc in q.terms:
            key = tuple(a + b for a, b in zip(pe, qe))
            acc[key] = acc.get(key, 0) + pc * qc
    canon = tuple((e, c) for e, c in sorted(acc.items(), reverse=True) if c != 0)
    return SparsePoly._raw(p.n, canon)


# ---------------------------------------------------------------------------
# .sp text format

def serialize(p: SparsePoly) -> str:
    """Canonical `.sp` text: header line, then one `coeff e1 .. en` per term."""
    lines = [f"SP1 n={p.n}"]
    for exp, coeff in p.terms:
        lines.append(" ".join([str(coeff)] + [str(e) for e in exp]))
    return "\n".join(lines) + "\n"


def parse_poly(text: str) -> SparsePoly:
    """Parse the `.sp` format; raises ParseError with a line number."""
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty input")
    header = lines[0].split("#", 1)[0].strip()
    parts = header.split()
    if len(parts) != 2 or parts[0] != "SP1" or not parts[1].startswith("n="):
        raise ParseError(f"malformed header {lines[0]!r}", line=1)
    try:
        n = int(parts[1][2:])
    except ValueError:
        raise ParseError(f"malformed variable count {parts[1]!r}", line=1)
    if n < 1:
        raise ParseError("variable count must be >= 1", line=1)
    terms = []
    for lineno, raw in enumerate(lines[1:], start=2):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        toks = body.split()
        if len(toks) != n + 1:
            raise ParseError(
                f"expected {n + 1} fields, got {len(toks)}", line=lineno
            )
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            raise ParseError(f"non-integer token in {body!r}", line=lineno)
        exp = tuple(vals[1:])
        if any(e < 0 for e in exp):
            raise ParseError("negative exponent", line=lineno)
        terms.append((exp, vals[0]))
    return SparsePoly(n, terms)


# ---------------------------------------------------------------------------
# Random generation

def _count_monomials(n: int, d: int) -> int:
    return math.comb(d + n, n)


def random_poly(
    n: int, t: int, d: int, height_bound: int, seed: int
) -> SparsePoly:
    """Exactly ``t`` distinct exponent vectors of total degree <= ``d``,
    coefficients uniform nonzero in [-height_bound, height_bound].
    Deterministic in ``seed``."""
    if n < 1 or t < 0 or d < 0 or height_bound < 1:
        raise PolyError("bad random_poly parameters")
    total = _count_monomials(n, d)
    if t > total:
        raise PolyError(f"t={t} exceeds the {total} monomials of degree <= {d}")
    rng = random.Random(seed)
    exps: set[Exponents] = set()
    if 2 * t > total:
        # dense regime: enumerate and sample without replacement
        universe = list(_monomials_up_to(n, d))
        exps = set(map(tuple, rng.sample(universe, t)))
    else:
        while len(exps) < t:
            e = tuple(rng.randint(0, d) for _ in range(n))
            if sum(e) <= d:
                exps.add(e)
    terms = []
    for e in sorted(exps, reverse=True):
        c = rng.randint(1, height_bound)
        if rng.random() < 0.5:
            c = -c
        terms.append((e, c))
    return SparsePoly._raw(n, tuple(terms))


def _monomials_up_to(n: int, d: int):
    if n == 0:
        yield ()
        return
    for e in range(d + 1):
        for rest in _monomials_up_to(n - 1, d - e):
            yield (e,) + rest


# ---------------------------------------------------------------------------
# Kronecker substitution

def kronecker(p: SparsePoly, bounds: Sequence[int]) -> SparsePoly:
    """Pack a multivariate polynomial into one variable by mixed-radix
    positional encoding: x1^a1..xn^an -> x^(a1 + a2*b1 + a3*b1*b2 + ...)."""
    if len(bounds) != p.n:
        raise PolyError("bounds arity mismatch")
    if any(b < 1 for b in bounds):
        raise PolyError("bounds must be >= 1")
    terms = []
    for exp, coeff in p.terms:
        packed = 0
        radix = 1
        for e, b in zip(exp, bounds):
            if e >= b:
                raise PolyError(f"exponent {e} >= bound {b}")
            packed += e * radix
            radix *= b
        terms.append(((packed,), coeff))
    return SparsePoly(1, terms)


def unkronecker(p: SparsePoly, bounds: Sequence[int]) -> SparsePoly:
    """Inverse of :func:`kronecker` for the same bounds."""
    if p.n != 1:
        raise PolyError("unkronecker expects a univariate polynomial")
    n = len(bounds)
    terms = []
    for (packed,), coeff in p.terms:
        exp = []
        v = packed
        for b in bounds:
            exp.append(v % b)
            v //= b
        if v != 0:
            raise PolyError(f"packed exponent {packed} out of range for bounds")
        terms.append((tuple(exp), coeff))
    return SparsePoly(n, terms)


# ---------------------------------------------------------------------------
# Randomized product verification

def eval_mod(p: SparsePoly, point: Sequence[int], m: int) -> int:
    """Evaluate ``p`` at ``point`` modulo ``m``."""
    acc = 0
    for exp, coeff in p.terms:
        v = coeff % m
        for a, e in zip(point, exp):
            if e:
                v = v * pow(a, e, m) % m
        acc = (acc + v) % m
    return acc


def verify_product(
    p: SparsePoly, q: SparsePoly, r: SparsePoly, seed: int
) -> bool:
    """Check R = PQ at a random point modulo a random word-size prime.

    False means R != PQ for certain; True means equality with high
    probability (error ~ total degree / prime).
    """
    _check_arity(p, q)
    _check_arity(p, r)
    from . import numtheory

    rng = random.Random(seed)
    m = numtheory.random_prime(2**61, 2**62, rng)
    point = [rng.randrange(m) for _ in range(p.n)]
    lhs = eval_mod(p, point, m) * eval_mod(q, point, m) % m
    return lhs == eval_mod(r, point, m)
