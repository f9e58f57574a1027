"""End-to-end heuristic sparse multiplication: coefficient recovery over a
known support, exponent discovery through prime-weighted twin evaluations,
and the supersparse univariate variant with derivative-weighted channels.

All randomness flows from a single seed through :func:`split_seed`, so
every probabilistic result is reproducible from (inputs, seed).
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Set, Tuple

import gmpy2

from . import numtheory
from .cyclic import ZZ, CyclicPoly, PrimeField, cyclic_mul, eval_at_powers
from .peeling import ThrowAssignment, play_discovery, play_known_support
from .polycore import SparsePoly, naive_mul, poly_stats, verify_product

MAX_SLOTS = 1 << 26


@dataclass(frozen=True)
class RecoveryParams:
    tau: float = 0.45
    eps: float = 2.0**-20
    T: Optional[int] = None
    seed: int = 0
    retries: int = 3

    def __post_init__(self):
        if not 0 < self.tau <= 1.5:
            raise ValueError("tau out of range (0, 1.5]")
        if not 0 < self.eps < 1:
            raise ValueError("eps out of range (0, 1)")


def split_seed(seed: int, label: str) -> int:
    """Deterministic 64-bit child seed for an independent random stream."""
    h = hashlib.blake2b(f"{seed}:{label}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


# ---------------------------------------------------------------------------
# Lambda sampling

def _collinear(a: Sequence[int], b: Sequence[int], r: int) -> bool:
    """True iff a = c*b or b = c*a componentwise mod r for some scalar c."""

    def multiple_of(x, y) -> bool:
        # is x = c*y mod r for some c?
        if all(v % r == 0 for v in y):
            return all(v % r == 0 for v in x)
        for j, yj in enumerate(y):
            if math.gcd(yj, r) == 1:
                c = x[j] * pow(yj, -1, r) % r
                return all((c * yv - xv) % r == 0 for xv, yv in zip(x, y))
        if r <= 1 << 16:
            return any(
                all((c * yv - xv) % r == 0 for xv, yv in zip(x, y))
                for c in range(r)
            )
        return True  # no cheap certificate; force a resample

    return multiple_of(a, b) or multiple_of(b, a)


def sample_lambda_triple(
    n: int, r: int, rng: random.Random | int, budget: int = 1000
) -> Tuple[Tuple[int, ...], ...]:
    """Three uniform vectors in {0..r-1}^n, pairwise non-collinear mod r."""
    if n < 2 or r < 2:
        raise ValueError("need n >= 2 and r >= 2")
    if isinstance(rng, int):
        rng = random.Random(rng)
    for _ in range(budget):
        lams = [
            tuple(rng.randrange(r) for _ in range(n)) for _ in range(3)
        ]
        ok = all(
            not _collinear(lams[i], lams[j], r)
            for i in range(3)
            for j in range(i + 1, 3)
        )
        if ok:
            return tuple(lams)
    raise ValueError(f"could not sample non-collinear vectors for n={n}, r={r}")


def _dot_mod(lam: Sequence[int], e: Sequence[int], r: int) -> int:
    return sum(l * x for l, x in zip(lam, e)) % r


# ---------------------------------------------------------------------------
# Coefficient recovery over a known support

def recover_coefficients(
    p: SparsePoly,
    q: SparsePoly,
    support: Sequence[Tuple[int, ...]],
    params: RecoveryParams,
) -> Optional[SparsePoly]:
    """Three cyclic evaluations plus peeling; Las Vegas.

    Requires PQ to lie in the span of ``support``.  A returned polynomial
    is always the true product; None means the game was lost.
    """
    n = p.n
    t = len(support)
    if n < 2:
        raise ValueError("need n >= 2")
    if t < 6:
        raise ValueError("need a support of size >= 6")
    r = int(params.tau * t)
    rng = random.Random(split_seed(params.seed, "coeffs"))
    lams = sample_lambda_triple(n, r, rng)
    channels = []
    for lam in lams:
        pi_ = eval_at_powers(p, lam, r, ZZ)
        qi_ = eval_at_powers(q, lam, r, ZZ)
        channels.append(cyclic_mul(pi_, qi_).coeffs)
    assignment = ThrowAssignment(
        box_counts=[r, r, r],
        boxes=[[_dot_mod(lam, e, r) for e in support] for lam in lams],
    )
    values, leftover = play_known_support(assignment, channels)
    if leftover:
        return None
    return SparsePoly(n, [(e, v) for e, v in zip(support, values) if v])


# ---------------------------------------------------------------------------
# Exponent discovery

def _batch_invert(values: List[int], mod: int) -> List[int]:
    """Inverses of nonzero values mod a prime, 3(m-1) mults + one invert."""
    m = len(values)
    if m == 0:
        return []
    prefix = [0] * m
    acc = 1
    for i, v in enumerate(values):
        prefix[i] = acc
        acc = acc * v % mod
    inv = int(gmpy2.invert(acc, mod))
    out = [0] * m
    for i in range(m - 1, -1, -1):
        out[i] = inv * prefix[i] % mod
        inv = inv * values[i] % mod
    return out


def recover_exponents(
    p: SparsePoly,
    q: SparsePoly,
    T: int,
    d: int,
    eps: float,
    tau: float,
    seed: int,
) -> Optional[List[Tuple[int, ...]]]:
    """Support of PQ via six evaluations mod a large prime; Monte Carlo.

    Each term's exponent vector is decoded from the quotient of its
    prime-weighted and plain accumulators, which equals p_1^k_1...p_n^k_n
    for a singleton box.  Colliding boxes are rejected by the q <= B,
    smooth-factorization, degree, and slot-consistency safeguards.
    """
    n = p.n
    if n < 2:
        raise ValueError("need n >= 2")
    if T < 6:
        raise ValueError("need T >= 6")
    basis = numtheory.first_primes(n, d)
    B = basis.B
    rng = random.Random(split_seed(seed, "exps"))
    mod = numtheory.choose_pi(B, T, eps, rng).value
    F = PrimeField(mod)
    r = int(tau * T)
    lams = sample_lambda_triple(n, r, rng)
    v = [rng.randrange(1, mod) for _ in range(n)]
    vp = [vi * pi_ % mod for vi, pi_ in zip(v, basis.primes)]

    channels = []
    for lam in lams:
        pb = eval_at_powers(p, lam, r, F, weights=v)
        qb = eval_at_powers(q, lam, r, F, weights=v)
        pt = eval_at_powers(p, lam, r, F, weights=vp)
        qt = eval_at_powers(q, lam, r, F, weights=vp)
        channels.append(
            (cyclic_mul(pb, qb).coeffs, cyclic_mul(pt, qt).coeffs)
        )

    def identify(i, e, c, ct):
        qv = ct * int(gmpy2.invert(c, mod)) % mod
        if qv > B:
            return None
        ks = numtheory.smooth_factor(qv, basis, d)
        if ks is None:
            return None
        if _dot_mod(lams[i], ks, r) != e:
            return None
        return ks, c, ct

    def slots_for(ks):
        return [_dot_mod(lam, ks, r) for lam in lams]

    recovered, unresolved = play_discovery(
        channels, identify, slots_for, reduce=lambda x: x % mod
    )
    if unresolved:
        return None
    return sorted({ks for ks, _ in recovered}, reverse=True)


# ---------------------------------------------------------------------------
# Orchestrated heuristic multiply

def multiply_heuristic(
    p: SparsePoly,
    q: SparsePoly,
    params: RecoveryParams = RecoveryParams(),
    info: Optional[dict] = None,
) -> SparsePoly:
    """Exponent discovery, then coefficient recovery, then verification;
    retries with fresh seeds and falls back to the naive product."""
    if info is None:
        info = {}
    info.update(attempts=0, fallback=False)
    sp, sq = poly_stats(p), poly_stats(q)
    t_bound = sp.term_count * sq.term_count
    if p.n < 2 or t_bound < 6:
        info["fallback"] = True
        return naive_mul(p, q)
    T = min(t_bound, params.T if params.T is not None else t_bound, MAX_SLOTS)
    T = max(T, 6)
    d = sp.total_degree + sq.total_degree
    for attempt in range(params.retries):
        info["attempts"] = attempt + 1
        seed_k = split_seed(params.seed, f"attempt{attempt}")
        # structured (sumset) supports hash less uniformly than the random
        # model predicts, so failed attempts escalate the box ratio
        tau_k = min(params.tau * 1.5**attempt, 1.5)
        exponents = recover_exponents(p, q, T, d, params.eps, tau_k, seed_k)
        if exponents is None:
            continue
        if len(exponents) < 6:
            break  # tiny product: naive is cheaper than padding the game
        result = recover_coefficients(
            p, q, exponents, replace(params, seed=seed_k, tau=tau_k)
        )
        if result is None:
            continue
        if verify_product(p, q, result, split_seed(seed_k, "verify")):
            return result
    info["fallback"] = True
    return naive_mul(p, q)


# ---------------------------------------------------------------------------
# Supersparse univariate variant

def supersparse_box_counts(T: int, tau: float) -> Tuple[int, int, int]:
    """Three pairwise-coprime box counts near tau*T: an odd base and its
    two successors (consecutive integers starting from an odd base are
    pairwise coprime)."""
    base = 2 * math.ceil(tau * T / 2) + 1
    counts = (base, base + 1, base + 2)
    assert all(
        math.gcd(counts[i], counts[j]) == 1
        for i in range(3)
        for j in range(i + 1, 3)
    )
    return counts


def recover_exponents_supersparse(
    p: SparsePoly,
    q: SparsePoly,
    T: int,
    eps: float,
    tau: float,
    seed: int,
) -> Optional[Set[int]]:
    """Univariate exponent discovery with arbitrary-precision exponents.

    Three throws with pairwise-coprime box counts; the secondary channel is
    the derivative-weighted image x*(PQ)', so a singleton box's quotient of
    secondary by primary accumulator is the exponent itself.
    """
    if p.n != 1 or q.n != 1:
        raise ValueError("supersparse path expects univariate inputs")
    T = max(T, 6)
    sp, sq = poly_stats(p), poly_stats(q)
    d = sp.total_degree + sq.total_degree
    rng = random.Random(split_seed(seed, "supersparse"))
    m = math.ceil(max(d, 2) * T / eps)
    mod = numtheory.random_prime(m, 2 * m, rng)
    F = PrimeField(mod)
    counts = supersparse_box_counts(T, tau)
    v = rng.randrange(1, mod)

    def eval_univariate(poly, r, derivative):
        coeffs = [0] * r
        for (e,), c in poly.terms:
            w = c % mod * pow(v, e, mod) % mod
            if derivative:
                w = w * (e % mod) % mod
            slot = e % r
            coeffs[slot] = (coeffs[slot] + w) % mod
        return CyclicPoly(r, coeffs, F)

    channels = []
    for r in counts:
        pb = eval_univariate(p, r, False)
        qb = eval_univariate(q, r, False)
        pd = eval_univariate(p, r, True)
        qd = eval_univariate(q, r, True)
        prim = cyclic_mul(pb, qb)
        # x*(PQ)' = (xP')Q + P(xQ')
        sec = [
            (a + b) % mod
            for a, b in zip(
                cyclic_mul(pd, qb).coeffs, cyclic_mul(pb, qd).coeffs
            )
        ]
        channels.append((prim.coeffs, sec))

    def identify(i, slot, c, ct):
        e = ct * int(gmpy2.invert(c, mod)) % mod
        if e > d:
            return None
        if e % counts[i] != slot:
            return None
        return e, c, ct

    def slots_for(e):
        return [e % r for r in counts]

    recovered, unresolved = play_discovery(
        channels, identify, slots_for, reduce=lambda x: x % mod
    )
    if unresolved:
        return None
    return {e for e, _ in recovered}
