"""Heuristic-free multiplication: Las Vegas coefficient recovery by
repeated single throws, Monte Carlo full product modulo a prime with a
self-adapting term bound and a third-channel consistency check, and the
lifting of the modular support back to Z."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Set, Tuple

import gmpy2

from . import numtheory
from .cyclic import ZZ, CyclicPoly, PrimeField, cyclic_mul, eval_at_powers
from .pipeline import _batch_invert, _dot_mod, split_seed
from .polycore import SparsePoly, naive_mul, poly_stats, verify_product


@dataclass
class RunInfo:
    """Diagnostics for one orchestrated run."""

    lv_iterations: int = 0
    mod_iterations: int = 0
    attempts: int = 0
    fallback: bool = False
    halvings: List[Tuple[int, int]] = field(default_factory=list)  # (|I| before, after)


def recover_coefficients_lv(
    p: SparsePoly,
    q: SparsePoly,
    support: Sequence[Tuple[int, ...]],
    seed: int,
    max_iterations: int = 1000,
    info: Optional[RunInfo] = None,
) -> SparsePoly:
    """Las Vegas coefficient recovery: one random throw per iteration, each
    time peeling every support position whose box is collision-free.

    Requires PQ to lie in the span of ``support``; always returns the exact
    product when it does.
    """
    n = p.n
    support = list(support)
    t = len(support)
    rng = random.Random(split_seed(seed, "lv"))
    remaining = set(range(t))
    coeffs: dict = {}
    acc = SparsePoly.zero(n)
    iterations = 0
    while remaining:
        iterations += 1
        if iterations > max_iterations:
            raise RuntimeError("coefficient recovery did not converge")
        m = len(remaining)
        r = numtheory.random_prime(4 * m + 1, max(8 * m - 1, 4 * m + 2), rng)
        lam = tuple(rng.randrange(r) for _ in range(n))
        pb = eval_at_powers(p, lam, r, ZZ)
        qb = eval_at_powers(q, lam, r, ZZ)
        rb = eval_at_powers(acc, lam, r, ZZ)
        delta = cyclic_mul(pb, qb) - rb
        slot_count: dict = {}
        slots = {}
        for i in remaining:
            s = _dot_mod(lam, support[i], r)
            slots[i] = s
            slot_count[s] = slot_count.get(s, 0) + 1
        peeled = [i for i in remaining if slot_count[slots[i]] == 1]
        if not peeled:
            continue
        if info is not None:
            info.halvings.append((m, m - len(peeled)))
        for i in peeled:
            c = delta.coeffs[slots[i]]
            coeffs[support[i]] = c
            remaining.discard(i)
        acc = SparsePoly(n, list(coeffs.items()))
    if info is not None:
        info.lv_iterations = iterations
    return SparsePoly(n, [(e, c) for e, c in coeffs.items() if c])


def _multi_weight_eval(
    poly: SparsePoly,
    lam: Sequence[int],
    r: int,
    mod: int,
    weight_sets: Sequence[Sequence[int]],
) -> List[CyclicPoly]:
    """Evaluate one polynomial at u^lam under several weight vectors at
    once, sharing the slot computation and per-variable power tables."""
    n = poly.n
    max_exps = [0] * n
    for exp, _ in poly.terms:
        for j, e in enumerate(exp):
            if e > max_exps[j]:
                max_exps[j] = e
    tables = []
    for ws in weight_sets:
        tset = []
        for w, m in zip(ws, max_exps):
            row = [1] * (m + 1)
            a = 1
            for e in range(1, m + 1):
                a = a * w % mod
                row[e] = a
            tset.append(row)
        tables.append(tset)
    F = PrimeField(mod)
    outs = [[0] * r for _ in weight_sets]
    for exp, c in poly.terms:
        slot = 0
        for j, e in enumerate(exp):
            if e:
                slot += lam[j] * e
        slot %= r
        cm = c % mod
        for k, tset in enumerate(tables):
            v = cm
            for j, e in enumerate(exp):
                if e:
                    v = v * tset[j][e] % mod
            outs[k][slot] = (outs[k][slot] + v) % mod
    return [CyclicPoly(r, o, F) for o in outs]


def multiply_mod_pi(
    p: SparsePoly,
    q: SparsePoly,
    mod: int,
    seed: int,
    max_iterations: int = 200,
    info: Optional[RunInfo] = None,
    oracle_support: Optional[set] = None,
) -> Optional[SparsePoly]:
    """Full product modulo a prime with self-adapting term bound; Monte
    Carlo.  Returns None ("inconclusive") if the iteration cap is hit.

    ``oracle_support``, when supplied by tests, records any accumulated
    exponent outside the true support in info.halvings (flawless-run
    instrumentation); it never influences control flow.
    """
    n = p.n
    sp, sq = poly_stats(p), poly_stats(q)
    d = sp.total_degree + sq.total_degree
    basis = numtheory.first_primes(n, d)
    bq = basis.B
    if mod < 4 * bq:
        raise ValueError(f"modulus {mod} below the 4*p_n^d = {4 * bq} floor")
    F = PrimeField(mod)
    rng = random.Random(split_seed(seed, "modpi"))
    acc: dict = {}
    flaws = 0
    T = 8
    for iteration in range(1, max_iterations + 1):
        if info is not None:
            info.mod_iterations = iteration
        r = numtheory.random_prime(8 * T + 1, 16 * T - 1, rng)
        lam = tuple(rng.randrange(r) for _ in range(n))
        v = [rng.randrange(1, mod) for _ in range(n)]
        w = [rng.randrange(1, mod) for _ in range(n)]
        weight_sets = [
            v,
            [vi * pi_ % mod for vi, pi_ in zip(v, basis.primes)],
            [vi * wi % mod for vi, wi in zip(v, w)],
        ]
        accumulated = SparsePoly(n, list(acc.items()))
        pe = _multi_weight_eval(p, lam, r, mod, weight_sets)
        qe = _multi_weight_eval(q, lam, r, mod, weight_sets)
        re_ = _multi_weight_eval(accumulated, lam, r, mod, weight_sets)
        deltas = [
            (cyclic_mul(pe[l], qe[l]) - re_[l]).coeffs for l in range(3)
        ]
        if all(x == 0 for dl in deltas for x in dl):
            if info is not None and oracle_support is not None:
                info.halvings.append((flaws, 0))
            return SparsePoly(n, list(acc.items()))
        nonzero = [j for j in range(r) if deltas[0][j] != 0]
        inverses = _batch_invert([deltas[0][j] for j in nonzero], mod)
        failures = 0
        v_inv = [int(gmpy2.invert(vi, mod)) for vi in v]
        for j, inv1 in zip(nonzero, inverses):
            qv = deltas[1][j] * inv1 % mod
            ks = None
            if qv <= bq:
                ks = numtheory.smooth_factor(qv, basis, d)
            if ks is not None:
                wk = 1
                for wi, k in zip(w, ks):
                    if k:
                        wk = wk * pow(wi, k, mod) % mod
                if deltas[2][j] == deltas[0][j] * wk % mod:
                    coeff = deltas[0][j]
                    for vi, k in zip(v_inv, ks):
                        if k:
                            coeff = coeff * pow(vi, k, mod) % mod
                    if oracle_support is not None and ks not in oracle_support:
                        flaws += 1
                    acc[ks] = (acc.get(ks, 0) + coeff) % mod
                    if acc[ks] == 0:
                        del acc[ks]
                    continue
            failures += 1
        T = max(16 * failures, T // 2, 4)
    return None


def multiply_unconditional(
    p: SparsePoly,
    q: SparsePoly,
    seed: int = 0,
    retries: int = 3,
    info: Optional[RunInfo] = None,
) -> SparsePoly:
    """Integer sparse product without distributional assumptions: learn the
    support modulo a random large prime, recover coefficients over Z, and
    verify; falls back to the naive product on repeated failure."""
    if info is None:
        info = RunInfo()
    if p.is_zero or q.is_zero:
        return SparsePoly.zero(p.n)
    sp, sq = poly_stats(p), poly_stats(q)
    n = p.n
    d = sp.total_degree + sq.total_degree
    N = sp.term_count * sq.term_count * sp.height * sq.height
    coeff_bits = max(N.bit_length(), 1)
    t_bound = sp.term_count * sq.term_count
    basis = numtheory.first_primes(n, d)
    floor = 4 * basis.B
    for attempt in range(retries):
        info.attempts = attempt + 1
        seed_k = split_seed(seed, f"uncond{attempt}")
        rng = random.Random(seed_k)
        mod = numtheory.choose_reduction_prime(
            t_bound, coeff_bits, rng, min_value=floor
        ).value
        pm = p.map_coeffs(lambda c: c % mod)
        qm = q.map_coeffs(lambda c: c % mod)
        rm = multiply_mod_pi(pm, qm, mod, seed_k, info=info)
        if rm is None:
            continue
        support = [e for e, _ in rm.terms]
        if not support:
            result = SparsePoly.zero(n)
        else:
            try:
                result = recover_coefficients_lv(p, q, support, seed_k, info=info)
            except RuntimeError:
                continue
        if verify_product(p, q, result, split_seed(seed_k, "verify")):
            return result
    info.fallback = True
    return naive_mul(p, q)
