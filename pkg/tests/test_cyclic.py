import random

import pytest

from spmul.cyclic import (
    ZZ,
    CyclicPoly,
    IntegerDomain,
    PrimeField,
    cyclic_mul,
    eval_at_powers,
    sub_monomial,
)
from spmul.polycore import SparsePoly, naive_mul, random_poly


def fold_oracle(a, b, r):
    """Plain quadratic convolution followed by index folding mod r."""
    lin = [0] * (2 * r)
    for i, ai in enumerate(a):
        for k, bk in enumerate(b):
            lin[i + k] += ai * bk
    out = [0] * r
    for i, v in enumerate(lin):
        out[i % r] += v
    return out


def substitution_oracle(p, lam, r, mod=None):
    """Evaluate by literally substituting x_j -> u^lam_j term by term."""
    out = [0] * r
    for exp, c in p.terms:
        out[sum(l * e for l, e in zip(lam, exp)) % r] += c
    if mod is not None:
        out = [x % mod for x in out]
    return out


# ---------------------------------------------------------------------------
# cyclic multiplication

def test_wraparound():
    a = CyclicPoly(2, [1, 1])
    assert cyclic_mul(a, a).coeffs == [2, 2]  # (1+u)^2 = 1 + 2u + u^2 -> 2 + 2u


def test_identity():
    rng = random.Random(0)
    for r in (1, 5, 70):
        a = CyclicPoly(r, [rng.randint(-9, 9) for _ in range(r)])
        one = CyclicPoly(r, [1] + [0] * (r - 1))
        assert cyclic_mul(a, one) == a


@pytest.mark.parametrize("r", [1, 2, 7, 63, 64, 97, 200])
def test_against_fold_oracle(r):
    rng = random.Random(r)
    for _ in range(10):
        a = [rng.randint(-100, 100) for _ in range(r)]
        b = [rng.randint(-100, 100) for _ in range(r)]
        got = cyclic_mul(CyclicPoly(r, list(a)), CyclicPoly(r, list(b)))
        assert got.coeffs == fold_oracle(a, b, r)


def test_packed_path_matches_schoolbook_path():
    rng = random.Random(42)
    for _ in range(30):
        r = rng.randint(1, 150)
        a = CyclicPoly(r, [rng.randint(-(2**40), 2**40) for _ in range(r)])
        b = CyclicPoly(r, [rng.randint(-(2**40), 2**40) for _ in range(r)])
        assert cyclic_mul(a, b, crossover=1) == cyclic_mul(a, b, crossover=10**9)


def test_prime_field_reduction():
    p = 1_000_003
    F = PrimeField(p)
    rng = random.Random(7)
    for r in (5, 64, 130):
        a = [rng.randrange(p) for _ in range(r)]
        b = [rng.randrange(p) for _ in range(r)]
        got = cyclic_mul(CyclicPoly(r, list(a), F), CyclicPoly(r, list(b), F))
        assert got.coeffs == [x % p for x in fold_oracle(a, b, r)]
        assert got.domain == F


def test_commutative_and_associative():
    rng = random.Random(3)
    for _ in range(25):
        r = rng.randint(1, 64)
        a, b, c = (
            CyclicPoly(r, [rng.randint(-20, 20) for _ in range(r)])
            for _ in range(3)
        )
        assert cyclic_mul(a, b) == cyclic_mul(b, a)
        assert cyclic_mul(cyclic_mul(a, b), c) == cyclic_mul(a, cyclic_mul(b, c))


def test_coefficient_bound():
    rng = random.Random(9)
    for _ in range(20):
        r = rng.randint(1, 120)
        a = [rng.randint(-50, 50) for _ in range(r)]
        b = [rng.randint(-50, 50) for _ in range(r)]
        out = cyclic_mul(CyclicPoly(r, list(a)), CyclicPoly(r, list(b)))
        bound = r * max(map(abs, a), default=0) * max(map(abs, b), default=0)
        assert all(abs(x) <= bound for x in out.coeffs)


def test_mismatch_errors():
    with pytest.raises(ValueError):
        cyclic_mul(CyclicPoly(2, [1, 0]), CyclicPoly(3, [1, 0, 0]))
    with pytest.raises(ValueError):
        cyclic_mul(CyclicPoly(2, [1, 0]), CyclicPoly(2, [1, 0], PrimeField(7)))


# ---------------------------------------------------------------------------
# evaluation at powers of u

def test_eval_example_polynomial(example_pqr):
    p, _, _ = example_pqr
    # degree sums 6, 8, 18, 27 land in slots 1, 3, 3, 2 mod 5;
    # the slot-3 accumulator sums 3 + (-2)
    got = eval_at_powers(p, (1, 1, 1), 5, ZZ)
    assert got.coeffs == [0, 1, 1, 1, 0]


def test_eval_constant():
    c = SparsePoly.constant(3, 42)
    assert eval_at_powers(c, (2, 3, 4), 7, ZZ).coeffs == [42, 0, 0, 0, 0, 0, 0]


def test_eval_matches_substitution_oracle():
    rng = random.Random(17)
    for _ in range(100):
        n = rng.randint(2, 4)
        p = random_poly(n, rng.randint(1, 20), 8, 50, rng.randrange(2**30))
        r = rng.randint(1, 40)
        lam = tuple(rng.randrange(r) for _ in range(n))
        assert eval_at_powers(p, lam, r, ZZ).coeffs == substitution_oracle(p, lam, r)


def test_homomorphism():
    # eval(P) * eval(Q) = eval(PQ), the identity all algorithms rest on
    rng = random.Random(23)
    for trial in range(1000):
        n = rng.randint(2, 4)
        p = random_poly(n, rng.randint(1, 12), 6, 30, trial)
        q = random_poly(n, rng.randint(1, 12), 6, 30, trial + 10**6)
        r = rng.randint(1, 30)
        lam = tuple(rng.randrange(r) for _ in range(n))
        if trial % 3 == 0:
            dom, weights = ZZ, None
        elif trial % 3 == 1:
            dom, weights = ZZ, tuple(rng.randint(1, 5) for _ in range(n))
        else:
            mod = 1_000_003
            dom = PrimeField(mod)
            weights = tuple(rng.randrange(1, mod) for _ in range(n))
        lhs = cyclic_mul(
            eval_at_powers(p, lam, r, dom, weights=weights),
            eval_at_powers(q, lam, r, dom, weights=weights),
        )
        rhs = eval_at_powers(naive_mul(p, q), lam, r, dom, weights=weights)
        assert lhs == rhs


def test_eval_weight_not_invertible():
    with pytest.raises(ValueError):
        eval_at_powers(
            SparsePoly(2, [((1, 0), 1)]), (1, 1), 5, PrimeField(7), weights=(7, 1)
        )


def test_eval_arity_mismatch():
    with pytest.raises(ValueError):
        eval_at_powers(SparsePoly.zero(2), (1,), 5, ZZ)


# ---------------------------------------------------------------------------
# slot subtraction

def test_sub_monomial_zeroes_slot():
    a = CyclicPoly(4, [3, 5, 0, -2])
    sub_monomial(a, 5, 1)
    assert a.coeffs == [3, 0, 0, -2]
    sub_monomial(a, 0, 0)
    assert a.coeffs == [3, 0, 0, -2]


def test_sub_monomial_range():
    with pytest.raises(ValueError):
        sub_monomial(CyclicPoly(4, [0, 0, 0, 0]), 1, 4)


def test_peel_to_zero_end_state(example_pqr):
    # subtracting every true term of R slot by slot drains the evaluation
    p, q, r_poly = example_pqr
    lam = (3, 1, 4)
    r = 11
    img = cyclic_mul(
        eval_at_powers(p, lam, r, ZZ), eval_at_powers(q, lam, r, ZZ)
    )
    for exp, c in r_poly.terms:
        sub_monomial(img, c, sum(l * e for l, e in zip(lam, exp)) % r)
    assert img.is_zero()
