import math
import random

import pytest

from spmul.pipeline import (
    RecoveryParams,
    _collinear,
    multiply_heuristic,
    recover_coefficients,
    recover_exponents,
    recover_exponents_supersparse,
    sample_lambda_triple,
    split_seed,
    supersparse_box_counts,
)
from spmul.polycore import SparsePoly, naive_mul, poly_stats, random_poly


def collinear_bruteforce(a, b, r):
    return any(
        all((c * y - x) % r == 0 for x, y in zip(a, b))
        or all((c * x - y) % r == 0 for x, y in zip(a, b))
        for c in range(r)
    )


# ---------------------------------------------------------------------------
# parameters and seeds

def test_params_validation():
    with pytest.raises(ValueError):
        RecoveryParams(tau=0.0)
    with pytest.raises(ValueError):
        RecoveryParams(tau=1.6)
    with pytest.raises(ValueError):
        RecoveryParams(eps=1.0)


def test_split_seed_is_stable_and_distinct():
    assert split_seed(1, "a") == split_seed(1, "a")
    assert split_seed(1, "a") != split_seed(1, "b")
    assert split_seed(2, "a") != split_seed(1, "a")
    assert 0 <= split_seed(123, "x") < 2**64


# ---------------------------------------------------------------------------
# lambda sampling

def test_known_collinear_pair():
    assert _collinear((1, 2), (2, 4), 5)  # 2 * (1,2) = (2,4) mod 5
    assert not _collinear((1, 0), (0, 1), 5)
    assert not _collinear((1, 0), (1, 1), 5)


def test_collinear_matches_bruteforce():
    rng = random.Random(0)
    for _ in range(1000):
        r = rng.randint(2, 30)
        n = rng.randint(2, 4)
        a = tuple(rng.randrange(r) for _ in range(n))
        b = tuple(rng.randrange(r) for _ in range(n))
        assert _collinear(a, b, r) == collinear_bruteforce(a, b, r)


def test_sampled_triples_pass_exhaustive_scan():
    for seed in range(1000):
        lams = sample_lambda_triple(3, 101, seed)
        for i in range(3):
            for j in range(i + 1, 3):
                assert not collinear_bruteforce(lams[i], lams[j], 101)


def test_sample_lambda_degenerate():
    with pytest.raises(ValueError):
        sample_lambda_triple(1, 5, 0)
    # mod 2 exactly one non-collinear triple exists; sampling must find it
    assert sorted(sample_lambda_triple(2, 2, 0)) == [(0, 1), (1, 0), (1, 1)]


# ---------------------------------------------------------------------------
# coefficient recovery (Las Vegas)

def test_recover_coefficients_example(example_pqr):
    p, q, r = example_pqr
    support = [e for e, _ in r.terms]
    for seed in range(40):
        got = recover_coefficients(
            p, q, support, RecoveryParams(tau=0.5, seed=seed)
        )
        if got is not None:
            assert got == r
            return
    pytest.fail("no winning seed among 40")


def test_las_vegas_soundness():
    # whatever the seed and outcome, a returned polynomial is the product
    wins = 0
    for trial in range(300):
        rng = random.Random(trial)
        n = rng.randint(2, 4)
        p = random_poly(n, rng.randint(3, 15), 8, 50, trial)
        q = random_poly(n, rng.randint(3, 15), 8, 50, trial + 10**6)
        truth = naive_mul(p, q)
        if len(truth) < 6:
            continue
        support = [e for e, _ in truth.terms]
        got = recover_coefficients(
            p, q, support, RecoveryParams(tau=0.5, seed=trial)
        )
        if got is not None:
            wins += 1
            assert got == truth
    assert wins > 0


def test_low_tau_almost_always_fails():
    p = random_poly(3, 40, 12, 50, 1)
    q = random_poly(3, 40, 12, 50, 2)
    truth = naive_mul(p, q)
    support = [e for e, _ in truth.terms]
    failures = sum(
        recover_coefficients(p, q, support, RecoveryParams(tau=0.05, seed=s))
        is None
        for s in range(100)
    )
    assert failures >= 95


def test_support_superset_recovers_zeros():
    p = random_poly(3, 10, 6, 30, 5)
    q = random_poly(3, 10, 6, 30, 6)
    truth = naive_mul(p, q)
    support = [e for e, _ in truth.terms]
    extra = [(20, 20, 20), (19, 19, 19), (18, 18, 18)]
    for seed in range(40):
        got = recover_coefficients(
            p, q, support + extra, RecoveryParams(tau=0.5, seed=seed)
        )
        if got is not None:
            assert got == truth
            return
    pytest.fail("no winning seed among 40")


def test_recover_coefficients_preconditions():
    p = random_poly(1, 3, 5, 9, 0)
    with pytest.raises(ValueError):
        recover_coefficients(p, p, [(0,)] * 6, RecoveryParams())
    q = random_poly(2, 3, 5, 9, 0)
    with pytest.raises(ValueError):
        recover_coefficients(q, q, [(0, 0)], RecoveryParams())


# ---------------------------------------------------------------------------
# exponent discovery (Monte Carlo)

def test_recover_exponents_example(example_pqr):
    p, q, r = example_pqr
    want = [e for e, _ in r.terms]
    for seed in range(40):
        got = recover_exponents(p, q, 10, 36, 2.0**-10, 0.5, seed)
        if got is not None:
            assert got == want
            return
    pytest.fail("no winning seed among 40")


def test_recover_exponents_statistical():
    # one-shot success rate; product supports are sumsets and hash less
    # uniformly than the random model, so a generous box ratio is used here
    good = 0
    total = 0
    for trial in range(100):
        p = random_poly(3, 30, 30, 50, trial)
        q = random_poly(3, 30, 30, 50, trial + 10**6)
        truth = naive_mul(p, q)
        want = [e for e, _ in truth.terms]
        sp, sq = poly_stats(p), poly_stats(q)
        got = recover_exponents(
            p, q, len(truth), sp.total_degree + sq.total_degree,
            2.0**-10, 1.0, trial,
        )
        total += 1
        if got == want:
            good += 1
        else:
            assert got is None  # wrong answers are the real failure mode
    assert good >= 0.95 * total


def test_recover_exponents_below_generic_threshold_still_sound():
    # at tau = 0.5 one-shot discovery loses some games on structured
    # supports, but a returned support is still essentially never wrong
    good = wrong = 0
    for trial in range(100):
        p = random_poly(3, 30, 30, 50, trial)
        q = random_poly(3, 30, 30, 50, trial + 10**6)
        truth = naive_mul(p, q)
        want = [e for e, _ in truth.terms]
        got = recover_exponents(p, q, len(truth), 60, 2.0**-10, 0.5, trial)
        if got == want:
            good += 1
        elif got is not None:
            wrong += 1
    assert wrong <= 1
    assert good >= 60


def test_recover_exponents_never_wrong():
    # Monte Carlo: across many seeds, returned supports are always supersets
    # of nothing false -- compare exactly against the oracle
    p = random_poly(3, 20, 8, 40, 77)
    q = random_poly(3, 20, 8, 40, 78)
    truth = [e for e, _ in naive_mul(p, q).terms]
    wrong = 0
    for seed in range(200):
        got = recover_exponents(p, q, len(truth), 16, 2.0**-10, 0.5, seed)
        if got is not None and got != truth:
            wrong += 1
    assert wrong <= 2


# ---------------------------------------------------------------------------
# orchestrated multiply

def test_multiply_heuristic_example(example_pqr):
    p, q, r = example_pqr
    info = {}
    assert multiply_heuristic(p, q, RecoveryParams(seed=0), info=info) == r


def test_multiply_heuristic_zero_and_univariate():
    z = SparsePoly.zero(2)
    q = random_poly(2, 4, 5, 10, 0)
    assert multiply_heuristic(z, q).is_zero
    a = random_poly(1, 5, 9, 10, 1)
    b = random_poly(1, 5, 9, 10, 2)
    assert multiply_heuristic(a, b) == naive_mul(a, b)


def test_multiply_heuristic_oracle_block():
    for trial in range(200):
        rng = random.Random(trial ^ 0xBEEF)
        n = rng.randint(2, 4)
        p = random_poly(n, rng.randint(1, 40), 10, 2**16, trial)
        q = random_poly(n, rng.randint(1, 40), 10, 2**16, trial + 5 * 10**5)
        params = RecoveryParams(seed=trial)
        assert multiply_heuristic(p, q, params) == naive_mul(p, q)


def test_multiply_heuristic_constant_product():
    one = SparsePoly.constant(2, 1)
    info = {}
    assert multiply_heuristic(one, one, info=info) == one
    assert info["fallback"]


# ---------------------------------------------------------------------------
# supersparse univariate variant

def test_box_counts_pairwise_coprime():
    for T in (10, 100, 1000, 12345):
        for tau in (0.45, 0.5, 1.0):
            counts = supersparse_box_counts(T, tau)
            assert counts[0] % 2 == 1
            assert counts[1] == counts[0] + 1 and counts[2] == counts[0] + 2
            for i in range(3):
                for j in range(i + 1, 3):
                    assert math.gcd(counts[i], counts[j]) == 1


def test_supersparse_difference_of_squares():
    e = 2**40
    p = SparsePoly(1, [((e,), 1), ((0,), 1)])
    q = SparsePoly(1, [((e,), 1), ((0,), -1)])
    for seed in range(20):
        got = recover_exponents_supersparse(p, q, 8, 2.0**-20, 0.5, seed)
        if got is not None:
            assert got == {2 * e, 0}
            return
    pytest.fail("no winning seed among 20")


def test_supersparse_single_term():
    p = SparsePoly(1, [((123456789,), 7)])
    q = SparsePoly(1, [((987654321,), -3)])
    got = recover_exponents_supersparse(p, q, 6, 2.0**-20, 0.5, 1)
    assert got == {123456789 + 987654321}


def test_supersparse_matches_oracle():
    for trial in range(50):
        rng = random.Random(trial)
        exps_p = rng.sample(range(10**9), 8)
        exps_q = rng.sample(range(10**9), 8)
        p = SparsePoly(1, [((e,), rng.randint(1, 99)) for e in exps_p])
        q = SparsePoly(1, [((e,), rng.randint(1, 99)) for e in exps_q])
        truth = {e for (e,), _ in naive_mul(p, q).terms}
        got = recover_exponents_supersparse(p, q, 64, 2.0**-20, 0.5, trial)
        if got is not None:
            assert got == truth


def test_supersparse_rejects_multivariate():
    p = random_poly(2, 3, 4, 5, 0)
    with pytest.raises(ValueError):
        recover_exponents_supersparse(p, p, 8, 0.5, 0.5, 0)
