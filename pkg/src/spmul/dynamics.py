"""Occupancy dynamics of the peeling game as executable mathematics: the
per-round distribution recurrence, the critical box ratio by bisection and
in closed form, Monte Carlo game simulation, and the dense-support
experiment with squared-occupancy candidate selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

DEFAULT_KMAX = 64


@dataclass
class RoundDistribution:
    """p[k-1] is the fraction of balls sitting in boxes of occupancy k;
    tail bounds the mass ignored beyond k_max."""

    p: np.ndarray
    tail: float

    @property
    def sigma(self) -> float:
        return float(self.p.sum())

    def p_k(self, k: int) -> float:
        return float(self.p[k - 1]) if k <= len(self.p) else 0.0


def initial_distribution(tau: float, k_max: int = DEFAULT_KMAX) -> RoundDistribution:
    """First-round occupancy fractions: p_k = e^(-1/tau) / ((k-1)! tau^(k-1)),
    the size-biased Poisson law of box occupancies at ratio tau."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    if k_max < 8:
        raise ValueError("k_max must be >= 8")
    k = np.arange(1, k_max + 1)
    p = np.exp(-1.0 / tau - gammaln(k) - (k - 1) * math.log(tau))
    # Poisson tail beyond k_max, bounded by a geometric series remainder
    mu = 1.0 / tau
    head = math.exp(-mu + k_max * math.log(mu) - math.lgamma(k_max + 1))
    ratio = mu / (k_max + 1)
    tail = head * ratio / (1 - ratio) if ratio < 1 else 1.0
    return RoundDistribution(p, tail)


class _StepTables:
    """Cached log-binomial table per k_max (log-space above any overflow)."""

    _cache: dict = {}

    @classmethod
    def get(cls, k_max: int):
        if k_max not in cls._cache:
            j = np.arange(1, k_max + 1)[:, None]
            k = np.arange(1, k_max + 1)[None, :]
            logc = gammaln(k + 1) - gammaln(j + 1) - gammaln(k - j + 1)
            mask = k >= np.maximum(2, j)
            cls._cache[k_max] = (logc, mask, j / k)
        return cls._cache[k_max]


def step(dist: RoundDistribution) -> RoundDistribution:
    """One round of the occupancy recurrence.

    A remaining ball is privatized elsewhere with probability
    pi = (2 - p_1/sigma)(p_1/sigma); a box of occupancy k >= 2 becomes one
    of occupancy j with probability C(k,j) pi^(k-j) (1-pi)^j, and each
    surviving ball is counted with the size-bias factor j/k.
    """
    p = dist.p
    k_max = len(p)
    sigma = float(p.sum())
    if sigma <= 0.0:
        return RoundDistribution(np.zeros_like(p), dist.tail)
    x = float(p[0]) / sigma
    pi = (2.0 - x) * x
    if pi <= 0.0:
        q = p.copy()
        q[0] = 0.0
        return RoundDistribution(q, dist.tail)
    if pi >= 1.0:
        return RoundDistribution(np.zeros_like(p), dist.tail)
    logc, mask, jk = _StepTables.get(k_max)
    j = np.arange(1, k_max + 1)[:, None]
    k = np.arange(1, k_max + 1)[None, :]
    lam = np.where(
        mask, np.exp(logc + (k - j) * math.log(pi) + j * math.log1p(-pi)), 0.0
    )
    nxt = (jk * lam * p[None, :]).sum(axis=1)
    # tail mass is propagated conservatively: it can only shrink
    return RoundDistribution(nxt, dist.tail)


def iterate(
    tau: float,
    max_rounds: int,
    stop_sigma: float = 0.0,
    k_max: int = DEFAULT_KMAX,
) -> List[RoundDistribution]:
    """Distributions for rounds 1..max_rounds (stopping early once sigma
    drops below stop_sigma)."""
    dist = initial_distribution(tau, k_max)
    out = [dist]
    for _ in range(max_rounds - 1):
        if dist.sigma < stop_sigma:
            break
        dist = step(dist)
        out.append(dist)
    return out


WIN, LOSE, INDETERMINATE = "win", "lose", "indeterminate"


def classify(
    tau: float,
    max_rounds: int = 10_000,
    k_max: int = DEFAULT_KMAX,
    win_sigma: float = 1e-8,
    lose_sigma: float = 1e-3,
) -> str:
    """Win iff sigma collapses below win_sigma within the round budget;
    lose iff the singleton fraction dies out while sigma stays above
    lose_sigma (the distribution is then frozen)."""
    dist = initial_distribution(tau, k_max)
    for _ in range(max_rounds):
        s = dist.sigma
        if s < win_sigma:
            return WIN
        if dist.p[0] < 1e-14 and s > lose_sigma:
            return LOSE
        dist = step(dist)
    s = dist.sigma
    if s < win_sigma:
        return WIN
    if s > lose_sigma:
        return LOSE
    return INDETERMINATE


def estimate_tau_crit(
    tolerance: float = 1e-6,
    lo: float = 0.38,
    hi: float = 0.44,
    max_rounds: int = 10_000,
    k_max: int = DEFAULT_KMAX,
) -> Tuple[float, float]:
    """Bisect the win/lose phase boundary down to ``tolerance``."""
    if tolerance < 1e-7:
        raise ValueError("tolerance below the classifier's resolution")

    def probe(tau: float, budget: int) -> str:
        c = classify(tau, budget, k_max)
        if c == INDETERMINATE:
            c = classify(tau, 2 * budget, k_max)
        return c

    if probe(lo, max_rounds) != LOSE or probe(hi, max_rounds) != WIN:
        raise ValueError(f"bracket [{lo}, {hi}] does not straddle the threshold")
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        # near the boundary the collapse slows like 1/sqrt(distance)
        budget = max_rounds if hi - lo > 1e-4 else 4 * max_rounds
        if probe(mid, budget) == WIN:
            hi = mid
        else:
            lo = mid
    return lo, hi


def tau_crit_closed_form() -> float:
    """The phase boundary as the least ratio for which 1 - e^(-x^2/a) < x
    on (0,1): solving the tangency system gives a = 2x(1-x) with
    x + 2(1-x)log(1-x) = 0."""
    f = lambda x: x + 2.0 * (1.0 - x) * math.log1p(-x)
    lo, hi = 1e-9, 1.0 - 1e-12
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    x = 0.5 * (lo + hi)
    return 2.0 * x * (1.0 - x)


# ---------------------------------------------------------------------------
# Monte Carlo simulation

@dataclass
class SimTable:
    """N[i][k-1] counts balls (first throw) in boxes of occupancy k at the
    start of round i+1; sums are the row totals."""

    counts: List[np.ndarray]
    sums: List[int]
    won: bool
    rounds: int


def _throw_boxes(rng: np.random.Generator, t: int, box_counts: Sequence[int]) -> np.ndarray:
    return np.stack([rng.integers(0, r, size=t) for r in box_counts])


def _peel_rounds(
    boxes: np.ndarray,
    box_counts: Sequence[int],
    k_track: int = 16,
) -> Tuple[List[np.ndarray], List[int], bool, int]:
    """Round-synchronous peeling on occupancy only (vectorized)."""
    nt, t = boxes.shape
    alive = np.ones(t, dtype=bool)
    counts_rows: List[np.ndarray] = []
    sums: List[int] = []
    rounds = 0
    while True:
        rounds += 1
        occ = [
            np.bincount(boxes[i][alive], minlength=box_counts[i])
            for i in range(nt)
        ]
        ball_occ0 = occ[0][boxes[0]]
        ball_occ0[~alive] = 0
        row = np.bincount(
            np.minimum(ball_occ0[alive], k_track), minlength=k_track + 1
        )[1:]
        counts_rows.append(row)
        sums.append(int(alive.sum()))
        if not alive.any():
            return counts_rows, sums, True, rounds
        private = np.zeros(t, dtype=bool)
        for i in range(nt):
            private |= occ[i][boxes[i]] == 1
        private &= alive
        if not private.any():
            return counts_rows, sums, False, rounds
        alive &= ~private


def simulate_game(t: int, tau: float, seed: int, k_track: int = 16) -> SimTable:
    """Throw t balls three times into floor(tau*t) boxes and peel."""
    if t < 1:
        raise ValueError("t must be >= 1")
    r = max(int(tau * t), 1)
    rng = np.random.default_rng(seed)
    boxes = _throw_boxes(rng, t, [r, r, r])
    counts, sums, won, rounds = _peel_rounds(boxes, [r, r, r], k_track)
    return SimTable(counts, sums, won, rounds)


# ---------------------------------------------------------------------------
# Dense-support experiment

def monomials_up_to_degree(n: int, d: int) -> np.ndarray:
    """All exponent vectors of total degree <= d in n variables."""
    if n == 1:
        return np.arange(d + 1, dtype=np.int64)[:, None]
    rows = []
    for e in range(d + 1):
        rest = monomials_up_to_degree(n - 1, d - e)
        col = np.full((len(rest), 1), e, dtype=np.int64)
        rows.append(np.hstack([col, rest]))
    return np.vstack(rows)


def dense_support_experiment(
    n: int,
    d_p: int,
    d_q: int,
    tau: float,
    seed: int,
    candidate_count: int = 12,
) -> Tuple[bool, List[np.ndarray], int]:
    """Play the peeling game on the fully dense support of total degree
    d_p + d_q, choosing each throw's hash vector as the best of
    ``candidate_count`` random candidates by squared-occupancy score."""
    d = d_p + d_q
    t = math.comb(d + n, n)
    if t > 1 << 26:
        raise ValueError(f"support of size {t} too large")
    exps = monomials_up_to_degree(n, d)
    r = max(int(tau * t), 1)
    rng = np.random.default_rng(seed)
    lams = []
    boxes = []
    for _ in range(3):
        best = None
        for _ in range(candidate_count):
            lam = rng.integers(0, r, size=n)
            bx = (exps @ lam) % r
            score = int((np.bincount(bx, minlength=r) ** 2).sum())
            if best is None or score < best[0]:
                best = (score, lam, bx)
        lams.append(best[1])
        boxes.append(best[2])
    _, _, won, _ = _peel_rounds(np.stack(boxes), [r, r, r])
    return won, lams, t


# ---------------------------------------------------------------------------
# CSV emission (Tables 1-4 layout)

def distributions_to_csv(dists: Sequence[RoundDistribution], k_max: int = 7) -> str:
    lines = ["i,k,p"]
    for i, dist in enumerate(dists, start=1):
        for k in range(1, k_max + 1):
            lines.append(f"{i},{k},{dist.p_k(k):.5f}")
        lines.append(f"{i},sigma,{dist.sigma:.5f}")
    return "\n".join(lines) + "\n"


def simtable_to_csv(table: SimTable, k_max: int = 7) -> str:
    lines = ["i,k,N"]
    for i, row in enumerate(table.counts, start=1):
        for k in range(1, k_max + 1):
            v = int(row[k - 1]) if k - 1 < len(row) else 0
            lines.append(f"{i},{k},{v}")
        lines.append(f"{i},sum,{table.sums[i - 1]}")
    return "\n".join(lines) + "\n"
