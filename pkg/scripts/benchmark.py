#!/usr/bin/env python3
"""Benchmark the three multiplication paths on random instances and report
the share of wall time spent inside cyclic-algebra multiplication.

The cyclic share is informational: the asymptotic analysis predicts it
dominates, but no bound is asserted.
"""

import argparse
import json
import math
import time

from spmul import cyclic, unconditional
from spmul.pipeline import RecoveryParams, multiply_heuristic
from spmul.polycore import naive_mul, random_poly


def bench_instance(n, t, d, height, seed):
    cap = math.comb(d + n, n)
    p = random_poly(n, min(t, cap), d, height, seed)
    q = random_poly(n, min(t, cap), d, height, seed + 1)
    rows = []

    t0 = time.perf_counter()
    want = naive_mul(p, q)
    rows.append({"algo": "naive", "seconds": time.perf_counter() - t0,
                 "cyclic_seconds": 0.0, "ok": True})

    for algo, fn in (
        ("heuristic", lambda: multiply_heuristic(p, q, RecoveryParams(seed=seed + 2))),
        ("unconditional", lambda: unconditional.multiply_unconditional(p, q, seed=seed + 3)),
    ):
        cyclic.reset_mul_timer()
        t0 = time.perf_counter()
        got = fn()
        elapsed = time.perf_counter() - t0
        rows.append({"algo": algo, "seconds": elapsed,
                     "cyclic_seconds": cyclic.mul_seconds, "ok": got == want})
    return len(want.terms), rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--t", type=int, default=200)
    ap.add_argument("--d", type=int, default=30)
    ap.add_argument("--height", type=int, default=1 << 16)
    ap.add_argument("--instances", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    totals = {}
    for i in range(args.instances):
        t_r, rows = bench_instance(args.n, args.t, args.d, args.height,
                                   args.seed + 10 * i)
        for row in rows:
            agg = totals.setdefault(row["algo"], {"seconds": 0.0,
                                                  "cyclic_seconds": 0.0,
                                                  "ok": True})
            agg["seconds"] += row["seconds"]
            agg["cyclic_seconds"] += row["cyclic_seconds"]
            agg["ok"] = agg["ok"] and row["ok"]
        if not args.json:
            print(f"instance {i}: t_R={t_r}  " + "  ".join(
                f"{r['algo']}={r['seconds']:.3f}s" for r in rows))

    for algo, agg in totals.items():
        agg["cyclic_share"] = (
            agg["cyclic_seconds"] / agg["seconds"] if agg["seconds"] else 0.0
        )
    if args.json:
        print(json.dumps(totals, indent=2))
    else:
        print()
        for algo, agg in totals.items():
            print(f"{algo:14s} total {agg['seconds']:.3f}s, cyclic "
                  f"{agg['cyclic_seconds']:.3f}s "
                  f"({100 * agg['cyclic_share']:.0f}%), "
                  f"{'all correct' if agg['ok'] else 'MISMATCH'}")


if __name__ == "__main__":
    main()
