#!/usr/bin/env python3
"""Regenerate the reference CSV tables: occupancy recurrences at several
box ratios, the critical-ratio bracket, a large simulated game, and the
dense-support experiment sweep.
"""

import argparse
import pathlib

from spmul.dynamics import (
    dense_support_experiment,
    distributions_to_csv,
    estimate_tau_crit,
    iterate,
    simtable_to_csv,
    simulate_game,
    tau_crit_closed_form,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="tables")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    for tau, rounds, name in ((0.5, 11, "recurrence_tau_0.50.csv"),
                              (1 / 3, 12, "recurrence_tau_0.33.csv"),
                              (0.45, 10, "recurrence_tau_0.45.csv")):
        (outdir / name).write_text(distributions_to_csv(iterate(tau, rounds)))
        print(f"wrote {outdir / name}")

    lo, hi = estimate_tau_crit(1e-6)
    closed = tau_crit_closed_form()
    path = outdir / "critical_ratio.csv"
    path.write_text(f"lo,hi,closed_form\n{lo:.9f},{hi:.9f},{closed:.9f}\n")
    print(f"wrote {path} (bracket ({lo:.7f}, {hi:.7f}))")

    table = simulate_game(100_000, 0.5, args.seed)
    path = outdir / "simulation_t1e5_tau_0.50.csv"
    path.write_text(simtable_to_csv(table))
    print(f"wrote {path} (won={table.won}, rounds={table.rounds})")

    rows = ["tau,seed,won,t"]
    for tau in (0.45, 0.8, 1.0, 1.14, 1.3):
        for seed in range(10):
            won, _, t = dense_support_experiment(2, 50, 50, tau, args.seed + seed)
            rows.append(f"{tau},{args.seed + seed},{int(won)},{t}")
    path = outdir / "dense_support_sweep.csv"
    path.write_text("\n".join(rows) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
