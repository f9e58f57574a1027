"""Command-line front end.

Subcommands: multiply, dynamics, taucrit, simulate, densebench, gen,
verify.  Exit codes: 0 success, 1 I/O or parse error, 2 algorithmic
fallback taken, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
import time

from . import cyclic, dynamics, polycore, unconditional
from .pipeline import RecoveryParams, multiply_heuristic
from .polycore import ParseError, SparsePoly, naive_mul

EXIT_OK = 0
EXIT_IO = 1
EXIT_FALLBACK = 2
EXIT_VERIFY = 3


def _load(path: str) -> SparsePoly:
    with open(path, "r", encoding="utf-8") as fh:
        return polycore.parse_poly(fh.read())


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_seed(args) -> int:
    if args.seed is None:
        seed = secrets.randbits(63)
        print(f"seed: {seed}", file=sys.stderr)
        return seed
    return args.seed


def _cmd_multiply(args) -> int:
    try:
        p = _load(args.p)
        q = _load(args.q)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    seed = _resolve_seed(args)
    info: dict = {}
    cyclic.reset_mul_timer()
    t0 = time.perf_counter()
    if args.algo == "naive":
        r = naive_mul(p, q)
    elif args.algo == "heuristic":
        params = RecoveryParams(tau=args.tau, eps=args.eps, T=args.T, seed=seed)
        r = multiply_heuristic(p, q, params, info=info)
    else:
        run = unconditional.RunInfo()
        r = unconditional.multiply_unconditional(p, q, seed=seed, info=run)
        info = {"attempts": run.attempts, "fallback": run.fallback}
    elapsed = time.perf_counter() - t0
    try:
        _emit(polycore.serialize(r), args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.json:
        summary = {
            "algo": args.algo,
            "seed": seed,
            "seconds": elapsed,
            "cyclic_seconds": cyclic.mul_seconds,
            "cyclic_share": cyclic.mul_seconds / elapsed if elapsed else 0.0,
            "terms": len(r),
            **info,
        }
        print(json.dumps(summary), file=sys.stderr)
    if info.get("fallback"):
        return EXIT_FALLBACK
    return EXIT_OK


def _cmd_dynamics(args) -> int:
    dists = dynamics.iterate(args.tau, args.rounds)
    _emit(dynamics.distributions_to_csv(dists), args.out)
    return EXIT_OK


def _cmd_taucrit(args) -> int:
    lo, hi = dynamics.estimate_tau_crit(args.tol)
    closed = dynamics.tau_crit_closed_form()
    if args.json:
        print(json.dumps({"lo": lo, "hi": hi, "closed_form": closed}))
    else:
        print(f"critical ratio in ({lo:.7f}, {hi:.7f}); closed form {closed:.9f}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    seed = _resolve_seed(args)
    table = dynamics.simulate_game(args.t, args.tau, seed)
    _emit(dynamics.simtable_to_csv(table), args.out)
    if args.json:
        print(
            json.dumps({"won": table.won, "rounds": table.rounds, "seed": seed}),
            file=sys.stderr,
        )
    return EXIT_OK


def _cmd_densebench(args) -> int:
    seed = _resolve_seed(args)
    won, lams, t = dynamics.dense_support_experiment(
        args.n, args.d // 2, args.d - args.d // 2, args.tau, seed
    )
    result = {
        "won": won,
        "t": t,
        "tau": args.tau,
        "seed": seed,
        "lambdas": [[int(x) for x in lam] for lam in lams],
    }
    if args.json:
        print(json.dumps(result))
    else:
        print(f"{'win' if won else 'lose'} (t={t}, tau={args.tau})")
    return EXIT_OK


def _cmd_gen(args) -> int:
    seed = _resolve_seed(args)
    p = polycore.random_poly(args.n, args.t, args.d, args.height, seed)
    try:
        _emit(polycore.serialize(p), args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        p = _load(args.p)
        q = _load(args.q)
        r = _load(args.r)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    seed = _resolve_seed(args)
    ok = all(
        polycore.verify_product(p, q, r, seed + k) for k in range(args.checks)
    )
    print("ok" if ok else "MISMATCH")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spmul", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    m = sub.add_parser("multiply", help="multiply two .sp files")
    m.add_argument("p")
    m.add_argument("q")
    m.add_argument("--algo", choices=["naive", "heuristic", "unconditional"],
                   default="heuristic")
    m.add_argument("--tau", type=float, default=0.45)
    m.add_argument("--eps", type=float, default=2.0**-20)
    m.add_argument("--T", type=int, default=None)
    m.add_argument("--seed", type=int, default=None)
    m.add_argument("--out", default=None)
    m.add_argument("--json", action="store_true")
    m.set_defaults(fn=_cmd_multiply)

    dyn = sub.add_parser("dynamics", help="occupancy recurrence table as CSV")
    dyn.add_argument("--tau", type=float, required=True)
    dyn.add_argument("--rounds", type=int, default=11)
    dyn.add_argument("--out", default=None)
    dyn.set_defaults(fn=_cmd_dynamics)

    tc = sub.add_parser("taucrit", help="bracket the critical box ratio")
    tc.add_argument("--tol", type=float, default=1e-6)
    tc.add_argument("--json", action="store_true")
    tc.set_defaults(fn=_cmd_taucrit)

    sim = sub.add_parser("simulate", help="random game simulation as CSV")
    sim.add_argument("--t", type=int, required=True)
    sim.add_argument("--tau", type=float, default=0.5)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--out", default=None)
    sim.add_argument("--json", action="store_true")
    sim.set_defaults(fn=_cmd_simulate)

    db = sub.add_parser("densebench", help="dense-support game experiment")
    db.add_argument("--n", type=int, required=True)
    db.add_argument("--d", type=int, required=True)
    db.add_argument("--tau", type=float, default=1.14)
    db.add_argument("--seed", type=int, default=None)
    db.add_argument("--json", action="store_true")
    db.set_defaults(fn=_cmd_densebench)

    g = sub.add_parser("gen", help="write a random .sp polynomial")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--t", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--height", type=int, default=1 << 16)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", default=None)
    g.set_defaults(fn=_cmd_gen)

    v = sub.add_parser("verify", help="probabilistically check R = P*Q")
    v.add_argument("p")
    v.add_argument("q")
    v.add_argument("r")
    v.add_argument("--checks", type=int, default=3)
    v.add_argument("--seed", type=int, default=None)
    v.set_defaults(fn=_cmd_verify)
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
