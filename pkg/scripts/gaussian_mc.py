#!/usr/bin/env python3
"""Joint-limit Monte Carlo: moments of S(F)/sqrt(q) at large q and d,
against the exact finite-q model and the Gaussian limit values."""

import argparse
import math
import time

from charcensus import build_field, gaussian_moment, model_moment, run_distribution


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=101)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--d", type=int, default=60)
    ap.add_argument("--samples", type=int, default=2_000_000)
    ap.add_argument("--seed", type=int, default=20260810)
    ap.add_argument("--k-max", type=int, default=6, dest="k_max")
    ap.add_argument("--threads", type=int, default=2)
    args = ap.parse_args()

    field = build_field(args.p, args.k)
    t0 = time.perf_counter()
    emp = run_distribution(
        field, args.d, mode="montecarlo", samples=args.samples,
        seed=args.seed, threads=args.threads,
    )
    print(
        f"q = {field.q}, d = {args.d}, N = {args.samples}, seed = {args.seed} "
        f"({time.perf_counter() - t0:.1f}s)"
    )
    print(f"{'k':>3} {'empirical':>12} {'stderr':>10} {'model':>12} {'gaussian':>9} {'z_model':>8}")
    for k in range(1, args.k_max + 1):
        mk = emp.normalized_moment(k)
        m2k = emp.normalized_moment(2 * k)
        se = math.sqrt(max(m2k - mk * mk, 0.0) / emp.total)
        model = float(model_moment(field.q, k))
        z = (mk - model) / se if se else float("nan")
        print(f"{k:>3} {mk:12.6f} {se:10.2e} {model:12.6f} {gaussian_moment(k):>9} {z:8.2f}")


if __name__ == "__main__":
    main()
