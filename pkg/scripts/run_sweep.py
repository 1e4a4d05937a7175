#!/usr/bin/env python3
"""Counterexample hunt: sweep scenario grids against the length bound.

Runs the standard 3 x 3 x 3 x 8 grid (orders x coefficient bounds x
interval lengths x initial-data directions), prints verdict counts and
the smallest observed lhs/rhs margin, then re-runs at doubled resolution
and reports whether any verdict changed.

Usage:
    python scripts/run_sweep.py [--n 512] [--seed 42] [--workers 1]
"""

import argparse
import sys
import time

from fracfite import SweepSpec, sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=512)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--skip-refinement", action="store_true")
    args = ap.parse_args()

    spec = SweepSpec(alphas=(0.6, 0.75, 0.9), p_infs=(0.5, 1.0, 2.0),
                     lengths=(0.05, 0.5, 5.0), directions=8,
                     seed=args.seed, n=args.n)
    t0 = time.time()
    coarse = sweep(spec, workers=args.workers)
    print(f"sweep at n={args.n}: {time.time() - t0:.1f}s")
    for verdict, count in sorted(coarse.counts.items()):
        print(f"  {verdict:15s} {count}")
    print(f"  min lhs/rhs among zero-pair scenarios: {coarse.min_ratio:.3f}")
    if coarse.counts["COUNTEREXAMPLE"]:
        for rep in coarse.counterexamples:
            print(f"  !! {rep.scenario.label}: lhs={rep.lhs} rhs={rep.rhs}")
        return 1

    if not args.skip_refinement:
        t0 = time.time()
        fine = sweep(SweepSpec(**{**spec.__dict__, "n": 2 * args.n}),
                     workers=args.workers)
        print(f"refined sweep at n={2 * args.n}: {time.time() - t0:.1f}s")
        changed = sum(a != b for a, b in zip(coarse.verdicts, fine.verdicts))
        print(f"  verdicts changed under refinement: {changed}")
        if changed or fine.counts["COUNTEREXAMPLE"]:
            return 1
    print("no counterexamples.")
    return 0


if __name__ == "__main__":
    sys.exit(main())
