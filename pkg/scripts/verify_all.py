#!/usr/bin/env python3
"""Run every property suite and print a human-readable table.

Usage:
    python scripts/verify_all.py [--trials N] [--seed S] [--max-dim D]
"""

import argparse
import sys
import time

from finexp.verify import SUITES, run_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-dim", type=int, default=6)
    args = parser.parse_args()

    all_pass = True
    print(f"{'suite':22s} {'status':6s} {'checks':>7s} {'fail':>5s} {'worst slack':>12s} {'time':>7s}")
    for name in SUITES:
        t0 = time.perf_counter()
        rep = run_suite(name, trials=args.trials, seed=args.seed, max_dim=args.max_dim)
        dt = time.perf_counter() - t0
        status = "pass" if rep.passed else "FAIL"
        all_pass &= rep.passed
        print(
            f"{name:22s} {status:6s} {rep.checks:7d} {rep.failures:5d} "
            f"{rep.worst_slack:+12.3e} {dt:6.1f}s"
        )
    return 0 if all_pass else 1


if __name__ == "__main__":
    sys.exit(main())
