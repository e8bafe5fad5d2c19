"""MD verdicts along the theta family on a rational grid.

Usage: python3 scripts/theta_boundary.py --lo -3 --hi 3 --steps 12 [--mu 1 --lam 0]
"""
import argparse
from fractions import Fraction

from mdlie.catalog import theta_scan
from mdlie.scalars import format_scalar


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--lo", type=Fraction, default=Fraction(-3))
    p.add_argument("--hi", type=Fraction, default=Fraction(3))
    p.add_argument("--steps", type=int, default=12)
    p.add_argument("--mu", type=Fraction, default=Fraction(1))
    p.add_argument("--lam", type=Fraction, default=Fraction(0))
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--samples", type=int, default=50)
    args = p.parse_args()
    step = (args.hi - args.lo) / args.steps
    grid = [args.lo + k * step for k in range(args.steps + 1)]
    res = theta_scan(grid, args.mu, args.lam, bound=args.bound, samples=args.samples)
    for th, r in res.items():
        if r.verdict is None:
            print(f"theta = {format_scalar(th):>6}: degenerate ({r.degenerate})")
            continue
        wit = ""
        if r.verdict.witnesses:
            f, k = r.verdict.witnesses[0]
            wit = f"  witness ({', '.join(format_scalar(x) for x in f)}) of rank {k}"
        print(f"theta = {format_scalar(th):>6}: {r.verdict.kind.value}{wit}")


if __name__ == "__main__":
    main()
