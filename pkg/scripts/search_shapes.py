"""Exhaustive integer searches over bracket shapes.

Usage: python3 scripts/search_shapes.py [--bound 2] [--workers 1]
"""
import argparse
import time

from mdlie.search import SearchConfig, codim1_abelian_shape, lattice_search, nonabelian_2dim_derived_shape, theta_grid_shape


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()
    runs = [
        (nonabelian_2dim_derived_shape(), args.bound),
        (theta_grid_shape(), args.bound),
        (codim1_abelian_shape(4, "full"), 1),
        (codim1_abelian_shape(5, "diagonal"), 1),
    ]
    for shape, bound in runs:
        t0 = time.perf_counter()
        r = lattice_search(shape, SearchConfig(bound=bound, workers=args.workers))
        dt = time.perf_counter() - t0
        print(f"{shape.name} (bound {bound}, {dt:.1f} s)")
        for k, v in r.summary().items():
            print(f"  {k}: {v}")
        for h in r.hits:
            print(f"    {h.kind or '-':<12} decomposable={h.decomposable!s:<5} x{len(h.points):<5} {h.fingerprint}")


if __name__ == "__main__":
    main()
