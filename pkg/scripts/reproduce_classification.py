"""Walk the classification argument for n = 5 with a non-commutative derived ideal.

Prints the Jacobi systems of the bracket family, the verdict of every
catalog entry, the md5-nc certificate, and two exhaustive searches.
"""
import argparse
import time

from mdlie.catalog import (
    CASE2_SUBSTITUTION,
    FULL,
    REDUCED_SUBSTITUTION,
    catalog,
    check_entry,
    get_entry,
    jacobi_relations,
    minimal_relations,
)
from mdlie.md import md_check
from mdlie.search import SearchConfig, codim1_abelian_shape, lattice_search, nonabelian_2dim_derived_shape


def show_relations():
    for label, sub in (("full family", None), ("after trace/ideal reductions", REDUCED_SUBSTITUTION),
                       ("e3 = 1, e4 = 0", CASE2_SUBSTITUTION)):
        rels = sorted(str(p) for p in minimal_relations(jacobi_relations(FULL, sub)))
        print(f"Jacobi relations, {label}:")
        for r in rels:
            print(f"  {r} = 0")


def show_catalog(bound, samples, seed):
    print("\ncatalog verdicts:")
    for e in catalog():
        t0 = time.perf_counter()
        c = check_entry(e, bound, samples, seed)
        dt = time.perf_counter() - t0
        print(f"  {'ok  ' if c.ok else 'FAIL'} {e.name:<20} {c.detail}  [{dt * 1000:.0f} ms]")


def show_certificate():
    v = md_check(get_entry("md5-nc").table)
    print(f"\nmd5-nc: {v.kind.value}, generic rank {v.generic_rank}")
    for subset, p in v.pfaffians[4]:
        print(f"  Pf{subset} = {p}")
    for level, res in v.certificate.reductions:
        for k, rnd in enumerate(res.rounds, start=1):
            for st in rnd:
                forms = ", ".join(str(f) for f in st.forms)
                print(f"  round {k}: {st.reduced} is {st.definiteness.value} => {forms} = 0")


def show_searches(bound):
    print("\nsearches:")
    for shape, b in ((nonabelian_2dim_derived_shape(), bound), (codim1_abelian_shape(4, "upper"), 1)):
        r = lattice_search(shape, SearchConfig(bound=b))
        s = r.summary()
        kinds = sorted({h.kind for h in r.hits if h.kind})
        print(f"  {s['shape']}: {s['total']} tables, {s['survivors']} survivors, verdicts {kinds}")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    show_relations()
    show_catalog(args.bound, args.samples, args.seed)
    show_certificate()
    show_searches(args.bound)


if __name__ == "__main__":
    main()
