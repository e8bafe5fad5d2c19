"""Exhaustive integer search over bracket tables of a prescribed shape.

A shape places named integer slots into structure constants.  Enumeration
is a depth-first walk over the slots in their declared order; a Jacobi
triple is checked as soon as every slot it depends on is assigned, and a
failing prefix is skipped together with all of its completions.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .algebra import (
    BracketTable,
    LieAlgebra,
    Subspace,
    derived_algebra,
    derived_series,
    fingerprint,
    jacobi_residual_generic,
    series_dims,
    split_central_factor,
)
from .md import MdVerdict, md_check
from .poly import MultiPoly

Placement = tuple[int, int, int, Fraction]  # (i, j, l, coefficient): C^l_ij += coef * slot


@dataclass(frozen=True)
class SearchShape:
    name: str
    dim: int
    slots: tuple[tuple[str, tuple[Placement, ...]], ...]
    fixed: tuple[Placement, ...] = ()
    nonzero: tuple[tuple[str, ...], ...] = ()  # groups that may not all be zero
    derived_span: tuple[int, ...] | None = None  # required G^1 as coordinate indices
    derived_dims: tuple[int, ...] | None = None
    values: tuple[tuple[int, ...], ...] | None = None  # per-slot override of the value range

    @property
    def slot_names(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.slots)


@dataclass(frozen=True)
class SearchConfig:
    bound: int = 2
    budget: int = 1_000_000  # visited search nodes
    md_bound: int = 1
    md_samples: int = 0
    seed: int = 0
    workers: int = 1
    run_md: bool = True


@dataclass
class SearchHit:
    fingerprint: tuple
    kind: str | None  # verdict kind, None when md_check is skipped
    decomposable: bool
    table: BracketTable
    verdict: MdVerdict | None
    points: list[tuple[int, ...]] = field(default_factory=list)


@dataclass
class SearchResult:
    shape: str
    bound: int
    total: int  # size of the full grid
    visited: int
    jacobi_invalid: int
    excluded: int  # violate a nonzero group
    wrong_shape: int  # Jacobi-valid, derived algebra not as prescribed
    survivors: int
    hits: list[SearchHit]
    partial: bool

    def summary(self) -> dict:
        return {
            "shape": self.shape,
            "bound": self.bound,
            "total": self.total,
            "visited": self.visited,
            "jacobi_invalid": self.jacobi_invalid,
            "excluded": self.excluded,
            "wrong_shape": self.wrong_shape,
            "survivors": self.survivors,
            "classes": len(self.hits),
            "partial": self.partial,
        }


# -- named shapes ---------------------------------------------------------------------


def _slot(name, *placements) -> tuple:
    return name, tuple((i, j, l, Fraction(c)) for i, j, l, c in placements)


def nonabelian_2dim_derived_shape() -> SearchShape:
    """n = 4, every bracket in span(X3, X4), [X3, X4] = a X3 + b X4 with (a, b) != 0."""
    slots = [_slot("a", (3, 4, 3, 1)), _slot("b", (3, 4, 4, 1))]
    for i, j in ((1, 3), (1, 4), (2, 3), (2, 4), (1, 2)):
        for l in (3, 4):
            slots.append(_slot(f"c{l}_{i}{j}", (i, j, l, 1)))
    return SearchShape(
        "nonabelian-2dim-derived", 4, tuple(slots), nonzero=(("a", "b"),), derived_span=(3, 4)
    )


def theta_grid_shape(values=range(-2, 3)) -> SearchShape:
    v = tuple(values)
    return SearchShape(
        "theta-grid",
        5,
        (
            _slot("theta", (2, 4, 3, 1)),
            _slot("mu", (1, 3, 3, 1), (1, 4, 4, 1), (1, 5, 5, 2)),
            _slot("lam", (1, 2, 5, 1)),
        ),
        fixed=((2, 3, 4, Fraction(1)), (3, 4, 5, Fraction(1))),
        values=(v, v, v),
    )


def codim1_abelian_shape(n: int = 4, pattern: str = "upper") -> SearchShape:
    """[X1, Xj] = sum_l a_lj Xl on span(X2..Xn); pattern full | upper | diagonal."""
    slots = []
    for j in range(2, n + 1):
        for l in range(2, n + 1):
            if pattern == "diagonal" and l != j:
                continue
            if pattern == "upper" and l > j:
                continue
            slots.append(_slot(f"a{l}{j}", (1, j, l, 1)))
    return SearchShape(f"codim1-abelian-{pattern}-{n}", n, tuple(slots), derived_span=tuple(range(2, n + 1)))


SHAPES = {
    "nonabelian-2dim-derived": nonabelian_2dim_derived_shape,
    "theta-grid": theta_grid_shape,
    "codim1-abelian": codim1_abelian_shape,
}


# -- enumeration ----------------------------------------------------------------------------


class _Plan:
    """Slot order, value ranges and the Jacobi triples checked at each depth."""

    def __init__(self, shape: SearchShape, bound: int):
        self.shape = shape
        n = shape.dim
        self.values = [
            tuple(shape.values[k]) if shape.values else tuple(range(-bound, bound + 1))
            for k in range(len(shape.slots))
        ]
        slot_index = {name: k for k, name in enumerate(shape.slot_names)}
        pair_slots: dict[tuple[int, int], set[int]] = {}
        support: dict[tuple[int, int], set[int]] = {}
        for k, (_, places) in enumerate(shape.slots):
            for i, j, l, _c in places:
                pair_slots.setdefault((i, j), set()).add(k)
                support.setdefault((i, j), set()).add(l)
        for i, j, l, _c in shape.fixed:
            support.setdefault((i, j), set()).add(l)

        def key(a, b):
            return (a, b) if a < b else (b, a)

        self.checks: dict[int, list[tuple[int, int, int]]] = {}
        for tri in itertools.combinations(range(1, n + 1), 3):
            pairs = {key(a, b) for a, b in itertools.combinations(tri, 2)}
            inner_support = set().union(*(support.get(p, set()) for p in pairs))
            deps = set(pairs) | {key(a, m) for a in tri for m in inner_support if m != a}
            slots = set().union(*(pair_slots.get(p, set()) for p in deps))
            depth = max(slots) if slots else -1
            self.checks.setdefault(depth, []).append(tri)
        self.groups = {}
        for g in shape.nonzero:
            ks = [slot_index[s] for s in g]
            self.groups.setdefault(max(ks), []).append(ks)
        self.tail = [prod(len(v) for v in self.values[d + 1 :]) for d in range(len(self.values))]
        self.compiled = self._compile()

    def table(self, point) -> BracketTable:
        n = self.shape.dim
        acc: dict[tuple[int, int], dict[int, Fraction]] = {}
        for i, j, l, c in self.shape.fixed:
            acc.setdefault((i, j), {})
            acc[(i, j)][l] = acc[(i, j)].get(l, 0) + c
        for v, (_, places) in zip(point, self.shape.slots):
            if v:
                for i, j, l, c in places:
                    acc.setdefault((i, j), {})
                    acc[(i, j)][l] = acc[(i, j)].get(l, 0) + c * v
        return BracketTable(n, acc)

    def _compile(self) -> dict[int, list[list[tuple]]]:
        """Jacobi residual coordinates as polynomials in the slot values.

        Each polynomial is a list of (coefficient, slot indices) terms; the
        residuals are at most quadratic in the slots.
        """
        shape = self.shape
        n = shape.dim
        k = len(shape.slots)
        gens = [MultiPoly.var(k, s) for s in range(k)]
        zero = MultiPoly.zero(k)
        dense: dict[tuple[int, int], list[MultiPoly]] = {}
        for i, j, l, c in shape.fixed:
            vec = dense.setdefault((i, j), [zero] * n)
            vec[l - 1] = vec[l - 1] + MultiPoly.constant(k, c)
        for s, (_, places) in enumerate(shape.slots):
            for i, j, l, c in places:
                vec = dense.setdefault((i, j), [zero] * n)
                vec[l - 1] = vec[l - 1] + gens[s] * c
        for (i, j), vec in list(dense.items()):
            dense[(j, i)] = [-p for p in vec]

        def br(a, b):
            return dense.get((a, b), [zero] * n)

        out: dict[int, list[list[tuple]]] = {}
        for depth, triples in self.checks.items():
            polys = []
            for tri in triples:
                for p in jacobi_residual_generic(n, br, zero, *tri):
                    if p.is_zero():
                        continue
                    terms = []
                    for e, c in p.terms.items():
                        idx = tuple(s for s, m in enumerate(e) for _ in range(m))
                        terms.append((int(c) if c.denominator == 1 else c, idx))
                    polys.append(terms)
            out[depth] = polys
        return out

    def jacobi_ok(self, point, depth: int) -> bool:
        for terms in self.compiled.get(depth, ()):
            acc = 0
            for c, idx in terms:
                for s in idx:
                    c = c * point[s]
                    if not c:
                        break
                acc += c
            if acc:
                return False
        return True


@dataclass
class _Counts:
    visited: int = 0
    invalid: int = 0
    excluded: int = 0
    complete: list = field(default_factory=list)
    partial: bool = False


def _walk(plan: _Plan, prefix: tuple, budget: int) -> _Counts:
    counts = _Counts()
    if -1 in plan.checks and not prefix and not plan.jacobi_ok((), -1):
        counts.invalid = prod(len(v) for v in plan.values)
        return counts
    nslots = len(plan.values)

    def rec(point):
        d = len(point)
        if d == nslots:
            counts.complete.append(point)
            return
        for v in plan.values[d]:
            if counts.visited >= budget:
                counts.partial = True
                return
            counts.visited += 1
            p = point + (v,)
            if any(all(p[k] == 0 for k in g) for g in plan.groups.get(d, [])):
                counts.excluded += plan.tail[d]
                continue
            if d in plan.checks and not plan.jacobi_ok(p, d):
                counts.invalid += plan.tail[d]
                continue
            rec(p)
            if counts.partial:
                return

    if prefix:
        # the prefix was already counted and checked by the caller
        rec(prefix)
    else:
        rec(())
    return counts


def _walk_job(args):
    shape, bound, prefix, budget = args
    return _walk(_Plan(shape, bound), prefix, budget)


def _prefixes(plan: _Plan) -> tuple[list[tuple], _Counts]:
    """Depth-0 children that pass their own checks, with the counts for the rest."""
    counts = _Counts()
    out = []
    for v in plan.values[0]:
        counts.visited += 1
        p = (v,)
        if any(all(p[k] == 0 for k in g) for g in plan.groups.get(0, [])):
            counts.excluded += plan.tail[0]
        elif 0 in plan.checks and not plan.jacobi_ok(p, 0):
            counts.invalid += plan.tail[0]
        else:
            out.append(p)
    return out, counts


def lattice_search(shape: SearchShape, config: SearchConfig = SearchConfig()) -> SearchResult:
    plan = _Plan(shape, config.bound)
    total = prod(len(v) for v in plan.values)
    if config.workers > 1 and plan.values and -1 not in plan.checks:
        prefixes, counts = _prefixes(plan)
        jobs = [(shape, config.bound, p, config.budget) for p in prefixes]
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(_walk_job, jobs))
        # ordered merge; the budget is then applied to the merged node count
        for part in parts:
            counts.visited += part.visited
            counts.invalid += part.invalid
            counts.excluded += part.excluded
            counts.complete.extend(part.complete)
            counts.partial |= part.partial
        if counts.visited > config.budget:
            counts = _walk(plan, (), config.budget)
    else:
        counts = _walk(plan, (), config.budget)

    wrong = 0
    survivors = 0
    hits: dict[tuple, SearchHit] = {}
    span = Subspace.coordinate(shape.dim, shape.derived_span) if shape.derived_span else None
    for point in counts.complete:
        t = plan.table(point)
        if span is not None and derived_algebra(t) != span:
            wrong += 1
            continue
        if shape.derived_dims is not None and series_dims(derived_series(t)) != shape.derived_dims:
            wrong += 1
            continue
        survivors += 1
        a = LieAlgebra._trusted(t)
        fp = fingerprint(a)
        dec = split_central_factor(a) is not None
        verdict = None
        if config.run_md:
            verdict = md_check(a, bound=config.md_bound, seed=config.seed, samples=config.md_samples)
        key = (fp, verdict.kind.value if verdict else None, dec)
        if key not in hits:
            hits[key] = SearchHit(fp, key[1], dec, a.renamed(f"{shape.name}{list(point)}"), verdict)
        hits[key].points.append(point)
    return SearchResult(
        shape.name,
        config.bound,
        total,
        counts.visited,
        counts.invalid,
        counts.excluded,
        wrong,
        survivors,
        list(hits.values()),
        counts.partial,
    )
