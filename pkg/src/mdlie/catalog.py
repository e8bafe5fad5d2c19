"""Named algebras, the parametrized 5-dimensional bracket family, and the
theta-boundary experiment.

Families are stored as bracket patterns whose coefficients are polynomial
expressions in the parameters, e.g. ``{(1, 5): {5: "b3 + c4"}}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .algebra import (
    BracketTable,
    LieAlgebra,
    derived_algebra,
    fingerprint,
    jacobi_residual_generic,
    split_central_factor,
    validate,
)
from .md import MdVerdict, VerdictKind, md_check, scan_ranks, t211_counterexample
from .poly import MultiPoly, parse_poly

# -- family templates -------------------------------------------------------------


@dataclass(frozen=True)
class FamilyTemplate:
    name: str
    params: tuple[str, ...]
    pattern: tuple  # ((i, j), ((l, expression), ...)), ...

    def pattern_map(self) -> dict[tuple[int, int], dict[int, str]]:
        return {pair: dict(terms) for pair, terms in self.pattern}


def _template(name, params, pattern) -> FamilyTemplate:
    return FamilyTemplate(
        name, tuple(params), tuple((pair, tuple(sorted(terms.items()))) for pair, terms in pattern.items())
    )


# brackets after trace, scaling and ideal normalizations; [X2, X5] = 0
FULL = _template(
    "full",
    ("a3", "a4", "a5", "b3", "b4", "c3", "c4", "d5", "e3", "e4", "f3", "f4"),
    {
        (1, 2): {3: "a3", 4: "a4", 5: "a5"},
        (1, 3): {3: "b3", 4: "b4"},
        (1, 4): {3: "c3", 4: "c4"},
        (1, 5): {5: "d5"},
        (2, 3): {3: "e3", 4: "e4"},
        (2, 4): {3: "f3", 4: "f4"},
        (3, 4): {5: "1"},
    },
)

REDUCED = _template(
    "reduced",
    ("a5", "b3", "b4", "c3", "c4", "e3", "e4", "f3"),
    {
        (1, 2): {5: "a5"},
        (1, 3): {3: "b3", 4: "b4"},
        (1, 4): {3: "c3", 4: "c4"},
        (1, 5): {5: "b3 + c4"},
        (2, 3): {3: "e3", 4: "e4"},
        (2, 4): {3: "f3", 4: "-e3"},
        (3, 4): {5: "1"},
    },
)

THETA = _template(
    "theta",
    ("lam", "mu", "theta"),
    {
        (1, 2): {5: "lam"},
        (1, 3): {3: "mu"},
        (1, 4): {4: "mu"},
        (1, 5): {5: "2*mu"},
        (2, 3): {4: "1"},
        (2, 4): {3: "theta"},
        (3, 4): {5: "1"},
    },
)

TEMPLATES = {t.name: t for t in (FULL, REDUCED, THETA)}
_ALIASES = {"lambda": "lam", "λ": "lam", "μ": "mu", "θ": "theta"}

# substitutions turning the full system into the reduced one
REDUCED_SUBSTITUTION = {"a3": "0", "a4": "0", "d5": "b3 + c4", "f4": "-e3"}
CASE2_SUBSTITUTION = {**REDUCED_SUBSTITUTION, "e3": "1", "e4": "0"}


def symbolic_brackets(template: FamilyTemplate) -> dict[tuple[int, int], dict[int, MultiPoly]]:
    names = template.params
    return {
        pair: {l: parse_poly(expr, names) for l, expr in terms.items()}
        for pair, terms in template.pattern_map().items()
    }


def _normalize_point(point: Mapping) -> dict[str, Fraction]:
    return {_ALIASES.get(k, k): Fraction(v) for k, v in point.items()}


def template_for(point: Mapping) -> FamilyTemplate:
    keys = set(_normalize_point(point))
    if keys & set(THETA.params):
        return THETA
    if keys & {"a3", "a4", "d5", "f4"}:
        return FULL
    return REDUCED


def instantiate_family(point: Mapping, template: FamilyTemplate | None = None, name: str | None = None) -> BracketTable:
    """Bracket table of the family at a parameter point (no Jacobi check)."""
    point = _normalize_point(point)
    template = template or template_for(point)
    missing = [p for p in template.params if p not in point]
    if missing:
        raise ValueError(f"missing parameter(s) for template {template.name!r}: {', '.join(missing)}")
    values = [point[p] for p in template.params]
    brackets = {
        pair: {l: poly.evaluate(values) for l, poly in terms.items()}
        for pair, terms in symbolic_brackets(template).items()
    }
    return BracketTable(5, brackets, name)


def is_degenerate(t: BracketTable) -> bool:
    return derived_algebra(t).dim < 3


# -- Jacobi relations ---------------------------------------------------------------


def jacobi_relations(
    template: FamilyTemplate, substitution: Mapping[str, str] | None = None
) -> set[MultiPoly]:
    """Coefficients of all Jacobi residuals, as primitive polynomials in the parameters.

    ``substitution`` maps parameter names to expressions in the parameters
    (e.g. ``{"f4": "-e3"}``) and is applied before expanding.
    """
    names = template.params
    gens = MultiPoly.gens(names)
    images = list(gens)
    for k, expr in (substitution or {}).items():
        images[names.index(_ALIASES.get(k, k))] = parse_poly(expr, names)
    # resolve chains such as f4 -> -e3, e3 -> 1
    for _ in names:
        nxt = [p.compose(images) for p in images]
        if nxt == images:
            break
        images = nxt
    n = 5
    zero = MultiPoly.zero(len(names), names)
    sym = symbolic_brackets(template)
    dense: dict[tuple[int, int], list[MultiPoly]] = {}
    for (i, j), terms in sym.items():
        vec = [zero] * n
        for l, p in terms.items():
            vec[l - 1] = p.compose(images)
        dense[(i, j)] = vec
        dense[(j, i)] = [-p for p in vec]

    def br(a, b):
        return dense.get((a, b), [zero] * n)

    out = set()
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                for c in jacobi_residual_generic(n, br, zero, i, j, k):
                    if not c.is_zero():
                        out.add(c.primitive())
    return out


def _monomial_quotient(p: MultiPoly, q: MultiPoly) -> bool:
    """True when p = c * m * q for a scalar c and a monomial m."""
    (ep, cp), (eq, cq) = p.sorted_terms()[0], q.sorted_terms()[0]
    shift = tuple(x - y for x, y in zip(ep, eq))
    if min(shift) < 0:
        return False
    mono = MultiPoly(p.nvars, {shift: cp / cq}, p.names)
    return mono * q == p


def minimal_relations(rels: set[MultiPoly]) -> set[MultiPoly]:
    """Drop members that are a monomial multiple of another member.

    The dropped polynomials vanish wherever the kept ones do, so the zero
    set is unchanged.
    """
    rels = set(rels)
    return {p for p in rels if not any(q != p and _monomial_quotient(p, q) for q in rels)}


def parse_relations(texts, template: FamilyTemplate) -> set[MultiPoly]:
    return {parse_poly(t, template.params).primitive() for t in texts}


# -- theta experiment ---------------------------------------------------------------


@dataclass
class ThetaResult:
    theta: Fraction
    table: BracketTable
    degenerate: str | None = None  # reason, when no verdict is forced
    verdict: MdVerdict | None = None


def theta_scan(
    thetas, mu=1, lam=0, bound: int = 2, seed: int = 0, samples: int = 100, workers: int = 1
) -> dict[Fraction, ThetaResult]:
    out = {}
    mu, lam = Fraction(mu), Fraction(lam)
    for th in thetas:
        th = Fraction(th)
        t = instantiate_family({"theta": th, "mu": mu, "lam": lam}, THETA, name=f"theta({th})")
        if mu == 0 and lam == 0:
            out[th] = ThetaResult(th, t, "mu = lambda = 0")
            continue
        if is_degenerate(t):
            out[th] = ThetaResult(th, t, "dim G^1 < 3")
            continue
        a = validate(t)
        if not isinstance(a, LieAlgebra):
            out[th] = ThetaResult(th, t, "Jacobi identity fails")
            continue
        out[th] = ThetaResult(th, a, verdict=md_check(a, bound=bound, seed=seed, samples=samples, workers=workers))
    return out


# -- catalog ------------------------------------------------------------------------------


@dataclass
class CatalogEntry:
    name: str
    table: BracketTable
    description: str
    expected_kind: VerdictKind | None = None  # None for raw entries
    expected_rank: int | None = None
    expected_fingerprint: tuple | None = None
    expected_spectrum: tuple[int, ...] | None = None
    decomposable: bool = False
    raw: bool = False
    tags: tuple[str, ...] = field(default_factory=tuple)


def _table(n, brackets, name) -> BracketTable:
    return BracketTable(n, brackets, name)


def md5_nc() -> LieAlgebra:
    return LieAlgebra(
        5,
        {(1, 3): {3: 1}, (1, 4): {4: 1}, (1, 5): {5: 2}, (2, 3): {4: 1}, (2, 4): {3: -1}, (3, 4): {5: 1}},
        "md5-nc",
    )


def heisenberg3() -> LieAlgebra:
    return LieAlgebra(3, {(1, 2): {3: 1}}, "heisenberg3")


def codim1_diag(eigenvalues, name: str | None = None) -> LieAlgebra:
    """[X1, Xj] = lambda_j Xj on an abelian ideal span(X2..Xn)."""
    n = len(eigenvalues) + 1
    return LieAlgebra(n, {(1, j + 2): {j + 2: c} for j, c in enumerate(eigenvalues)}, name)


def case11() -> LieAlgebra:
    return LieAlgebra(5, {(1, 3): {3: 1}, (1, 4): {4: -1}, (3, 4): {5: 1}}, "case11")


def case12() -> LieAlgebra:
    point = dict(a5=0, b3=1, b4=0, c3=0, c4=1, e3=0, e4=0, f3=1)
    return _valid(instantiate_family(point, REDUCED, "case12"))


def case2(c4=1, a5=0) -> LieAlgebra:
    point = dict(a5=a5, b3=0, b4=0, c3=0, c4=c4, e3=1, e4=0, f3=0)
    return _valid(instantiate_family(point, REDUCED, f"case2(c4={Fraction(c4)},a5={Fraction(a5)})"))


def theta_family(theta, mu=1, lam=0) -> LieAlgebra:
    th, mu, lam = Fraction(theta), Fraction(mu), Fraction(lam)
    return _valid(instantiate_family({"theta": th, "mu": mu, "lam": lam}, THETA, f"theta({th},mu={mu},lam={lam})"))


def t211_raw(identity: bool = False) -> BracketTable:
    if identity:
        return _table(5, {(1, 2): {3: 1}, (3, 4): {4: 1}, (3, 5): {5: 1}}, "t211-raw-identity")
    return _table(5, {(1, 2): {3: 1}, (3, 4): {4: 1, 5: 1}, (3, 5): {5: 1}}, "t211-raw")


def broken_jacobi() -> BracketTable:
    return _table(3, {(1, 2): {3: 1}, (1, 3): {1: -1}}, "broken-jacobi")


def cubic_norm6() -> LieAlgebra:
    """Generic rank 6 whose top Pfaffian is the norm form of Q(2^(1/3)).

    That cubic has no nonzero rational zero, so the lattice never meets the
    rank-4 locus; the degree-3 Pfaffian also stalls the reduction.
    """
    return LieAlgebra(
        6,
        {
            (1, 4): {4: 1},
            (1, 5): {5: 1},
            (1, 6): {6: 1},
            (2, 4): {5: 1},
            (2, 5): {6: 1},
            (2, 6): {4: 2},
            (3, 4): {6: 1},
            (3, 5): {4: 2},
            (3, 6): {5: 2},
        },
        "cubic-norm-6",
    )


def _valid(t: BracketTable) -> LieAlgebra:
    a = validate(t)
    if not isinstance(a, LieAlgebra):
        raise ValueError(f"{t.name}: Jacobi identity fails at {[v.triple for v in a]}")
    return a


P, R, I = VerdictKind.PROVED, VerdictKind.REFUTED, VerdictKind.INCONCLUSIVE


def catalog() -> list[CatalogEntry]:
    """All named algebras with frozen expectations."""
    e = [
        CatalogEntry(
            "md5-nc", md5_nc(), "the 5-dim MD-algebra with non-commutative derived ideal",
            P, 4, (5, (5, 3, 1, 0), (5, 3), 0), (0, 4), tags=("md5",),
        ),
        CatalogEntry("heisenberg3", heisenberg3(), "[X1,X2]=X3", P, 2, (3, (3, 1, 0), (3, 1, 0), 1), (0, 2)),
    ]
    for n in range(2, 7):
        e.append(
            CatalogEntry(f"abelian-{n}", LieAlgebra(n, {}, f"abelian-{n}"), "abelian", P, 0,
                         (n, (n, 0), (n, 0), n), (0,), decomposable=True)
        )
    e += [
        CatalogEntry("codim1-diag-5", codim1_diag((1, 2, 3, 4), "codim1-diag-5"),
                     "[X1,Xj]=(j-1)Xj, abelian codim-1 derived ideal", P, 2, (5, (5, 4, 0), (5, 4), 0), (0, 2)),
        CatalogEntry("codim1-diag-6", codim1_diag((1, -1, 2, 3, -5), "codim1-diag-6"),
                     "[X1,Xj]=lambda_j Xj, n=6", P, 2, (6, (6, 5, 0), (6, 5), 0), (0, 2)),
        CatalogEntry("case11", case11(), "a5 = b3 + c4 = 0 instance; X2 central",
                     P, 2, (5, (5, 3, 1, 0), (5, 3), 2), decomposable=True),
        CatalogEntry("case12", case12(), "b3=c4=f3=1 normalized instance",
                     R, 4, (5, (5, 3, 1, 0), (5, 3), 0), tags=("converse",)),
        CatalogEntry("case2", case2(1, 0), "e3=1, c4=1, a5=0 instance", R, 4, (5, (5, 3, 1, 0), (5, 3), 0)),
        CatalogEntry("case2-c4-0", case2(0, 0), "e3=1, c4=a5=0: X1 central",
                     P, 2, (5, (5, 3, 1, 0), (5, 3), 2), decomposable=True),
    ]
    for th in ("-2", "-1/2", "1", "2", "4"):
        th = Fraction(th)
        kind = P if th < 0 else R
        e.append(
            CatalogEntry(f"theta({th})", theta_family(th), "theta family, mu=1, lambda=0",
                         kind, 4, (5, (5, 3, 1, 0), (5, 3), 0), tags=("theta",))
        )
    e += [
        CatalogEntry("case32", theta_family(-1, 0, 1), "mu=0, lambda=1", R, 4, (5, (5, 3, 1, 0), (5, 3), 1)),
        CatalogEntry("cubic-norm-6", cubic_norm6(), "generic rank 6, degree-3 Pfaffian without rational zeros",
                     I, 6, (6, (6, 3, 0), (6, 3), 0)),
        CatalogEntry("t211-raw", t211_raw(), "shape-conforming raw table, A = [[1,0],[1,1]]", raw=True, tags=("t211",)),
        CatalogEntry("t211-raw-identity", t211_raw(True), "shape-conforming raw table, A = identity", raw=True, tags=("t211",)),
        CatalogEntry("broken-jacobi", broken_jacobi(), "Jacobi fails at (1,2,3)", raw=True, tags=("invalid",)),
    ]
    return e


def get_entry(name: str) -> CatalogEntry:
    for entry in catalog():
        if entry.name == name:
            return entry
    raise KeyError(f"unknown catalog entry: {name}")


@dataclass
class EntryCheck:
    name: str
    ok: bool
    detail: str
    verdict: MdVerdict | None = None


def check_entry(entry: CatalogEntry, bound: int = 2, samples: int = 100, seed: int = 0, workers: int = 1) -> EntryCheck:
    t = entry.table
    if entry.raw:
        if "t211" in entry.tags:
            try:
                ce = t211_counterexample(t)
            except ValueError as exc:
                return EntryCheck(entry.name, False, str(exc))
            return EntryCheck(entry.name, True, f"rank gap {ce.rank1} -> {ce.rank2}")
        bad = validate(t)
        ok = not isinstance(bad, LieAlgebra)
        return EntryCheck(entry.name, ok, "invalid as expected" if ok else "unexpectedly valid")
    problems = []
    if not isinstance(validate(t), LieAlgebra):
        return EntryCheck(entry.name, False, "Jacobi identity fails")
    fp = fingerprint(t)
    if entry.expected_fingerprint is not None and fp != entry.expected_fingerprint:
        problems.append(f"fingerprint {fp} != {entry.expected_fingerprint}")
    if (split_central_factor(t) is not None) != entry.decomposable:
        problems.append("decomposability mismatch")
    v = md_check(t, bound=bound, seed=seed, samples=samples, workers=workers)
    if v.kind != entry.expected_kind:
        problems.append(f"verdict {v.kind.value} != {entry.expected_kind.value}")
    if v.generic_rank != entry.expected_rank:
        problems.append(f"generic rank {v.generic_rank} != {entry.expected_rank}")
    if entry.expected_spectrum is not None:
        spec = scan_ranks(t, bound, 0, seed)
        if tuple(spec.ranks) != entry.expected_spectrum:
            problems.append(f"spectrum {spec.ranks} != {list(entry.expected_spectrum)}")
    return EntryCheck(entry.name, not problems, "; ".join(problems) or "ok", v)
