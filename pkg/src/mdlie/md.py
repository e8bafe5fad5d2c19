"""Deciding the MD property: every coadjoint orbit has dimension 0 or the
maximal (generic) dimension.

A rational sample can refute the property but never prove it, so verdicts
come with certificates:

* ``codim1-abelian``: the derived algebra is abelian of codimension one, so
  B_F vanishes on a codimension-one subspace and rank B_F <= 2.
* ``pfaffian-definite-reduction``: the functionals of rank <= m - 2 are the
  common real zeros of the size-m principal Pfaffians.  Semidefinite
  quadratics among them force linear forms to vanish; once every entry of
  B_F is forced to zero, only rank 0 is left below m.
* ``necessary-condition-failure``: the algebra is not solvable, has a
  non-abelian second derived algebra, or has dim G^2 = dim G^1 - 1 > 0.
"""

from __future__ import annotations

import enum
import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

from .algebra import (
    BracketTable,
    Subspace,
    bracket_span,
    derived_algebra,
    derived_series,
    is_abelian_subspace,
    series_dims,
)
from .coadjoint import (
    IntegerRankEvaluator,
    dual_basis_vector,
    integer_scaled,
    kirillov_form,
    symbolic_kirillov,
)
from .linalg import (
    ZERO,
    Definiteness,
    Matrix,
    congruence_diagonalize,
    kernel,
    rank,
    semidefiniteness,
    solve,
)
from .poly import (
    LinearForm,
    MultiPoly,
    default_names,
    gram_matrix,
    pfaffian,
    substitute_vanishing,
    vanishing_substitution,
)
from .scalars import sqrt_rational

Functional = tuple


# -- lattice enumeration -------------------------------------------------------


def primitive_lattice(n: int, bound: int) -> Iterator[tuple[int, ...]]:
    """Projective representatives of {-bound..bound}^n minus the origin.

    Dual basis vectors come first, then the rest by increasing sup-norm and
    lexicographically.  Each vector is primitive (gcd 1) with first nonzero
    coordinate positive.
    """
    units = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    yield from units
    seen = set(units)
    for s in range(1, bound + 1):
        for v in itertools.product(range(-s, s + 1), repeat=n):
            if max(abs(x) for x in v) != s:
                continue
            first = next(x for x in v if x)
            if first < 0:
                continue
            g = 0
            for x in v:
                g = gcd(g, x)
            if g != 1 or v in seen:
                continue
            yield v


def _rank_chunk(job) -> list[int]:
    evaluator, vectors = job
    return [evaluator.rank(v) for v in vectors]


def _evaluate_ranks(evaluator: IntegerRankEvaluator, vectors: list, workers: int) -> list[int]:
    if workers <= 1 or len(vectors) < 64:
        return [evaluator.rank(v) for v in vectors]
    nchunks = workers * 4
    size = -(-len(vectors) // nchunks)
    chunks = [vectors[i : i + size] for i in range(0, len(vectors), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_rank_chunk, [(evaluator, c) for c in chunks]))
    # map() preserves chunk order, so the merge is independent of scheduling
    return [r for part in parts for r in part]


def random_functional(rng: random.Random, n: int, height: int = 9) -> Functional:
    return tuple(
        Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(n)
    )


@dataclass
class RankSpectrum:
    observed: dict[int, Functional]  # rank -> first witness in scan order
    counts: dict[int, int]
    sample_count: int
    bound: int
    seed: int
    extra_samples: int = 0

    @property
    def ranks(self) -> list[int]:
        return sorted(self.observed)


def scan_ranks(
    a: BracketTable,
    bound: int = 2,
    extra_samples: int = 0,
    seed: int = 0,
    workers: int = 1,
) -> RankSpectrum:
    """Rank of B_F over the projective integer lattice plus seeded random F."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    n = a.dim
    ev = IntegerRankEvaluator(a)
    lattice = list(primitive_lattice(n, bound))
    rng = random.Random(seed)
    samples = [random_functional(rng, n) for _ in range(extra_samples)]
    ints = lattice + [integer_scaled(f) for f in samples]
    ranks = _evaluate_ranks(ev, ints, workers)
    observed: dict[int, Functional] = {}
    counts: dict[int, int] = {}
    originals = [tuple(Fraction(x) for x in v) for v in lattice] + samples
    for f, r in zip(originals, ranks):
        counts[r] = counts.get(r, 0) + 1
        if r not in observed:
            observed[r] = f
    return RankSpectrum(
        dict(sorted(observed.items())), dict(sorted(counts.items())), len(ints), bound, seed, extra_samples
    )


# -- generic rank ----------------------------------------------------------------


@dataclass
class GenericRank:
    rank: int
    pfaffians: dict[int, list[tuple[tuple[int, ...], MultiPoly]]]

    def nonzero(self, size: int) -> list[MultiPoly]:
        return [p for _, p in self.pfaffians.get(size, []) if not p.is_zero()]


def principal_pfaffians(a: BracketTable, size: int) -> list[tuple[tuple[int, ...], MultiPoly]]:
    polys = symbolic_kirillov(a).as_polys()
    return [
        (sub, pfaffian(polys, sub, check=False))
        for sub in itertools.combinations(range(1, a.dim + 1), size)
    ]


def generic_rank(a: BracketTable) -> GenericRank:
    """Largest even m with a nonzero size-m principal Pfaffian, plus all Pfaffians."""
    polys = symbolic_kirillov(a).as_polys()
    out: dict[int, list] = {}
    m = 0
    for size in range(2, a.dim + 1, 2):
        row = [
            (sub, pfaffian(polys, sub, check=False))
            for sub in itertools.combinations(range(1, a.dim + 1), size)
        ]
        out[size] = row
        if any(not p.is_zero() for _, p in row):
            m = size
    return GenericRank(m, out)


# -- necessary conditions ---------------------------------------------------------


@dataclass(frozen=True)
class NecessaryConditions:
    solvable: bool
    second_derived_abelian: bool
    t211_shape: bool
    derived_dims: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.solvable and self.second_derived_abelian and not self.t211_shape

    def failure_reason(self) -> str | None:
        if not self.solvable:
            return "not solvable"
        if not self.second_derived_abelian:
            return "second derived algebra is not abelian"
        if self.t211_shape:
            return "dim G^2 = dim G^1 - 1 with G^2 nonzero"
        return None


def necessary_conditions(a: BracketTable) -> NecessaryConditions:
    series = derived_series(a)
    g1 = derived_algebra(a)
    g2 = bracket_span(a, g1, g1)
    return NecessaryConditions(
        solvable=series[-1].dim == 0,
        second_derived_abelian=is_abelian_subspace(a, g2),
        t211_shape=g2.dim > 0 and g2.dim == g1.dim - 1,
        derived_dims=series_dims(series),
    )


# -- definite reduction -------------------------------------------------------------


@dataclass(frozen=True)
class ReductionStep:
    source: int  # index into the input Pfaffian list
    reduced: MultiPoly
    definiteness: Definiteness
    forms: tuple[LinearForm, ...]


@dataclass
class ReductionResult:
    proved: bool
    rounds: list[list[ReductionStep]]
    vanished: list[LinearForm]
    residuals: list[MultiPoly]  # nonzero reduced Pfaffians when stalled
    pfaffians: list[MultiPoly] = field(repr=False, default_factory=list)
    entries: list[LinearForm] = field(repr=False, default_factory=list)

    @property
    def steps(self) -> list[ReductionStep]:
        return [s for r in self.rounds for s in r]


def _span_rank(forms: Sequence[LinearForm]) -> int:
    return rank(Matrix(f.coeffs for f in forms)) if forms else 0


def definite_reduction(pfaffians: Sequence[MultiPoly], entries: Sequence[LinearForm]) -> ReductionResult:
    """Force linear forms to vanish using semidefinite quadratics.

    Proved when every entry form lies in the span of the forced forms, i.e.
    the common real zero set of the Pfaffians kills all of B_F.
    """
    pfaffians = list(pfaffians)
    entries = [e for e in entries if not e.is_zero()]
    vanished: list[LinearForm] = []
    rounds: list[list[ReductionStep]] = []

    def result(proved, residuals):
        return ReductionResult(proved, rounds, list(vanished), residuals, pfaffians, entries)

    if any(p.degree() > 2 for p in pfaffians):
        rounds.append([])
        return result(False, [p for p in pfaffians if not p.is_zero()])
    while True:
        this_round: list[ReductionStep] = []
        rounds.append(this_round)
        if all(substitute_vanishing(e, vanished).is_zero() for e in entries):
            return result(True, [])
        progress = False
        for idx, p in enumerate(pfaffians):
            r = substitute_vanishing(p, vanished)
            if r.is_zero():
                continue
            g = gram_matrix(r, list(range(r.nvars)))
            kind, forms = semidefiniteness(g)
            if kind not in (Definiteness.PSD, Definiteness.NSD):
                continue
            new = [LinearForm(f) for f in forms]
            before = _span_rank(vanished)
            if _span_rank(vanished + new) == before:
                continue
            vanished.extend(new)
            this_round.append(ReductionStep(idx, r, kind, tuple(new)))
            progress = True
        if not progress:
            residuals = [substitute_vanishing(p, vanished) for p in pfaffians]
            return result(False, [r for r in residuals if not r.is_zero()])


def replay_reduction(res: ReductionResult) -> bool:
    """Independently re-run a recorded trace; True when every step checks out."""
    vanished: list[LinearForm] = []
    for step in res.steps:
        r = substitute_vanishing(res.pfaffians[step.source], vanished)
        if r != step.reduced:
            return False
        kind, forms = semidefiniteness(gram_matrix(r, list(range(r.nvars))))
        if kind != step.definiteness or tuple(LinearForm(f) for f in forms) != step.forms:
            return False
        vanished.extend(step.forms)
    if res.proved:
        return all(substitute_vanishing(e, vanished).is_zero() for e in res.entries)
    return True


# -- verdicts ---------------------------------------------------------------------


class VerdictKind(str, enum.Enum):
    PROVED = "proved"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


@dataclass
class Certificate:
    kind: str  # codim1-abelian | pfaffian-definite-reduction | necessary-condition-failure
    reductions: list[tuple[int, ReductionResult]] = field(default_factory=list)
    derived_basis: tuple = ()
    reason: str | None = None


@dataclass
class MdVerdict:
    kind: VerdictKind
    generic_rank: int
    pfaffians: dict[int, list[tuple[tuple[int, ...], MultiPoly]]]
    necessary: NecessaryConditions
    certificate: Certificate | None = None
    witnesses: list[tuple[Functional, int]] = field(default_factory=list)
    reason: str | None = None
    spectrum: RankSpectrum | None = None
    stalled: ReductionResult | None = None
    bound: int = 2
    samples: int = 0
    seed: int = 0

    @property
    def proved(self) -> bool:
        return self.kind is VerdictKind.PROVED

    @property
    def refuted(self) -> bool:
        return self.kind is VerdictKind.REFUTED


def _restricted_witnesses(a, basis, m, bound):
    """Intermediate-rank functionals in span(basis) (integer basis vectors).

    Returns every hit among the basis vectors themselves, or else the first
    hit of the lattice scan over the coefficients.
    """
    ev = IntegerRankEvaluator(a)
    t = len(basis)
    hits = []
    for k, coeffs in enumerate(primitive_lattice(t, bound)):
        if k >= t and hits:
            break
        f = tuple(sum(c * v[i] for c, v in zip(coeffs, basis)) for i in range(a.dim))
        r = ev.rank(f)
        if 0 < r < m:
            hits.append((tuple(Fraction(x) for x in f), r))
            if k >= t:
                break
    return hits


def _first_rank_witness(a, target: int, bound: int):
    ev = IntegerRankEvaluator(a)
    for v in primitive_lattice(a.dim, bound):
        if ev.rank(v) == target:
            return tuple(Fraction(x) for x in v)
    return None


def isotropic_witnesses(a, q: MultiPoly, vanished: Sequence[LinearForm], m: int) -> list[tuple[Functional, int]]:
    """Intermediate-rank functionals on the zero set of one indefinite quadratic.

    ``q`` is a residual over f_1..f_n using at most three variables, all of
    them free with respect to ``vanished``.  The quadratic is diagonalized by
    congruence, q = sum d_k (l_k . x)^2; with d_i > 0 > d_j the choice
    l_j . x = 1, l_i . x = sqrt(-d_j / d_i), other l_k . x = 0 is isotropic.
    The remaining coordinates are fixed by the vanished forms; the other free
    coordinates are tried at 0 and then at 1.
    """
    n = a.dim
    qvars = q.variables()
    if len(qvars) > 3 or not q.is_homogeneous(2):
        return []
    g = gram_matrix(q, qvars)
    diag, forms, pivots, rest = congruence_diagonalize(g)
    k = len(qvars)
    y = [ZERO] * len(diag)
    x_local = [ZERO] * k
    if rest:
        # zero-diagonal remainder: a non-pivot coordinate vector is isotropic
        free_local = [v for v in range(k) if v not in pivots]
        x_local[free_local[0]] = Fraction(1)
    else:
        pos = next((i for i, d in enumerate(diag) if d > 0), None)
        neg = next((i for i, d in enumerate(diag) if d < 0), None)
        if pos is None or neg is None:
            return []
        y[neg] = Fraction(1)
        y[pos] = sqrt_rational(-diag[neg] / diag[pos])
    # back-substitute: l_k has 1 at its pivot and 0 at earlier pivots
    for idx in reversed(range(len(forms))):
        l = forms[idx]
        pv = pivots[idx]
        acc = y[idx]
        for v in range(k):
            if v != pv and l[v] != 0:
                acc = acc - l[v] * x_local[v]
        x_local[pv] = acc
    images = vanishing_substitution(vanished, n)
    free = [i for i in range(n) if images[i] == MultiPoly.var(n, i)]
    others = [i for i in free if i not in qvars]
    out = []
    for fill in (ZERO, Fraction(1)):
        point = [ZERO] * n
        for v, val in zip(qvars, x_local):
            point[v] = val
        for i in others:
            point[i] = fill
        full = tuple(img.evaluate(point) for img in images)
        r = rank(kirillov_form(a, full))
        if 0 < r < m:
            out.append((full, r))
            break
    return out


def md_check(
    a: BracketTable,
    bound: int = 2,
    seed: int = 0,
    samples: int = 100,
    workers: int = 1,
) -> MdVerdict:
    """Decide the MD property: Proved, Refuted or Inconclusive, with evidence."""
    n = a.dim
    nc = necessary_conditions(a)
    gr = generic_rank(a)
    m = gr.rank
    base = dict(generic_rank=m, pfaffians=gr.pfaffians, necessary=nc, bound=bound, samples=samples, seed=seed)

    reason = nc.failure_reason()
    if reason is not None:
        spec = scan_ranks(a, bound, samples, seed, workers)
        wit = [(f, r) for r, f in spec.observed.items() if 0 < r < m]
        if m in spec.observed and wit:
            wit.append((spec.observed[m], m))
        return MdVerdict(
            VerdictKind.REFUTED,
            certificate=Certificate("necessary-condition-failure", reason=reason),
            witnesses=wit,
            reason=reason,
            spectrum=spec,
            **base,
        )

    g1 = derived_algebra(a)
    if g1.dim == n - 1 and is_abelian_subspace(a, g1):
        return MdVerdict(
            VerdictKind.PROVED,
            certificate=Certificate("codim1-abelian", derived_basis=g1.basis),
            **base,
        )

    if m <= 2:
        # no even rank strictly between 0 and m
        return MdVerdict(VerdictKind.PROVED, certificate=Certificate("pfaffian-definite-reduction"), **base)

    entries = [f for _, f in symbolic_kirillov(a).upper_entries()]
    # {rank <= r} is the real zero set of the size-(r+2) Pfaffians; an empty
    # reduction at level r rules out every rank in (0, r]
    reductions = []
    res = None
    for level in range(2, m, 2):
        res = definite_reduction([p for _, p in gr.pfaffians[level + 2]], entries)
        reductions.append((level, res))
        if not res.proved:
            break
    if res.proved:
        return MdVerdict(
            VerdictKind.PROVED,
            certificate=Certificate("pfaffian-definite-reduction", reductions=reductions),
            **base,
        )

    witnesses: list[tuple[Functional, int]] = []
    vanished_rows = [f.coeffs for f in res.vanished]
    basis = kernel(Matrix(vanished_rows)) if vanished_rows else [dual_basis_vector(n, i) for i in range(1, n + 1)]
    int_basis = [integer_scaled(v) for v in basis]
    witnesses = _restricted_witnesses(a, int_basis, m, bound)
    if not witnesses and len(res.residuals) == 1:
        q = res.residuals[0]
        if q.is_homogeneous(2) and len(q.variables()) <= 3:
            witnesses = isotropic_witnesses(a, q, res.vanished, m)
    spectrum = None
    if not witnesses:
        spectrum = scan_ranks(a, bound, samples, seed, workers)
        witnesses = [(f, r) for r, f in spectrum.observed.items() if 0 < r < m]
    if witnesses:
        top = _first_rank_witness(a, m, bound)
        if top is not None:
            witnesses.append((top, m))
        return MdVerdict(
            VerdictKind.REFUTED,
            witnesses=witnesses,
            reason=f"functional of rank {witnesses[0][1]} strictly between 0 and {m}",
            spectrum=spectrum,
            stalled=res,
            **base,
        )
    return MdVerdict(
        VerdictKind.INCONCLUSIVE,
        reason="reduction stalled and no intermediate-rank witness found",
        spectrum=spectrum,
        stalled=res,
        **base,
    )


# -- constructions from the structure theory --------------------------------------


class ShapeError(ValueError):
    pass


@dataclass
class T211Counterexample:
    k: int
    a_matrix: Matrix  # ad_{X_{k+1}} on span(X_{k+2}..X_n), columns are images
    alpha: tuple
    f1: Functional
    f2: Functional
    rank1: int
    rank2: int


def t211_counterexample(t: BracketTable, k: int | None = None) -> T211Counterexample:
    """Two functionals, both nonzero on G^1, whose orbit dimensions differ by >= 2.

    Works on raw tables in the normalized basis: G^1 = span(X_{k+1}..X_n),
    G^2 = span(X_{k+2}..X_n).  F_1 = X_{k+1}^*, F_2 = F_1 + sum alpha_l X_l^*
    where A alpha = e_1 and A is ad_{X_{k+1}} restricted to G^2.
    """
    n = t.dim
    if k is None:
        # X_{k+1} is the lowest basis vector reached by any bracket
        hit = [l for vec in t.consts.values() for l, c in enumerate(vec) if c]
        k = min(hit) if hit else 0
    if not 1 <= k <= n - 2:
        raise ShapeError(f"need 1 <= k <= n-2, got k={k}")
    idx = list(range(k + 2, n + 1))
    a_matrix = Matrix([[t.constant(l, k + 1, j) for j in idx] for l in idx])
    if rank(a_matrix) < len(idx):
        raise ShapeError("t211 automorphism hypothesis violated: A is singular")
    g1 = derived_algebra(t)
    g2 = bracket_span(t, g1, g1)
    if g1 != Subspace.coordinate(n, range(k + 1, n + 1)) or g2 != Subspace.coordinate(n, idx):
        raise ShapeError("table is not in the normalized t211 shape")
    e1 = [Fraction(1)] + [ZERO] * (len(idx) - 1)
    alpha = solve(a_matrix, e1)
    f1 = dual_basis_vector(n, k + 1)
    f2 = tuple(f1[i] + (alpha[i - k - 1] if i >= k + 1 else ZERO) for i in range(n))
    r1 = rank(kirillov_form(t, f1))
    r2 = rank(kirillov_form(t, f2))
    if r2 < r1 + 2:
        raise AssertionError(f"rank gap violated: rank B_F2={r2}, rank B_F1={r1}")
    return T211Counterexample(k, a_matrix, alpha, f1, f2, r1, r2)


def _require_codim1(a: BracketTable) -> None:
    n = a.dim
    if derived_algebra(a) != Subspace.coordinate(n, range(2, n + 1)):
        raise ShapeError("need G^1 = span(X_2..X_n)")


def codim1_witness(a: BracketTable) -> tuple[Functional, int] | None:
    """F_0 = X_2^* and its rank, when B_{F_0} is nonzero.

    Only dim G^1 = n - 1 is required; in the aligned basis
    G^1 = span(X_2..X_n) the form at X_2^* is never zero.
    """
    if derived_algebra(a).dim != a.dim - 1:
        raise ShapeError(f"need dim G^1 = n - 1 = {a.dim - 1}")
    f0 = dual_basis_vector(a.dim, 2)
    b = kirillov_form(a, f0)
    if b.is_zero():
        return None
    return f0, rank(b)


def family_matrix_A(a: BracketTable, k: int | None = None) -> tuple[Matrix, bool]:
    """A = (C^l_{1j}) for 2 <= j, l <= k (rows l, columns j) and invertibility.

    Without ``k`` the basis must satisfy G^1 = span(X_2..X_n) and
    G^2 = span(X_{k+1}..X_n).
    """
    n = a.dim
    if k is None:
        _require_codim1(a)
        g1 = derived_algebra(a)
        g2 = bracket_span(a, g1, g1)
        k = n - g2.dim
        if g2 != Subspace.coordinate(n, range(k + 1, n + 1)):
            raise ShapeError("need G^2 = span(X_{k+1}..X_n)")
    if not 2 <= k <= n:
        raise ShapeError(f"need 2 <= k <= n, got k={k}")
    idx = range(2, k + 1)
    mat = Matrix([[a.constant(l, 1, j) for j in idx] for l in idx])
    return mat, rank(mat) == len(idx)


def functional_names(n: int) -> tuple[str, ...]:
    return default_names(n)
