"""Kirillov form B_F(X, Y) = <F, [X, Y]>, numerically and for all F at once.

Sign convention: B[i][j] = <F, [X_i, X_j]> = sum_l C^l_{ij} f_l.  Some
hand-written displays use the opposite sign in the first row; rank and
kernel do not depend on that choice.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .algebra import BracketTable, Subspace
from .linalg import ZERO, Matrix, bareiss_rank, kernel, rank
from .poly import LinearForm, MultiPoly, default_names
from .scalars import QuadExt, Scalar, field_d

Functional = tuple  # coordinates f_1..f_n in the dual basis


def dual_basis_vector(n: int, i: int) -> Functional:
    """X_i^* (1-based)."""
    return tuple(Fraction(1) if k == i - 1 else ZERO for k in range(n))


def _check(a: BracketTable, f: Sequence) -> tuple:
    if len(f) != a.dim:
        raise ValueError(f"functional has {len(f)} coordinates, algebra has dimension {a.dim}")
    f = tuple(Fraction(x) if isinstance(x, int) else x for x in f)
    field_d(f)
    return f


def kirillov_form(a: BracketTable, f: Sequence[Scalar]) -> Matrix:
    f = _check(a, f)
    n = a.dim
    rows = [[ZERO] * n for _ in range(n)]
    for (i, j), vec in a.consts.items():
        v = ZERO
        for c, x in zip(vec, f):
            if c and x:
                v = v + c * x
        rows[i - 1][j - 1] = v
        rows[j - 1][i - 1] = -v
    return Matrix(rows)


class SymbolicKirillovForm:
    """n x n skew matrix of linear forms in f_1..f_n."""

    def __init__(self, entries: Sequence[Sequence[LinearForm]]):
        self.entries = tuple(tuple(r) for r in entries)
        self.n = len(self.entries)

    def entry(self, i: int, j: int) -> LinearForm:
        """Entry (i, j), 1-based."""
        return self.entries[i - 1][j - 1]

    def evaluate(self, f: Sequence) -> Matrix:
        return Matrix(tuple(e.evaluate(f) for e in row) for row in self.entries)

    def as_polys(self, names=None) -> list[list[MultiPoly]]:
        names = names or default_names(self.n)
        return [[e.to_poly(names) for e in row] for row in self.entries]

    def upper_entries(self) -> list[tuple[tuple[int, int], LinearForm]]:
        """Nonzero entries (i, j) with i < j, 1-based, row-major."""
        return [
            ((i + 1, j + 1), self.entries[i][j])
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if not self.entries[i][j].is_zero()
        ]

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def to_strings(self, names=None) -> list[list[str]]:
        names = names or default_names(self.n)
        return [[e.to_string(names) for e in row] for row in self.entries]


def symbolic_kirillov(a: BracketTable) -> SymbolicKirillovForm:
    n = a.dim
    zero = LinearForm.zero(n)
    rows = [[zero] * n for _ in range(n)]
    for (i, j), vec in a.consts.items():
        form = LinearForm(vec)
        rows[i - 1][j - 1] = form
        rows[j - 1][i - 1] = -form
    return SymbolicKirillovForm(rows)


def orbit_dimension(a: BracketTable, f: Sequence[Scalar]) -> int:
    return rank(kirillov_form(a, f))


def stabilizer(a: BracketTable, f: Sequence[Scalar]) -> Subspace:
    """Kernel of B_F, of dimension n - rank B_F."""
    return Subspace(a.dim, kernel(kirillov_form(a, f)))


class IntegerRankEvaluator:
    """Fast rank B_F for integer functionals.

    Structure constants are scaled to a common integer denominator once; the
    rank of B_F is unchanged by that scaling.
    """

    def __init__(self, a: BracketTable):
        den = 1
        for vec in a.consts.values():
            for c in vec:
                den = lcm(den, c.denominator)
        self.n = a.dim
        self.pairs = [
            (i - 1, j - 1, [(l, int(c * den)) for l, c in enumerate(vec) if c])
            for (i, j), vec in a.consts.items()
        ]

    def rank(self, f: Sequence[int]) -> int:
        n = self.n
        rows = [[0] * n for _ in range(n)]
        for i, j, terms in self.pairs:
            v = 0
            for l, c in terms:
                x = f[l]
                if x:
                    v += c * x
            if v:
                rows[i][j] = v
                rows[j][i] = -v
        return bareiss_rank(rows)


def integer_scaled(f: Sequence) -> tuple[int, ...] | None:
    """Clear denominators of a rational functional; None for irrational input."""
    den = 1
    for x in f:
        if isinstance(x, QuadExt):
            return None
        den = lcm(den, Fraction(x).denominator)
    return tuple(int(Fraction(x) * den) for x in f)
