"""Exact dense linear algebra over Q and Q(sqrt d).

Rank uses fraction-free (Bareiss) elimination on integer matrices; rational
input is cleared of denominators row by row first, which preserves rank.
Quadratic-extension input falls back to ordinary field elimination, which is
still exact.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .scalars import QuadExt, Scalar, sign

ZERO = Fraction(0)
ONE = Fraction(1)


def _to_scalar(x) -> Scalar:
    if isinstance(x, (Fraction, QuadExt)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floating point values are not allowed in exact matrices")
    raise TypeError(f"not an exact scalar: {x!r}")


class Matrix:
    """Immutable dense matrix of exact scalars."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None) -> None:
        data = tuple(tuple(_to_scalar(x) for x in r) for r in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("ragged matrix rows")
        else:
            width = ncols or 0
        self.rows = data
        self.nrows = len(data)
        self.ncols = width
        self._hash = None

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(((ZERO,) * ncols for _ in range(nrows)), ncols=ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls(tuple(values[i] if i == j else ZERO for j in range(n)) for i in range(n))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        if not cols:
            return cls((() for _ in range(nrows or 0)), ncols=0)
        return cls(zip(*cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, key):
        i, j = key
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows), ncols=self.nrows) if self.nrows else Matrix.zeros(self.ncols, 0)

    T = property(transpose)

    def __eq__(self, other):
        if isinstance(other, Matrix):
            return self.shape == other.shape and self.rows == other.rows
        if isinstance(other, (list, tuple)):
            try:
                return self == Matrix(other)
            except (TypeError, ValueError):
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self.rows))
        return self._hash

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)
        )

    def __neg__(self) -> "Matrix":
        return Matrix(tuple(-a for a in r) for r in self.rows)

    def scale(self, c) -> "Matrix":
        return Matrix(tuple(c * a for a in r) for r in self.rows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return Matrix(
                (tuple(_dot(r, c) for c in cols) for r in self.rows), ncols=other.ncols
            )
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(_dot(r, vec) for r in self.rows)

    def trace(self):
        if self.nrows != self.ncols:
            raise ValueError("trace of a non-square matrix")
        return sum((self.rows[i][i] for i in range(self.nrows)), ZERO)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.nrows)
            for j in range(i + 1, self.ncols)
        )

    def is_skew(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == -self.rows[j][i]
            for i in range(self.nrows)
            for j in range(i, self.ncols)
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix((tuple(self.rows[i][j] for j in cols) for i in rows), ncols=len(cols))

    def __repr__(self):
        from .scalars import format_scalar

        body = ", ".join("[" + ", ".join(format_scalar(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]


def _dot(u, v):
    acc = ZERO
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def _as_rows(m) -> tuple[tuple, ...]:
    if isinstance(m, Matrix):
        return m.rows
    return tuple(tuple(_to_scalar(x) for x in r) for r in m)


def _integer_rows(rows) -> list[list[int]] | None:
    """Clear denominators row-wise; None if any entry is irrational."""
    out = []
    for r in rows:
        den = 1
        for x in r:
            if isinstance(x, QuadExt):
                return None
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination.  Mutates ``rows``."""
    nrows = len(rows)
    if nrows == 0:
        return 0
    ncols = len(rows[0])
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        pr = rows[r]
        for i in range(r + 1, nrows):
            ri = rows[i]
            f = ri[c]
            for j in range(c + 1, ncols):
                # exact: Bareiss guarantees divisibility by the previous pivot
                ri[j] = (p * ri[j] - f * pr[j]) // prev
            ri[c] = 0
        prev = p
        r += 1
    return r


def _field_rank(rows) -> int:
    m = [list(r) for r in rows]
    rref, pivots = _rref(m)
    return len(pivots)


def rank(m) -> int:
    """Rank over the field generated by the entries."""
    rows = _as_rows(m)
    ints = _integer_rows(rows)
    if ints is not None:
        return bareiss_rank(ints)
    return _field_rank(rows)


def _rref(m: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot columns)."""
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        pr = m[r]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        pivots.append(c)
        r += 1
    return m, pivots


def rref(m) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form (zero rows dropped) and pivot columns."""
    rows = [list(r) for r in _as_rows(m)]
    ncols = len(rows[0]) if rows else (m.ncols if isinstance(m, Matrix) else 0)
    red, pivots = _rref(rows)
    return Matrix(red[: len(pivots)], ncols=ncols), pivots


def kernel(m) -> list[tuple]:
    """Basis of the right null space {x : m x = 0}, one vector per free column.

    Each basis vector has a 1 in its free column and zeros in the other free
    columns, so the basis is canonical for a given matrix.
    """
    if isinstance(m, Matrix):
        ncols = m.ncols
    else:
        rows = _as_rows(m)
        ncols = len(rows[0]) if rows else 0
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for row, pc in zip(red.rows, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return basis


def solve(a, b: Sequence) -> tuple | None:
    """One exact solution of a x = b, or None when inconsistent.

    Free variables are set to zero.
    """
    rows = _as_rows(a)
    b = tuple(_to_scalar(x) for x in b)
    if len(rows) != len(b):
        raise ValueError("right-hand side length mismatch")
    ncols = len(rows[0]) if rows else (a.ncols if isinstance(a, Matrix) else 0)
    aug = [list(r) + [bi] for r, bi in zip(rows, b)]
    red, pivots = _rref(aug)
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return tuple(x)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(m.rows)]
    red, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return Matrix(r[n:] for r in red)


def determinant(m: Matrix):
    """Determinant by Gaussian elimination (exact)."""
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    a = [list(r) for r in m.rows]
    n = len(a)
    det = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        p = a[c][c]
        det = det * p
        for i in range(c + 1, n):
            f = a[i][c] / p
            if f != 0:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


class Definiteness(str, enum.Enum):
    PSD = "PSD"
    NSD = "NSD"
    INDEFINITE = "indefinite"
    ZERO = "zero"


def congruence_diagonalize(s: Matrix) -> tuple[list, list[tuple], list[int], bool]:
    """Write the quadratic form of symmetric ``s`` as sum d_k (l_k . x)^2.

    Returns (diagonal values d_k, forms l_k, pivot indices, remainder_indefinite).  Each
    step pivots on a nonzero diagonal entry i: q(x) = p*(l.x)^2 + q'(x) with
    l = row_i / p and q' independent of x_i.  When only off-diagonal entries
    remain, the rest of the form is indefinite and the third element is True.
    Each l_k has coefficient 1 at its pivot and 0 at all earlier pivots.
    """
    if not s.is_symmetric():
        raise ValueError("semidefiniteness needs a symmetric matrix")
    n = s.nrows
    a = [list(r) for r in s.rows]
    diag: list = []
    forms: list[tuple] = []
    pivots: list[int] = []
    while True:
        piv = next((i for i in range(n) if a[i][i] != 0), None)
        if piv is None:
            rest_nonzero = any(a[i][j] != 0 for i in range(n) for j in range(n))
            return diag, forms, pivots, rest_nonzero
        p = a[piv][piv]
        l = tuple(x / p for x in a[piv])
        diag.append(p)
        forms.append(l)
        pivots.append(piv)
        row = a[piv]
        a = [[a[i][j] - row[i] * row[j] / p for j in range(n)] for i in range(n)]


def semidefiniteness(s) -> tuple[Definiteness, list[tuple] | None]:
    """Classify a symmetric matrix as PSD, NSD, indefinite or zero.

    For semidefinite input also return linear forms (rows of a rank
    factorization, scaled to unit pivot) whose common zero set equals the
    zero set of the quadratic form.
    """
    if not isinstance(s, Matrix):
        s = Matrix(s)
    diag, forms, _, rest = congruence_diagonalize(s)
    if rest:
        return Definiteness.INDEFINITE, None
    if not diag:
        return Definiteness.ZERO, None
    signs = {sign(d) for d in diag}
    if signs == {1}:
        return Definiteness.PSD, forms
    if signs == {-1}:
        return Definiteness.NSD, forms
    return Definiteness.INDEFINITE, None
