"""Structure-constant Lie algebras.

Basis indices are 1-based in every public signature, matching X_1..X_n;
vectors are plain tuples of coordinates (index 0 holds the X_1 coefficient).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .linalg import ONE, ZERO, Matrix, inverse, kernel, rank, rref, solve


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"structure constants must be rational, got {x!r}")


class BracketTable:
    """Structure constants C^l_{ij} for i < j; other brackets by antisymmetry.

    No Jacobi check happens here; see :func:`validate` and :class:`LieAlgebra`.
    """

    def __init__(self, dim: int, brackets: Mapping[tuple[int, int], Mapping[int, object] | Sequence] = (), name: str | None = None):
        if dim < 1:
            raise ValueError("dimension must be at least 1")
        self.dim = dim
        self.name = name
        consts: dict[tuple[int, int], tuple[Fraction, ...]] = {}
        items = brackets.items() if isinstance(brackets, Mapping) else brackets
        for (i, j), val in items:
            if not (1 <= i < j <= dim):
                raise ValueError(f"bracket index pair ({i},{j}) must satisfy 1 <= i < j <= {dim}")
            if isinstance(val, Mapping):
                vec = [ZERO] * dim
                for l, c in val.items():
                    if not 1 <= l <= dim:
                        raise ValueError(f"basis index {l} out of range 1..{dim}")
                    vec[l - 1] = _frac(c)
            else:
                if len(val) != dim:
                    raise ValueError("bracket vector has wrong length")
                vec = [_frac(c) for c in val]
            if (i, j) in consts:
                raise ValueError(f"bracket ({i},{j}) given twice")
            if any(vec):
                consts[(i, j)] = tuple(vec)
        self.consts = dict(sorted(consts.items()))
        zero = (ZERO,) * dim
        dense = [[zero] * dim for _ in range(dim)]
        for (i, j), vec in self.consts.items():
            dense[i - 1][j - 1] = vec
            dense[j - 1][i - 1] = tuple(-c for c in vec)
        self._dense = tuple(tuple(r) for r in dense)

    def basis_bracket(self, i: int, j: int) -> tuple[Fraction, ...]:
        """[X_i, X_j] as a coordinate vector (1-based indices)."""
        return self._dense[i - 1][j - 1]

    def constant(self, l: int, i: int, j: int) -> Fraction:
        """C^l_{ij}, 1-based, any order of i and j."""
        return self._dense[i - 1][j - 1][l - 1]

    def brackets_as_maps(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        return {
            ij: {l + 1: c for l, c in enumerate(vec) if c != 0}
            for ij, vec in self.consts.items()
        }

    def raw(self) -> "BracketTable":
        return BracketTable(self.dim, self.consts, self.name)

    def renamed(self, name: str | None):
        out = self.__class__.__new__(self.__class__)
        out.__dict__.update(self.__dict__)
        out.name = name
        return out

    def __eq__(self, other):
        if not isinstance(other, BracketTable):
            return NotImplemented
        return self.dim == other.dim and self.consts == other.consts

    def __hash__(self):
        return hash((self.dim, tuple(self.consts.items())))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<{type(self).__name__}{label} dim={self.dim} brackets={len(self.consts)}>"

    def describe(self) -> str:
        from .scalars import format_scalar

        lines = []
        for (i, j), vec in self.consts.items():
            terms = []
            for l, c in enumerate(vec, start=1):
                if c:
                    coeff = "" if c == 1 else ("-" if c == -1 else f"{format_scalar(c)}*")
                    terms.append(f"{coeff}X{l}")
            lines.append(f"[X{i},X{j}] = " + " + ".join(terms).replace("+ -", "- "))
        return "\n".join(lines) if lines else "(abelian)"


@dataclass(frozen=True)
class JacobiViolation:
    triple: tuple[int, int, int]
    residual: tuple[Fraction, ...]


def jacobi_residual_generic(n: int, br: Callable[[int, int], Sequence], zero, i: int, j: int, k: int) -> list:
    """[X_i,[X_j,X_k]] + [X_j,[X_k,X_i]] + [X_k,[X_i,X_j]] over any coefficient ring.

    ``br(a, b)`` returns [X_a, X_b] as a length-n coefficient list (1-based a, b).
    """
    out = [zero] * n
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        inner = br(b, c)
        for m, coef in enumerate(inner, start=1):
            if not coef:
                continue
            outer = br(a, m)
            for l, d in enumerate(outer):
                if d:
                    out[l] = out[l] + coef * d
    return out


def jacobi_residual(t: BracketTable, i: int, j: int, k: int) -> tuple[Fraction, ...]:
    return tuple(jacobi_residual_generic(t.dim, t.basis_bracket, ZERO, i, j, k))


def jacobi_violations(t: BracketTable) -> list[JacobiViolation]:
    n = t.dim
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                res = jacobi_residual(t, i, j, k)
                if any(res):
                    out.append(JacobiViolation((i, j, k), res))
    return out


class LieAlgebra(BracketTable):
    """A BracketTable whose structure constants satisfy the Jacobi identity."""

    def __init__(self, dim, brackets=(), name=None):
        super().__init__(dim, brackets, name)
        bad = jacobi_violations(self)
        if bad:
            raise ValueError(f"Jacobi identity fails at {[v.triple for v in bad]}")

    @classmethod
    def _trusted(cls, t: BracketTable) -> "LieAlgebra":
        out = cls.__new__(cls)
        out.__dict__.update(t.__dict__)
        return out


def validate(t: BracketTable) -> LieAlgebra | list[JacobiViolation]:
    """LieAlgebra when every Jacobi residual vanishes, else all violations (sorted)."""
    if isinstance(t, LieAlgebra):
        return t
    bad = jacobi_violations(t)
    if bad:
        return bad
    return LieAlgebra._trusted(t)


def abelian(n: int, name: str | None = None) -> LieAlgebra:
    return LieAlgebra(n, {}, name or f"abelian-{n}")


# -- subspaces --------------------------------------------------------------


class Subspace:
    """Subspace of Q^n held as a canonical reduced echelon basis."""

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient: int, vectors: Sequence[Sequence] = ()):
        self.ambient = ambient
        vecs = [tuple(v) for v in vectors]
        if any(len(v) != ambient for v in vecs):
            raise ValueError("vector length does not match ambient dimension")
        if vecs:
            red, piv = rref(Matrix(vecs))
            self.basis = red.rows
            self.pivots = tuple(piv)
        else:
            self.basis = ()
            self.pivots = ()

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, Matrix.identity(n).rows)

    @classmethod
    def coordinate(cls, n: int, indices: Sequence[int]) -> "Subspace":
        """span(X_i for i in indices), 1-based."""
        return cls(n, [tuple(ONE if k == i - 1 else ZERO for k in range(n)) for i in indices])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return self.dim

    def contains(self, v: Sequence) -> bool:
        if self.dim == 0:
            return all(x == 0 for x in v)
        return rank(Matrix(list(self.basis) + [tuple(v)])) == self.dim

    def __contains__(self, v):
        return self.contains(v)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def coordinates(self, v: Sequence) -> tuple | None:
        """Coefficients of v in this basis, or None if v is outside."""
        if self.dim == 0:
            return () if all(x == 0 for x in v) else None
        return solve(Matrix.from_columns(self.basis), v)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


# -- brackets and operators ---------------------------------------------------


def _check_len(a: BracketTable, *vs) -> None:
    for v in vs:
        if len(v) != a.dim:
            raise ValueError(f"vector of length {len(v)} in a {a.dim}-dimensional algebra")


def bracket(a: BracketTable, x: Sequence, y: Sequence) -> tuple:
    """Bilinear antisymmetric extension of the table."""
    _check_len(a, x, y)
    n = a.dim
    out = [ZERO] * n
    dense = a._dense
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = dense[i]
        for j, yj in enumerate(y):
            if not yj or i == j:
                continue
            vec = row[j]
            c = xi * yj
            for l, v in enumerate(vec):
                if v:
                    out[l] = out[l] + c * v
    return tuple(out)


def unit(n: int, i: int) -> tuple:
    """Coordinate vector of X_i (1-based)."""
    return tuple(ONE if k == i - 1 else ZERO for k in range(n))


def ad_matrix(a: BracketTable, z: Sequence, restriction: Subspace | None = None) -> Matrix:
    """Matrix of x -> [z, x]; columns are images of basis vectors.

    With ``restriction``, the matrix is taken in the restriction's basis; the
    subspace must be invariant under ad_z.
    """
    _check_len(a, z)
    n = a.dim
    if restriction is None:
        cols = [bracket(a, z, unit(n, j)) for j in range(1, n + 1)]
        return Matrix.from_columns(cols)
    cols = []
    for b in restriction.basis:
        img = bracket(a, z, b)
        coords = restriction.coordinates(img)
        if coords is None:
            raise ValueError("restriction subspace is not invariant under ad_z")
        cols.append(coords)
    if not cols:
        return Matrix.zeros(0, 0)
    return Matrix.from_columns(cols)


def trace_ad(a: BracketTable, z: Sequence) -> Fraction:
    return ad_matrix(a, z).trace()


def bracket_span(a: BracketTable, u: Subspace, v: Subspace) -> Subspace:
    vecs = [bracket(a, x, y) for x in u.basis for y in v.basis]
    vecs = [w for w in vecs if any(w)]
    return Subspace(a.dim, vecs)


def derived_algebra(a: BracketTable) -> Subspace:
    return Subspace(a.dim, [vec for vec in a.consts.values()])


def derived_series(a: BracketTable) -> list[Subspace]:
    """G, G^1, G^2, ... until a term repeats (the repeat is not listed)."""
    terms = [Subspace.whole(a.dim)]
    nxt = derived_algebra(a)
    while nxt != terms[-1]:
        terms.append(nxt)
        if nxt.dim == 0:
            break
        nxt = bracket_span(a, nxt, nxt)
    return terms


def lower_central_series(a: BracketTable) -> list[Subspace]:
    """G, [G,G], [G,[G,G]], ... until a term repeats."""
    whole = Subspace.whole(a.dim)
    terms = [whole]
    nxt = derived_algebra(a)
    while nxt != terms[-1]:
        terms.append(nxt)
        if nxt.dim == 0:
            break
        nxt = bracket_span(a, whole, nxt)
    return terms


def series_dims(series: Sequence[Subspace]) -> tuple[int, ...]:
    return tuple(s.dim for s in series)


def is_solvable(a: BracketTable) -> bool:
    return derived_series(a)[-1].dim == 0


def is_abelian_subspace(a: BracketTable, s: Subspace) -> bool:
    return all(
        not any(bracket(a, x, y)) for k, x in enumerate(s.basis) for y in s.basis[k + 1 :]
    )


def center(a: BracketTable) -> Subspace:
    """Kernel of the stacked matrices z -> [z, X_i]."""
    n = a.dim
    rows = []
    for i in range(1, n + 1):
        # z -> [z, X_i] = -ad_{X_i} z
        rows.extend(ad_matrix(a, unit(n, i)).rows)
    if not rows:
        return Subspace.whole(n)
    return Subspace(n, kernel(Matrix(rows)))


def change_basis(a: BracketTable, p: Matrix) -> BracketTable:
    """Rewrite the table in the basis X'_j = sum_i p[i][j] X_i (columns of p)."""
    n = a.dim
    if p.shape != (n, n):
        raise ValueError(f"basis change must be {n}x{n}")
    try:
        pinv = inverse(p)
    except ValueError:
        raise ValueError("basis change matrix is singular") from None
    cols = p.columns()
    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            v = bracket(a, cols[i], cols[j])
            if any(v):
                brackets[(i + 1, j + 1)] = pinv @ v
    cls = type(a)
    out = BracketTable(n, brackets, a.name)
    if cls is LieAlgebra:
        # Jacobi is basis-independent
        return LieAlgebra._trusted(out)
    return out


def direct_sum(a: BracketTable, b: BracketTable, name: str | None = None) -> BracketTable:
    n, m = a.dim, b.dim
    brackets = {}
    for (i, j), vec in a.consts.items():
        brackets[(i, j)] = tuple(vec) + (ZERO,) * m
    for (i, j), vec in b.consts.items():
        brackets[(i + n, j + n)] = (ZERO,) * n + tuple(vec)
    out = BracketTable(n + m, brackets, name)
    if isinstance(a, LieAlgebra) and isinstance(b, LieAlgebra):
        return LieAlgebra._trusted(out)
    return out


@dataclass(frozen=True)
class CentralSplit:
    """a is isomorphic to R z + complement; ``basis`` maps the split back."""

    z: tuple
    complement: BracketTable
    basis: Matrix  # columns: z, then the complement basis, in old coordinates


def split_central_factor(a: BracketTable) -> CentralSplit | None:
    """Split off a central line outside G^1, when one exists.

    Sufficient criterion for decomposability only: fires iff the center is
    not contained in the derived algebra.
    """
    n = a.dim
    z_space = center(a)
    g1 = derived_algebra(a)
    z = next((v for v in z_space.basis if not g1.contains(v)), None)
    if z is None:
        return None
    # complement: G^1 plus coordinate vectors, avoiding z
    comp = list(g1.basis)
    for i in range(1, n + 1):
        if len(comp) == n - 1:
            break
        e = unit(n, i)
        if rank(Matrix(comp + [z, e])) == len(comp) + 2:
            comp.append(e)
    p = Matrix.from_columns([z] + comp)
    moved = change_basis(a, p)
    brackets = {}
    for (i, j), vec in moved.consts.items():
        # z is central, so only pairs inside the complement survive; they land
        # in G^1, which has no z-component
        brackets[(i - 1, j - 1)] = vec[1:]
    complement = BracketTable(n - 1, brackets, None) if n > 1 else None
    if isinstance(a, LieAlgebra) and complement is not None:
        complement = LieAlgebra._trusted(complement)
    return CentralSplit(tuple(z), complement, p)


def fingerprint(a: BracketTable) -> tuple:
    """(dim, derived dims, lower-central dims, center dim): basis-invariant."""
    return (
        a.dim,
        series_dims(derived_series(a)),
        series_dims(lower_central_series(a)),
        center(a).dim,
    )


def heisenberg3() -> LieAlgebra:
    return LieAlgebra(3, {(1, 2): {3: 1}}, "heisenberg3")
