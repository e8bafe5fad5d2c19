"""Sparse multivariate polynomials over Q, linear forms, Pfaffians and Gram
matrices of quadratic forms.

Monomials are dense exponent tuples; terms live in a dict keyed by exponent
tuple.  Printing and iteration use graded-lexicographic order (higher total
degree first, then lexicographic with variable 1 largest).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .linalg import Matrix, ZERO, rref
from .scalars import QuadExt, format_scalar

# ASCII aliases for alpha, beta, gamma, delta, sigma in five variables
GREEK5 = ("a", "b", "g", "d", "s")


def default_names(nvars: int) -> tuple[str, ...]:
    if nvars == 5:
        return GREEK5
    return tuple(f"f{i}" for i in range(1, nvars + 1))


def _grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class MultiPoly:
    """Polynomial in ``nvars`` variables with exact rational coefficients."""

    __slots__ = ("nvars", "terms", "names")

    def __init__(self, nvars: int, terms: Mapping | Iterable = (), names: Sequence[str] | None = None):
        self.nvars = nvars
        self.names = tuple(names) if names is not None else None
        clean: dict[tuple[int, ...], Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, c in items:
            exp = tuple(exp)
            if len(exp) != nvars:
                raise ValueError("exponent length does not match number of variables")
            if isinstance(c, int):
                c = Fraction(c)
            c = clean.get(exp, ZERO) + c
            if c == 0:
                clean.pop(exp, None)
            else:
                clean[exp] = c
        self.terms = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, names=None) -> "MultiPoly":
        return cls(nvars, {}, names)

    @classmethod
    def constant(cls, nvars: int, c, names=None) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c}, names)

    @classmethod
    def var(cls, nvars: int, i: int, names=None) -> "MultiPoly":
        """The i-th variable, 0-based."""
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): Fraction(1)}, names)

    @classmethod
    def gens(cls, names: Sequence[str]) -> list["MultiPoly"]:
        n = len(names)
        return [cls.var(n, i, names) for i in range(n)]

    # -- structure ------------------------------------------------------
    def _like(self, terms) -> "MultiPoly":
        return MultiPoly(self.nvars, terms, self.names)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, deg: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return deg is None or degs == {deg}

    def variables(self) -> list[int]:
        """0-based indices of variables that occur."""
        return sorted({i for e in self.terms for i, k in enumerate(e) if k})

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), ZERO)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_coefficient(self) -> Fraction:
        st = self.sorted_terms()
        return st[0][1] if st else ZERO

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials over different variable sets")
            return other
        if isinstance(other, (int, Fraction, QuadExt)):
            return MultiPoly.constant(self.nvars, other, self.names)
        if isinstance(other, LinearForm):
            return other.to_poly(self.names)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            terms[e] = terms.get(e, ZERO) + c
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadExt)):
            return self._like({e: c * other for e, c in self.terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.nvars, 1, self.names)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, MultiPoly) else other
        if o is None:
            return NotImplemented
        return self.nvars == o.nvars and self.terms == o.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- evaluation and substitution -----------------------------------
    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise ValueError("point dimension mismatch")
        acc = ZERO
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x**k if k > 1 else t * x
            acc = acc + t
        return acc

    def compose(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute variable i by images[i] (all over a common variable set)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0] if images else None
        nv = target.nvars if target is not None else 0
        names = target.names if target is not None else None
        acc = MultiPoly.zero(nv, names)
        powers: dict[tuple[int, int], MultiPoly] = {}
        for e, c in self.terms.items():
            t = MultiPoly.constant(nv, c, names)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = images[i] ** k
                    t = t * powers[key]
            acc = acc + t
        return acc

    def with_names(self, names: Sequence[str]) -> "MultiPoly":
        return MultiPoly(self.nvars, self.terms, names)

    # -- normalisation ----------------------------------------------------
    def primitive(self) -> "MultiPoly":
        """Scale to coprime integer coefficients with positive leading coefficient."""
        if not self.terms:
            return self
        den = 1
        num = 0
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        for c in self.terms.values():
            num = gcd(num, (c * den).numerator)
        scale = Fraction(den, num)
        if self.leading_coefficient() < 0:
            scale = -scale
        return self * scale

    # -- printing -----------------------------------------------------------
    def to_string(self, names: Sequence[str] | None = None) -> str:
        names = names or self.names or default_names(self.nvars)
        if not self.terms:
            return "0"
        parts: list[str] = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            neg = c < 0
            mag = -c if neg else c
            if not mono:
                body = format_scalar(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_scalar(mag)}*{mono}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"MultiPoly({self.to_string()!r})"


class LinearForm:
    """Homogeneous linear form sum c_i f_i with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable) -> None:
        self.coeffs = tuple(Fraction(c) if isinstance(c, int) else c for c in coeffs)

    @classmethod
    def zero(cls, n: int) -> "LinearForm":
        return cls((ZERO,) * n)

    @classmethod
    def basis(cls, n: int, i: int) -> "LinearForm":
        """The coordinate form f_{i+1} (0-based i)."""
        return cls(Fraction(1) if k == i else ZERO for k in range(n))

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "LinearForm":
        if not p.is_homogeneous(1) and not p.is_zero():
            raise ValueError(f"not a linear form: {p}")
        coeffs = [ZERO] * p.nvars
        for e, c in p.terms.items():
            coeffs[e.index(1)] = c
        return cls(coeffs)

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self) -> "LinearForm":
        return LinearForm(-a for a in self.coeffs)

    def __mul__(self, c) -> "LinearForm":
        if isinstance(c, (int, Fraction)):
            return LinearForm(a * c for a in self.coeffs)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, LinearForm):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def evaluate(self, point: Sequence):
        acc = ZERO
        for c, x in zip(self.coeffs, point):
            if c:
                acc = acc + c * x
        return acc

    def to_poly(self, names=None) -> MultiPoly:
        n = len(self.coeffs)
        terms = {}
        for i, c in enumerate(self.coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return MultiPoly(n, terms, names)

    def to_string(self, names=None) -> str:
        return self.to_poly(names).to_string(names)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"LinearForm({self.to_string()!r})"


def _as_poly(x, nvars: int | None) -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, LinearForm):
        return x.to_poly()
    if nvars is None:
        raise TypeError("cannot infer the variable count of a scalar entry")
    return MultiPoly.constant(nvars, x)


def _nvars_of(m) -> int | None:
    for row in m:
        for x in row:
            if isinstance(x, (MultiPoly, LinearForm)):
                return x.nvars
    return None


def _check_skew(m, nvars) -> None:
    n = len(m)
    for i in range(n):
        if len(m[i]) != n:
            raise ValueError("pfaffian needs a square matrix")
        if not _as_poly(m[i][i], nvars).is_zero():
            raise ValueError("matrix is not skew-symmetric (nonzero diagonal)")
        for j in range(i + 1, n):
            if _as_poly(m[i][j], nvars) != -_as_poly(m[j][i], nvars):
                raise ValueError(f"matrix is not skew-symmetric at ({i + 1},{j + 1})")


def pfaffian(m, index_subset: Sequence[int], check: bool = True) -> MultiPoly:
    """Pfaffian of the principal submatrix on 1-based ``index_subset``.

    ``m`` is a square skew matrix of LinearForm / MultiPoly / scalars.  The
    subset is taken as a set and sorted ascending.  Uses expansion along the
    first row: Pf(A) = sum_j (-1)^(j) a_{1j} Pf(A without rows/cols 1, j).
    """
    idx = sorted(set(index_subset))
    if len(idx) != len(index_subset):
        raise ValueError("index subset has repeated entries")
    if len(idx) % 2:
        raise ValueError("pfaffian needs an even-size index subset")
    n = len(m)
    if any(i < 1 or i > n for i in idx):
        raise ValueError("index out of range")
    nvars = _nvars_of(m)
    if nvars is None:
        nvars = 0
    if check:
        _check_skew(m, nvars)
    names = None
    for row in m:
        for x in row:
            if isinstance(x, MultiPoly) and x.names:
                names = x.names
                break
    entries = {
        (i, j): _as_poly(m[i - 1][j - 1], nvars)
        for a, i in enumerate(idx)
        for j in idx[a + 1 :]
    }
    cache: dict[tuple[int, ...], MultiPoly] = {}

    def pf(sub: tuple[int, ...]) -> MultiPoly:
        if not sub:
            return MultiPoly.constant(nvars, 1, names)
        if sub in cache:
            return cache[sub]
        first = sub[0]
        acc = MultiPoly.zero(nvars, names)
        for pos in range(1, len(sub)):
            j = sub[pos]
            e = entries[(first, j)]
            if e.is_zero():
                continue
            rest = sub[1:pos] + sub[pos + 1 :]
            term = e * pf(rest)
            acc = acc + term if pos % 2 == 1 else acc - term
        cache[sub] = acc
        return acc

    result = pf(tuple(idx))
    return result.with_names(names) if names else result


def is_zero_poly(p: MultiPoly) -> bool:
    return p.is_zero()


def echelon_forms(forms: Sequence[LinearForm], nvars: int) -> tuple[Matrix, list[int]]:
    """Reduced echelon basis of the span of ``forms`` and its pivot variables.

    Pivots are taken from the highest-index variable down, so substitution
    eliminates later variables in favour of earlier ones (delta - gamma = 0
    becomes delta := gamma).
    """
    if not forms:
        return Matrix.zeros(0, nvars), []
    red, piv = rref(Matrix(tuple(reversed(f.coeffs)) for f in forms))
    rows = [tuple(reversed(r)) for r in red.rows]
    return Matrix(rows, nvars), [nvars - 1 - p for p in piv]


def vanishing_substitution(forms: Sequence[LinearForm], nvars: int, names=None) -> list[MultiPoly]:
    """Images of each variable on the common zero set of ``forms``.

    Pivot variables of the reduced echelon basis are expressed through the
    free variables; free variables map to themselves.  Depends only on the
    span of the forms.
    """
    red, pivots = echelon_forms(forms, nvars)
    gens = [MultiPoly.var(nvars, i, names) for i in range(nvars)]
    images = list(gens)
    for row, pc in zip(red.rows, pivots):
        img = MultiPoly.zero(nvars, names)
        for j, c in enumerate(row):
            if j != pc and c != 0:
                img = img - gens[j] * c
        images[pc] = img
    return images


def substitute_vanishing(p, forms: Sequence[LinearForm]):
    """Reduce ``p`` modulo the linear span of ``forms`` (restrict to their zeros).

    Accepts a MultiPoly or a LinearForm; returns the same kind.
    """
    if isinstance(p, LinearForm):
        if not forms:
            return p
        return LinearForm.from_poly(substitute_vanishing(p.to_poly(), forms))
    if not forms:
        return p
    images = vanishing_substitution(forms, p.nvars, p.names)
    return p.compose(images)


def gram_matrix(q: MultiPoly, variables: Sequence[int]) -> Matrix:
    """Symmetric G with q(v) = v^T G v, over the 0-based ``variables``.

    q must be zero or a homogeneous quadratic using only those variables.
    """
    if q.is_zero():
        return Matrix.zeros(len(variables), len(variables))
    if q.degree() > 2:
        raise ValueError(f"degree {q.degree()} > 2: no Gram matrix")
    if not q.is_homogeneous(2):
        raise ValueError(f"not a homogeneous quadratic: {q}")
    pos = {v: k for k, v in enumerate(variables)}
    missing = [i for i in q.variables() if i not in pos]
    if missing:
        raise ValueError(f"polynomial uses variables outside the given list: {missing}")
    n = len(variables)
    g = [[ZERO] * n for _ in range(n)]
    half = Fraction(1, 2)
    for e, c in q.terms.items():
        occ = [i for i, k in enumerate(e) if k]
        if len(occ) == 1:
            a = pos[occ[0]]
            g[a][a] = c
        else:
            a, b = pos[occ[0]], pos[occ[1]]
            g[a][b] = c * half
            g[b][a] = c * half
    return Matrix(g)


def parse_poly(text: str, names: Sequence[str]) -> MultiPoly:
    """Parse a polynomial like "2*e3*b4 - e4*(b3 - c4)" over the given names.

    Only +, -, *, ^, integer/rational literals and parentheses are supported.
    Intended for writing expected values in tests and catalog tables.
    """
    import ast

    gens = dict(zip(names, MultiPoly.gens(names)))
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    n = len(names)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.BinOp):
            l, r = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return l + r
            if isinstance(node.op, ast.Sub):
                return l - r
            if isinstance(node.op, ast.Mult):
                return l * r
            if isinstance(node.op, ast.Div):
                if isinstance(r, MultiPoly):
                    raise ValueError("division by a polynomial")
                return l * Fraction(1) / r if not isinstance(l, MultiPoly) else l * (Fraction(1) / r)
            if isinstance(node.op, ast.Pow):
                if isinstance(r, MultiPoly) or Fraction(r).denominator != 1:
                    raise ValueError("exponents must be integer literals")
                return l ** int(r)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.UAdd):
            return ev(node.operand)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name) and node.id in gens:
            return gens[node.id]
        raise ValueError(f"unsupported expression element in {text!r}")

    out = ev(tree)
    if not isinstance(out, MultiPoly):
        out = MultiPoly.constant(n, out, names)
    return out
