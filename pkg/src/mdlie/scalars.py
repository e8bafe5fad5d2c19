"""Exact scalars: rationals (``fractions.Fraction``) and elements a + b*sqrt(d)
of a real quadratic field.

Rationals are plain ``Fraction`` objects.  A :class:`QuadExt` only exists when
its irrational part is nonzero; every arithmetic result with vanishing
irrational part collapses back to a ``Fraction``, so each value has exactly
one canonical representation.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union


def squarefree_part(n: int) -> tuple[int, int]:
    """Return (s, c) with n = c**2 * s and s squarefree.  n must be >= 1."""
    if n < 1:
        raise ValueError(f"squarefree_part needs a positive integer, got {n}")
    s, c = 1, 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            c *= p
        if n % p == 0:
            n //= p
            s *= p
        p += 1
    return s * n, c


def is_squarefree(d: int) -> bool:
    return d >= 1 and squarefree_part(d)[0] == d


class QuadExt:
    """a + b*sqrt(d) with d >= 2 squarefree and b != 0.

    Use :func:`quad` to build values; it returns a ``Fraction`` when the
    irrational part vanishes.  Mixing two different ``d`` raises ``ValueError``.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int) -> None:
        a, b = Fraction(a), Fraction(b)
        if b == 0:
            raise ValueError("QuadExt needs a nonzero irrational part; use quad()")
        if not is_squarefree(d) or d < 2:
            raise ValueError(f"d must be a squarefree integer >= 2, got {d}")
        self.a = a
        self.b = b
        self.d = d

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(
                    f"cannot mix sqrt({self.d}) and sqrt({other.d}) scalars"
                )
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return quad(self.a + c[0], self.b + c[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return quad(self.a - c[0], self.b - c[1], self.d)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return quad(c[0] - self.a, c[1] - self.b, self.d)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        x, y = c
        return quad(self.a * x + self.b * y * self.d, self.a * y + self.b * x, self.d)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out, base = quad(1, 0, self.d), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def inverse(self):
        n = self.norm()
        # n != 0 because d is not a perfect square
        return quad(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        if c[1] == 0:
            if c[0] == 0:
                raise ZeroDivisionError("division by zero")
            return quad(self.a / c[0], self.b / c[0], self.d)
        return self * quad(c[0], c[1], self.d).inverse()

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return quad(c[0], c[1], self.d) * self.inverse()

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sa == 0:
            return sb
        # opposite signs: compare a^2 with d*b^2
        return sa if self.a * self.a > self.d * self.b * self.b else sb

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def _cmp(self, other) -> int:
        diff = self - other
        return diff.sign() if isinstance(diff, QuadExt) else (diff > 0) - (diff < 0)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return True

    def __float__(self):
        # display only; never used in computational paths
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadExt({self.a!s}, {self.b!s}, {self.d})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, QuadExt]


def quad(a, b, d: int) -> Scalar:
    """Canonical constructor for a + b*sqrt(d).

    ``d`` need not be squarefree; square factors are pulled into ``b``.
    ``d`` in {0, 1} degenerates to a rational.
    """
    a, b = Fraction(a), Fraction(b)
    if d < 0:
        raise ValueError(f"negative d={d}: only real quadratic fields are supported")
    if d == 0 or b == 0:
        return a
    s, c = squarefree_part(d)
    if s == 1:
        return a + b * c
    return QuadExt(a, b * c, s)


def sqrt_rational(r) -> Scalar:
    """Exact square root of a non-negative rational, as a scalar."""
    r = Fraction(r)
    if r < 0:
        raise ValueError("square root of a negative rational is not real")
    if r == 0:
        return Fraction(0)
    # sqrt(p/q) = sqrt(p*q)/q
    s, c = squarefree_part(r.numerator * r.denominator)
    return quad(0, Fraction(c, r.denominator), s)


def sign(x: Scalar) -> int:
    if isinstance(x, QuadExt):
        return x.sign()
    return (x > 0) - (x < 0)


def field_d(values) -> int:
    """Common d of an iterable of scalars (1 when all are rational)."""
    d = 1
    for v in values:
        if isinstance(v, QuadExt):
            if d != 1 and v.d != d:
                raise ValueError(f"mixed quadratic fields sqrt({d}) and sqrt({v.d})")
            d = v.d
    return d


def format_scalar(x) -> str:
    """Serialize: "p", "p/q", "a+b*sqrt(d)", "b*sqrt(d)" or "-sqrt(d)"."""
    if isinstance(x, QuadExt):
        b = abs(x.b)
        rad = f"sqrt({x.d})" if b == 1 else f"{_frac_str(b)}*sqrt({x.d})"
        sign = "-" if x.b < 0 else "+"
        if x.a == 0:
            return rad if sign == "+" else f"-{rad}"
        return f"{_frac_str(x.a)}{sign}{rad}"
    if isinstance(x, (int, Fraction)):
        return _frac_str(Fraction(x))
    raise TypeError(f"not an exact scalar: {x!r}")


def _frac_str(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


_RAT = r"[+-]?\d+(?:/\d+)?"
_QUAD_RE = re.compile(
    rf"^(?P<a>{_RAT})?\s*(?:(?P<sgn>[+-])?\s*(?:(?P<b>\d+(?:/\d+)?)\s*\*\s*)?sqrt\(\s*(?P<d>\d+)\s*\))$"
)
_RAT_RE = re.compile(rf"^{_RAT}$")


def parse_scalar(text: str, d: int | None = None) -> Scalar:
    """Parse "p", "p/q", "a+b*sqrt(d)", "b*sqrt(d)", "-sqrt(d)".

    With ``d`` given, any radical must use that d (after squarefree
    reduction); anything else raises ``ValueError``.
    """
    s = text.strip().replace(" ", "")
    if _RAT_RE.match(s):
        num, _, den = s.partition("/")
        if den and int(den) == 0:
            raise ValueError(f"zero denominator in scalar {text!r}")
        return Fraction(int(num), int(den) if den else 1)
    m = _QUAD_RE.match(s)
    if not m:
        raise ValueError(f"cannot parse scalar {text!r}")
    a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
    if m.group("a") and not m.group("sgn"):
        raise ValueError(f"cannot parse scalar {text!r}")
    b = Fraction(m.group("b")) if m.group("b") else Fraction(1)
    if m.group("sgn") == "-":
        b = -b
    dd = int(m.group("d"))
    value = quad(a, b, dd)
    if d is not None and isinstance(value, QuadExt) and value.d != squarefree_part(d)[0]:
        raise ValueError(f"scalar {text!r} is not in Q(sqrt({d}))")
    return value


def parse_vector(text: str, d: int | None = None) -> tuple:
    """Comma-separated scalars, e.g. "0,0,1,1+1*sqrt(2),0"."""
    parts = [p for p in text.split(",")]
    if any(not p.strip() for p in parts):
        raise ValueError(f"empty coordinate in {text!r}")
    vec = tuple(parse_scalar(p, d) for p in parts)
    field_d(vec)
    return vec


def format_vector(v) -> list[str]:
    return [format_scalar(x) for x in v]
