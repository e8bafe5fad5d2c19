import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import invertible_matrices, matrices, random_rational, rationals
from mdlie.linalg import (
    Definiteness,
    Matrix,
    determinant,
    inverse,
    kernel,
    rank,
    rref,
    semidefiniteness,
    solve,
)
from mdlie.scalars import quad

I = Fraction(1)


def test_rank_examples():
    assert rank(Matrix.identity(3)) == 3
    assert rank(Matrix.zeros(4, 4)) == 0
    r2 = quad(0, 1, 2)
    assert rank(Matrix([[1, r2], [r2, 2]])) == 1


def test_kernel_examples():
    assert kernel(Matrix.identity(2)) == []
    assert len(kernel(Matrix.zeros(3, 3))) == 3


def test_solve_examples():
    assert solve(Matrix.identity(2), [1, 2]) == (1, 2)
    assert solve(Matrix([[1, 1], [1, 1]]), [1, 2]) is None
    assert solve(Matrix([[2, 0], [0, 3]]), [1, 0]) == (Fraction(1, 2), 0)


def test_inverse_and_singular():
    m = Matrix([[2, 1], [1, 1]])
    assert inverse(m) @ m == Matrix.identity(2)
    with pytest.raises(ValueError, match="singular"):
        inverse(Matrix([[1, 2], [2, 4]]))


def test_matrix_rejects_floats():
    with pytest.raises(TypeError):
        Matrix([[0.5]])


def test_semidefiniteness_examples():
    kind, forms = semidefiniteness(Matrix.identity(2))
    assert kind is Definiteness.PSD
    assert forms == [(1, 0), (0, 1)]
    assert semidefiniteness(Matrix.diag([1, -2]))[0] is Definiteness.INDEFINITE
    kind, forms = semidefiniteness(Matrix.diag([1, 1, 0]))
    assert kind is Definiteness.PSD and forms == [(1, 0, 0), (0, 1, 0)]
    assert semidefiniteness(Matrix.diag([-1, 0]))[0] is Definiteness.NSD
    assert semidefiniteness(Matrix.zeros(2, 2))[0] is Definiteness.ZERO
    # zero diagonal but nonzero off-diagonal: x*y is indefinite
    assert semidefiniteness(Matrix([[0, 1], [1, 0]]))[0] is Definiteness.INDEFINITE
    with pytest.raises(ValueError):
        semidefiniteness(Matrix([[0, 1], [0, 0]]))


@given(matrices())
def test_rank_transpose(m):
    assert rank(m) == rank(m.T)


@given(matrices())
def test_rank_nullity(m):
    ker = kernel(m)
    assert len(ker) + rank(m) == m.ncols
    for v in ker:
        assert not any(m @ v)


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(invertible_matrices(n), invertible_matrices(n), st.just(n))), st.data())
def test_rank_invariant_under_invertible_products(pqn, data):
    p, q, n = pqn
    m = Matrix([[data.draw(rationals) for _ in range(n)] for _ in range(n)])
    assert rank(p @ m @ q) == rank(m)


@given(matrices(max_rows=4, max_cols=4))
def test_solve_consistent(m):
    x = [Fraction(k + 1) for k in range(m.ncols)]
    b = m @ x
    sol = solve(m, b)
    assert sol is not None
    assert m @ sol == b


@given(matrices(max_rows=4, max_cols=4))
def test_rref_is_idempotent(m):
    r, piv = rref(m)
    assert rref(r) == (r, piv)


def test_determinant_matches_rank():
    assert determinant(Matrix([[1, 2], [3, 4]])) == -2
    assert determinant(Matrix([[1, 2], [2, 4]])) == 0


@given(st.integers(1, 4), st.integers(0, 10_000))
def test_psd_property(n, seed):
    """v^T S v >= 0 with equality exactly on the common zeros of the forms."""
    rng = random.Random(seed)
    k = rng.randint(1, n)
    rows = [[random_rational(rng, 3) for _ in range(n)] for _ in range(k)]
    a = Matrix(rows)
    s = a.T @ a  # Gram matrix: PSD by construction
    kind, forms = semidefiniteness(s)
    if s.is_zero():
        assert kind is Definiteness.ZERO
        return
    assert kind is Definiteness.PSD
    for _ in range(100):
        v = [random_rational(rng, 3) for _ in range(n)]
        val = sum(v[i] * (s @ v)[i] for i in range(n))
        assert val >= 0
        vanish = all(sum(c * x for c, x in zip(f, v)) == 0 for f in forms)
        assert (val == 0) == vanish
    # and on a point of the common zero set
    for z in kernel(Matrix(forms)):
        assert sum(z[i] * (s @ z)[i] for i in range(n)) == 0


def test_quadratic_extension_kernel():
    r2 = quad(0, 1, 2)
    m = Matrix([[1, r2], [r2, 2]])
    (v,) = kernel(m)
    assert not any(m @ v)
