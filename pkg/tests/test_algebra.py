import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import invertible_matrices, random_rational
from mdlie.algebra import (
    BracketTable,
    LieAlgebra,
    Subspace,
    abelian,
    ad_matrix,
    bracket,
    center,
    change_basis,
    derived_algebra,
    derived_series,
    direct_sum,
    fingerprint,
    is_solvable,
    series_dims,
    split_central_factor,
    trace_ad,
    unit,
    validate,
)
from mdlie.catalog import case11, catalog, heisenberg3, md5_nc
from mdlie.linalg import Matrix

X = lambda i, n=5: unit(n, i)  # noqa: E731


def test_validate_examples():
    assert isinstance(validate(md5_nc().raw()), LieAlgebra)
    assert isinstance(validate(heisenberg3().raw()), LieAlgebra)
    bad = validate(BracketTable(3, {(1, 2): {3: 1}, (1, 3): {1: -1}}))
    assert isinstance(bad, list) and len(bad) == 1
    assert bad[0].triple == (1, 2, 3)
    assert bad[0].residual == (0, 0, -1)


def test_lie_algebra_constructor_rejects_violations():
    with pytest.raises(ValueError, match="Jacobi"):
        LieAlgebra(3, {(1, 2): {3: 1}, (1, 3): {1: -1}})


def test_bracket_table_index_rules():
    with pytest.raises(ValueError):
        BracketTable(3, {(2, 1): {3: 1}})
    with pytest.raises(ValueError):
        BracketTable(3, {(1, 4): {3: 1}})


def test_bracket_examples():
    a = md5_nc()
    assert bracket(a, X(3), X(4)) == X(5)
    assert bracket(a, X(2), X(4)) == tuple(-x for x in X(3))
    v = (1, 2, -1, 0, 3)
    assert not any(bracket(a, v, v))


def test_ad_on_derived_algebra():
    a = md5_nc()
    g1 = derived_algebra(a)
    assert ad_matrix(a, X(1), g1) == Matrix.diag([1, 1, 2])
    assert ad_matrix(a, X(2), g1) == Matrix([[0, -1, 0], [1, 0, 0], [0, 0, 0]])
    assert ad_matrix(abelian(3), (1, 2, 3)).is_zero()
    with pytest.raises(ValueError):
        ad_matrix(a, X(3), Subspace(5, [X(2)]))  # [X3, X2] = -X4


def test_series_examples():
    assert series_dims(derived_series(md5_nc())) == (5, 3, 1, 0)
    assert series_dims(derived_series(abelian(4))) == (4, 0)
    assert series_dims(derived_series(heisenberg3())) == (3, 1, 0)
    assert is_solvable(md5_nc())


def test_center_examples():
    assert center(heisenberg3()) == Subspace(3, [X(3, 3)])
    assert center(md5_nc()).dim == 0
    assert center(abelian(2)).dim == 2


def test_trace_ad_examples():
    a = md5_nc()
    assert trace_ad(a, X(3)) == 0
    assert trace_ad(a, X(1)) == 4
    assert trace_ad(abelian(3), (1, 1, 1)) == 0


def test_change_basis_rescaling():
    t = LieAlgebra(5, {(1, 3): {3: 1}, (1, 4): {4: -1}, (3, 4): {5: 3}})
    p = Matrix.diag([1, 1, Fraction(1, 3), 1, 1])
    out = change_basis(t, p)
    assert out.basis_bracket(3, 4) == X(5)
    assert change_basis(t, Matrix.identity(5)) == t
    with pytest.raises(ValueError, match="singular"):
        change_basis(t, Matrix.zeros(5, 5))


def test_change_basis_permutation_keeps_series():
    perm = Matrix([[1 if i == j else 0 for j in (4, 2, 0, 3, 1)] for i in range(5)])
    out = change_basis(md5_nc(), perm)
    assert isinstance(validate(out.raw()), LieAlgebra)
    assert series_dims(derived_series(out)) == (5, 3, 1, 0)


@given(invertible_matrices(5))
def test_fingerprint_invariant_under_basis_change(p):
    for a in (md5_nc(), case11()):
        b = change_basis(a, p)
        assert fingerprint(b) == fingerprint(a)
        assert isinstance(validate(b.raw()), LieAlgebra)


def test_direct_sum_examples():
    s = direct_sum(abelian(1), heisenberg3())
    assert s.dim == 4
    assert series_dims(derived_series(s)) == (4, 1, 0)
    assert direct_sum(abelian(1), abelian(1)) == abelian(2)


def test_direct_sum_reassembles_case11():
    split = split_central_factor(case11())
    assert split is not None
    assert split.z == X(2)
    rebuilt = direct_sum(LieAlgebra(1, {}), split.complement)
    assert change_basis(case11(), split.basis) == rebuilt


def test_split_central_factor():
    assert split_central_factor(md5_nc()) is None
    assert split_central_factor(abelian(2)) is not None
    assert split_central_factor(heisenberg3()) is None  # center lies in G^1


def test_fingerprint_examples():
    assert fingerprint(md5_nc()) == (5, (5, 3, 1, 0), (5, 3), 0)
    assert fingerprint(abelian(5)) == (5, (5, 0), (5, 0), 5)


@given(st.integers(0, 10_000))
def test_ad_is_a_representation(seed):
    """ad_[x,y] = ad_x ad_y - ad_y ad_x on every valid catalog entry."""
    rng = random.Random(seed)
    for e in catalog():
        if e.raw:
            continue
        a = e.table
        x = [random_rational(rng) for _ in range(a.dim)]
        y = [random_rational(rng) for _ in range(a.dim)]
        ax, ay = ad_matrix(a, x), ad_matrix(a, y)
        assert ad_matrix(a, bracket(a, x, y)) == ax @ ay - ay @ ax
