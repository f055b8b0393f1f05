from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotss.fields import F2, F3, QQ, Field, Scalar, field_by_name
from knotss.linalg import (Matrix, Subspace, induced_map, kernel_basis,
                           rank, solve, subquotient)

FIELDS = [F2, F3, QQ]


def field_strategy():
    return st.sampled_from(FIELDS)


def matrix_strategy(max_dim=5):
    def build(field, nrows, ncols, data):
        return Matrix(field, [[data(i, j) for j in range(ncols)] for i in range(nrows)])

    @st.composite
    def strat(draw):
        field = draw(field_strategy())
        nrows = draw(st.integers(0, max_dim))
        ncols = draw(st.integers(0, max_dim))
        entries = draw(st.lists(st.integers(-6, 6), min_size=nrows * ncols,
                                max_size=nrows * ncols))
        rows = [entries[i * ncols:(i + 1) * ncols] for i in range(nrows)]
        return Matrix(field, rows)

    return strat()


def test_field_validation():
    with pytest.raises(ValueError):
        Field(4)
    with pytest.raises(ValueError):
        field_by_name("f7")
    assert field_by_name("F2") is F2


def test_scalar_arithmetic():
    a = Scalar(F3, 5)
    assert a.value == 2
    assert (a * a).value == 1  # 2*2 = 4 = 1 mod 3
    assert (a + Scalar(F3, 1)).value == 0
    assert a.inverse().value == 2
    with pytest.raises(ValueError):
        a + Scalar(F2, 1)


def test_rank_trivial_cases():
    assert rank(Matrix.identity(Field(5), 3)) == 3
    assert rank(Matrix(QQ, [[1, 2], [2, 4]])) == 1
    assert rank(Matrix(F2, [[1, 1], [1, 1]])) == 1


def test_kernel_trivial_cases():
    k = kernel_basis(Matrix(F2, [[1, 1]]))
    assert k.dim == 1 and k.basis[0] == [1, 1]
    assert kernel_basis(Matrix.zeros(QQ, 2, 2)).dim == 2
    assert kernel_basis(Matrix(QQ, [[1, 2, 3]])).dim == 2


def test_solve_cases():
    b = [Fraction(3), Fraction(-1)]
    assert solve(Matrix.identity(QQ, 2), b) == b
    assert solve(Matrix(QQ, [[0]]), [1]) is None
    # 2x = 1 over F_3 has x = 2
    assert solve(Matrix(F3, [[2]]), [1]) == [2]
    with pytest.raises(ValueError):
        solve(Matrix(QQ, [[1]]), [1, 2])


def test_subquotient_cases():
    Z = Subspace(F3, 3, [[1, 0, 0], [0, 1, 0]])
    B = Subspace(F3, 3, [[1, 0, 0]])
    dim, reps = subquotient(Z, B)
    assert dim == 1 and reps == [[0, 1, 0]]
    assert subquotient(Z, Z)[0] == 0
    assert subquotient(Z, Subspace(F3, 3, []))[0] == 2
    with pytest.raises(ValueError):
        subquotient(B, Z)


def test_induced_map_cases():
    Z = Subspace(F3, 2, [[1, 0], [0, 1]])
    B = Subspace(F3, 2, [[1, 0]])
    f = Matrix.identity(F3, 2)
    m = induced_map(f, Z, B, Z, B)
    assert m == Matrix.identity(F3, 1)
    # f mapping everything into the boundary induces zero
    g = Matrix(F3, [[1, 1], [0, 0]])
    assert induced_map(g, Z, B, Z, B).is_zero()
    # scaling a representative by 2 reads off directly
    h = Matrix(F3, [[1, 0], [0, 2]])
    assert induced_map(h, Z, B, Z, B).rows == [[2]]


def test_induced_map_rejects_ill_defined():
    Z = Subspace(QQ, 2, [[1, 0], [0, 1]])
    B = Subspace(QQ, 2, [[1, 0]])
    # sends the boundary outside the target boundary
    f = Matrix(QQ, [[0, 0], [1, 0]])
    with pytest.raises(ValueError):
        induced_map(f, Z, B, Z, B)


@given(matrix_strategy())
@settings(max_examples=80, deadline=None)
def test_rank_equals_transpose_rank(M):
    assert rank(M) == rank(M.transpose())


@given(matrix_strategy())
@settings(max_examples=80, deadline=None)
def test_rank_nullity(M):
    assert kernel_basis(M).dim + rank(M) == M.ncols


@given(matrix_strategy())
@settings(max_examples=80, deadline=None)
def test_kernel_vectors_annihilated(M):
    k = kernel_basis(M)
    z = [M.field.zero] * M.nrows
    for v in k.basis:
        assert M.mul_vector(v) == z


@given(matrix_strategy(), st.integers(-6, 6), st.integers(-6, 6),
       st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
@settings(max_examples=80, deadline=None)
def test_solve_exact(M, a, b, c, d, e):
    x = [M.field.of(v) for v in (a, b, c, d, e)][:M.ncols]
    rhs = M.mul_vector(x)
    sol = solve(M, rhs)
    assert sol is not None
    assert M.mul_vector(sol) == rhs


@given(matrix_strategy())
@settings(max_examples=60, deadline=None)
def test_subquotient_representatives_independent_mod_b(M):
    # Z = column span, B = span of the first column's multiples
    F = M.field
    cols = M.columns()
    pivots = []
    for c in cols:
        cand = pivots + [c]
        if rank(Matrix.from_columns(F, cand, ambient=M.nrows)) > len(pivots):
            pivots.append(c)
    Z = Subspace(F, M.nrows, pivots)
    B = Subspace(F, M.nrows, pivots[:1])
    dim, reps = subquotient(Z, B)
    assert dim == Z.dim - B.dim
    joint = Matrix.from_columns(F, B.basis + reps, ambient=M.nrows)
    assert rank(joint) == B.dim + len(reps)
