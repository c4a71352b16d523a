from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from gradalg.exact import (Matrix, RowReducer, Q, fmt_rational, in_span, kernel, parse_rational, rref, solve,
                           solve_vector, sparse_rank, to_sparse)
from strategies import matrices, rationals, square


def sym(m):
    return sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.numerator, x.denominator) for r in m.to_rows() for x in r])


@given(matrices())
def test_rank_matches_sympy(m):
    assert m.rank() == sym(m).rank()
    assert m.rank() == m.T.rank()


@given(matrices())
def test_rref_is_idempotent(m):
    r, piv = rref(m)
    r2, piv2 = rref(r)
    assert (r, piv) == (r2, piv2)
    assert len(piv) == m.rank()


@given(matrices())
def test_kernel_is_annihilated_and_complete(m):
    ker = kernel(m)
    assert len(ker) == m.cols - m.rank()
    for v in ker:
        assert not any(m.apply(v))


@given(square())
def test_det_matches_sympy(m):
    assert m.det() == Fraction(str(sym(m).det()))


@given(square())
def test_inverse(m):
    assume(m.det() != 0)
    assert (m @ m.inverse()).is_identity()
    assert (m.inverse() @ m).is_identity()


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        Matrix.from_rows([[1, 2], [2, 4]]).inverse()


@given(matrices(), st.data())
def test_solve_recovers_a_solution(a, data):
    x = [data.draw(rationals) for _ in range(a.cols)]
    b = a.apply(x)
    sol = solve_vector(a, b)
    assert sol.feasible and sol.contains(x)
    assert a.apply(sol.particular.col(0)) == b


def test_solve_infeasible():
    a = Matrix.from_rows([[1, 1], [2, 2]])
    sol = solve(a, Matrix.from_rows([[1], [3]]))
    assert not sol.feasible and sol.inconsistent_row == 1
    assert not sol.contains((1, 0))


@given(matrices(), matrices())
def test_matmul_matches_sympy(a, b):
    assume(a.cols == b.rows)
    assert sym(a @ b) == sym(a) * sym(b)


@given(matrices())
def test_json_round_trip(m):
    assert Matrix.from_json(m.to_json()) == m


@given(rationals)
def test_rational_text_round_trip(q):
    assert parse_rational(fmt_rational(q)) == q


def test_rational_parsing_rejects_floats():
    with pytest.raises(ValueError):
        parse_rational("0.5")
    with pytest.raises(TypeError):
        Q(0.5)
    assert Q("-3/6") == Fraction(-1, 2)


@given(matrices())
def test_row_reducer_agrees_with_dense(m):
    red = RowReducer()
    for r in m.to_rows():
        red.add(to_sparse(r))
    assert len(red) == m.rank() == sparse_rank(to_sparse(r) for r in m.to_rows())
    for r in m.to_rows():
        assert not red.reduce(to_sparse(r))
        assert in_span([tuple(x) for x in m.to_rows()], tuple(r))


def test_matrix_shape_errors():
    with pytest.raises(ValueError):
        Matrix.from_rows([[1, 2], [3]])
    with pytest.raises(ValueError):
        Matrix.identity(2) @ Matrix.identity(3)


@pytest.mark.parametrize("rows,expected,pivots", [
    ([[1, 0], [0, 1]], [[1, 0], [0, 1]], [0, 1]),
    ([[1, 2], [2, 4]], [[1, 2], [0, 0]], [0]),
    ([[0, 1], [1, 0]], [[1, 0], [0, 1]], [0, 1]),
])
def test_rref_examples(rows, expected, pivots):
    r, piv = rref(Matrix.from_rows(rows))
    assert r == Matrix.from_rows(expected) and piv == pivots


def test_solve_examples():
    sol = solve_vector(Matrix.identity(2), (3, 5))
    assert sol.unique and sol.particular.col(0) == (3, 5)
    sol = solve_vector(Matrix.from_rows([[1, 1]]), (0,))
    assert len(sol.kernel) == 1 and sol.particular.col(0) == (0, 0)
    assert not solve_vector(Matrix.from_rows([[1, 0], [0, 0]]), (0, 1)).feasible


def test_kernel_examples():
    assert kernel(Matrix.identity(3)) == []
    assert len(kernel(Matrix.zeros(2, 3))) == 3
    assert len(kernel(Matrix.from_rows([[1, 1, 0]]))) == 2
