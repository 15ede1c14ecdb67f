import pytest
import sympy
from hypothesis import given, settings, strategies as st

from psiherm import linalg
from psiherm.errors import ValidationError
from psiherm.scalars import GF, QQ

small = st.integers(-4, 4)


def matrices(rows, cols=None):
    cols = cols or rows
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def to_q(M):
    return [[QQ(x) for x in row] for row in M]


@settings(max_examples=60)
@given(st.integers(1, 5).flatmap(matrices))
def test_det_and_rank_match_sympy(M):
    S = sympy.Matrix(M)
    assert linalg.det(QQ, to_q(M)) == int(S.det())
    assert linalg.rank(QQ, to_q(M)) == S.rank()


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(matrices))
def test_inverse_round_trip(M):
    Q = to_q(M)
    if linalg.det(QQ, Q) == 0:
        with pytest.raises(ValidationError):
            linalg.inverse(QQ, Q)
        return
    inv = linalg.inverse(QQ, Q)
    assert linalg.matmul(QQ, Q, inv) == linalg.identity(QQ, len(M))


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(lambda r: matrices(r, 5)))
def test_nullspace_is_killed(M):
    Q = to_q(M)
    basis = linalg.nullspace(QQ, Q)
    assert len(basis) == 5 - sympy.Matrix(M).rank()
    for v in basis:
        assert all(x == 0 for x in linalg.matvec(QQ, Q, v))


def test_det_over_fp_matches_integer_det_mod_p():
    M = [[2, 5, 1], [3, 3, 4], [1, 0, 6]]
    F = GF(7)
    assert linalg.det(F, [[F(x) for x in r] for r in M]) == int(sympy.Matrix(M).det()) % 7


def test_solve_and_column_basis():
    M = to_q([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    x = linalg.solve(QQ, M, [QQ(6), QQ(12), QQ(2)])
    assert linalg.matvec(QQ, M, x) == [6, 12, 2]
    assert linalg.solve(QQ, M, [QQ(1), QQ(0), QQ(0)]) is None
    assert linalg.column_basis(QQ, M) == [0, 1]
