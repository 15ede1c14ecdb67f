import random

import pytest

from psiherm.algebra import builtin_algebra, mat_identity, mult_morphism
from psiherm.errors import RingMismatchError, ValidationError
from psiherm.hermitian import (
    GWClass,
    antidual_dimension,
    base_change_hermitian,
    enveloping_base,
    evaluate_form,
    hyperbolic,
    involution_base,
    is_nondegenerate,
    make_hermitian,
    orthogonal_sum,
    trace_form,
    verify_isometry,
)
from psiherm.modules import free_module, projective_module
from psiherm.psi import psi_module


def test_rejects_non_hermitian_gram_with_witness():
    QI = builtin_algebra("QI")
    base = involution_base(QI, "conj")
    i = QI.basis_element(1)
    with pytest.raises(ValidationError) as err:
        make_hermitian(base, free_module(QI, 2), [[QI.one(), i], [i, QI.one()]])
    assert err.value.witness == (0, 1)
    # i on the diagonal is not fixed by conjugation
    with pytest.raises(ValidationError):
        make_hermitian(base, free_module(QI, 1), [[i]])
    M = make_hermitian(base, free_module(QI, 2), [[QI.one(), i], [-i, QI.one()]])
    assert M.rank == 2


def test_form_is_sesquilinear_on_a_custom_gram():
    QI = builtin_algebra("QI")
    base = involution_base(QI, "conj")
    conj = base.bar
    i = QI.basis_element(1)
    M = make_hermitian(base, free_module(QI, 2), [[QI.scalar(2), i], [-i, QI.scalar(3)]])
    rng = random.Random(2)
    for _ in range(50):
        u, v = [QI.random_element(rng) for _ in range(2)], [QI.random_element(rng) for _ in range(2)]
        b = QI.random_element(rng)
        assert evaluate_form(M, [x * b for x in u], v) == conj(b) * evaluate_form(M, u, v)
        assert evaluate_form(M, u, [x * b for x in v]) == evaluate_form(M, u, v) * b
        assert evaluate_form(M, v, u) == conj(evaluate_form(M, u, v))


@pytest.mark.parametrize("name", ["Q", "M2Q", "QxQ"])
def test_hyperbolic_is_nondegenerate_and_doubles_rank(name):
    A = builtin_algebra(name)
    base = enveloping_base(A)
    for n in (1, 2):
        H = hyperbolic(base, free_module(base.ring, n))
        assert H.rank == 2 * n
        assert is_nondegenerate(H)


def test_hyperbolic_of_projective():
    A = builtin_algebra("QxQ")
    base = involution_base(A, "swap")
    e = A.element([1, 0])
    P = projective_module(A, 1, [[e]])
    H = hyperbolic(base, P)
    assert H.module.k_dimension() == 2
    assert is_nondegenerate(H)


def test_degenerate_detected():
    Q = builtin_algebra("Q")
    base = involution_base(Q, "id")
    M = make_hermitian(base, free_module(Q, 2), [[Q.one(), Q.zero()], [Q.zero(), Q.zero()]])
    assert not is_nondegenerate(M)
    assert antidual_dimension(M) == 2


def test_verify_isometry_witnesses():
    Q = builtin_algebra("Q")
    base = involution_base(Q, "id")
    one, zero = Q.one(), Q.zero()
    M1 = make_hermitian(base, free_module(Q, 2), [[one, zero], [zero, -one]])
    H = make_hermitian(base, free_module(Q, 2), [[zero, one], [one, zero]])
    half = Q.scalar(Q.field(1) / 2)
    # (x, y) -> x e + y f with e = (1, 1/2), f = (1, -1/2) sends diag(1, -1) to [[0,1],[1,0]]
    T = [[one, one], [half, -half]]
    assert verify_isometry(T, M1, H)
    res = verify_isometry(mat_identity(Q, 2), M1, H)
    assert not res and res.witness == (0, 0)
    with pytest.raises(RingMismatchError):
        verify_isometry(T, M1, hyperbolic(enveloping_base(builtin_algebra("F5")),
                                          free_module(builtin_algebra("F5"), 1)))


def test_orthogonal_sum_and_gw_class():
    Q = builtin_algebra("Q")
    base = involution_base(Q, "id")
    a = make_hermitian(base, free_module(Q, 1), [[Q.one()]])
    s = orthogonal_sum(a, a)
    assert s.gram == [[Q.one(), Q.zero()], [Q.zero(), Q.one()]]
    g = GWClass.of(a) - GWClass.of(s)
    assert len(g.plus) == 1 and len(g.minus) == 1


def test_base_change_of_psi_matches_trace_form_dims():
    QI = builtin_algebra("QI")
    conj = QI.involutions["conj"]
    M = base_change_hermitian(psi_module(free_module(QI, 2)).output, mult_morphism(QI, conj), conj)
    T = trace_form(free_module(QI, 2), conj)
    assert M.rank == T.rank == 4
    assert M.base == T.base


def test_trace_form_of_gaussian_line_is_standard():
    QI = builtin_algebra("QI")
    T = trace_form(free_module(QI, 1), QI.involutions["conj"])
    assert T.gram == [[QI.one()]]
