import random
from math import comb

import pytest

from psiherm.algebra import builtin_algebra, mat_equal, mat_mul, mult_morphism
from psiherm.errors import RingMismatchError, UnsupportedError, ValidationError
from psiherm.modules import (
    K0Class,
    ModuleMap,
    complement,
    direct_sum,
    double_dual_iso,
    dual_module,
    eval_pairing,
    ext_square,
    extend_scalars,
    free_module,
    hom_module,
    k_dimension,
    left_act_dual,
    phi_identification,
    projective_module,
    sym_square,
    tensor_element,
    tensor_over_k,
    zero_module,
)


def idempotent_first(A):
    e = A.element([1, 0])
    return projective_module(A, 1, [[e]])


def test_free_and_projective():
    Q = builtin_algebra("Q")
    E = free_module(Q, 3)
    assert E.rank == 3 and E.is_free
    assert k_dimension(free_module(builtin_algebra("M2Q"), 1)) == 4
    P = idempotent_first(builtin_algebra("QxQ"))
    assert P.k_dimension() == 1
    assert complement(P).k_dimension() == 1


def test_projective_rejects_non_idempotent():
    Q = builtin_algebra("Q")
    with pytest.raises(ValidationError):
        projective_module(Q, 2, [[Q.one(), Q.one()], [Q.zero(), Q.zero() + Q.one() + Q.one()]])


def test_idempotent_is_idempotent_for_constructions():
    A = builtin_algebra("QxQ")
    P = idempotent_first(A)
    for M in (dual_module(P), tensor_over_k(dual_module(P), P), direct_sum(P, free_module(A, 1))):
        e = M.idempotent
        assert mat_equal(mat_mul(M.ring, e, e), e) is None


def test_dual_of_matrix_summand_and_double_dual():
    M = builtin_algebra("M2Q")
    E11 = M.basis_element(0)
    E = projective_module(M, 1, [[E11]])  # E11 M: a 2-dimensional right ideal
    assert E.k_dimension() == 2
    D = dual_module(E)
    assert D.ring == M.opposite()
    assert D.k_dimension() == 2
    iso = double_dual_iso(E)
    assert iso.is_bijective()


def test_eval_pairing_is_left_linear():
    A = builtin_algebra("M2Q")
    rng = random.Random(3)
    E = free_module(A, 2)
    D = dual_module(E)
    for _ in range(20):
        f, x, mu = D.random_vector(rng), E.random_vector(rng), A.random_element(rng)
        lam = A.random_element(rng)
        assert eval_pairing(left_act_dual(mu, f), x) == mu * eval_pairing(f, x)
        assert eval_pairing(f, [xi * lam for xi in x]) == eval_pairing(f, x) * lam


def test_tensor_over_k_rank_and_action():
    A = builtin_algebra("M2Q")
    E, F = free_module(A, 2), free_module(A, 3)
    T = tensor_over_k(dual_module(E), F)
    assert T.rank == 6 and T.is_free
    with pytest.raises(RingMismatchError):
        tensor_over_k(E, F)
    # (f (x) y)(lam (x) mu) = mu f (x) y lam
    rng = random.Random(5)
    B = T.ring
    from psiherm.algebra import pure_tensor

    f, y = dual_module(E).random_vector(rng), F.random_vector(rng)
    lam, mu = A.random_element(rng), A.random_element(rng)
    b = pure_tensor(B, lam, mu.in_algebra(A.opposite()))
    lhs = [x * b for x in tensor_element(T, f, y)]
    rhs = tensor_element(T, left_act_dual(mu, f), [yi * lam for yi in y])
    assert lhs == rhs


@pytest.mark.parametrize("name", ["Q", "QI", "QC3"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_phi_is_a_bijection_with_matching_dimensions(name, n):
    A = builtin_algebra(name)
    for sigma in A.involutions.values():
        mu = mult_morphism(A, sigma)
        E = free_module(A, n)
        src = extend_scalars(tensor_over_k(dual_module(E), E), mu)
        tgt = hom_module(E, sigma)
        assert src.k_dimension() == tgt.k_dimension() == n * n * A.dim
        assert phi_identification(E, sigma, mu).is_bijective()


def test_hom_module_needs_commutativity():
    M = builtin_algebra("M2Q")
    with pytest.raises(UnsupportedError):
        hom_module(free_module(M, 1), M.involutions["transpose"])


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_symmetric_and_exterior_ranks(n):
    Q = builtin_algebra("Q")
    assert sym_square(free_module(Q, n)).rank == comb(n + 1, 2)
    assert ext_square(free_module(Q, n)).rank == comb(n, 2)


def test_module_map_checks_summand():
    A = builtin_algebra("QxQ")
    P = idempotent_first(A)
    e2 = A.element([0, 1])
    with pytest.raises(ValidationError):
        ModuleMap(P, P, [[e2]])


def test_k0_class_arithmetic():
    A = builtin_algebra("QxQ")
    P = idempotent_first(A)
    c = K0Class.of(P) - K0Class.free(A, 1)
    assert c.virtual_k_dimension() == -1
    assert (-c).virtual_k_dimension() == 1
    assert (c + (-c)).virtual_k_dimension() == 0
    neg = -K0Class.free(A, 2, 1)
    assert neg.module.is_free and neg.module.rank == 1 and neg.free_rank == 2
    assert K0Class.from_lists(A, [free_module(A, 2)], [P]).virtual_k_dimension() == 3
    assert zero_module(A).k_dimension() == 0
