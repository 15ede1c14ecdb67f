import random

import pytest
from hypothesis import given, settings, strategies as st

from psiherm.algebra import (
    BUILTIN_FAMILY,
    algebra_from_dict,
    algebra_to_dict,
    builtin_algebra,
    envelope,
    mult_morphism,
    pure_tensor,
)
from psiherm.errors import UnsupportedError, ValidationError

names = st.sampled_from(BUILTIN_FAMILY)
seeds = st.integers(0, 10**6)


def test_builtins_validate(builtin):
    builtin.validate()
    for inv in builtin.involutions.values():
        inv.validate()


@settings(max_examples=40, deadline=None)
@given(names, seeds)
def test_ring_axioms(name, seed):
    A = builtin_algebra(name)
    rng = random.Random(seed)
    x, y, z = (A.random_element(rng) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert A.one() * x == x == x * A.one()


@settings(max_examples=40, deadline=None)
@given(names, seeds)
def test_opposite_reverses_products(name, seed):
    A = builtin_algebra(name)
    Aop = A.opposite()
    rng = random.Random(seed)
    x, y = A.random_element(rng), A.random_element(rng)
    assert (x.in_algebra(Aop) * y.in_algebra(Aop)).in_algebra(A) == y * x
    assert Aop.opposite() == A


@settings(max_examples=25, deadline=None)
@given(names, seeds)
def test_swap_is_an_antiinvolution_and_tensors_multiply(name, seed):
    A = builtin_algebra(name)
    B = envelope(A)
    Aop = A.opposite()
    rng = random.Random(seed)
    a, b, c, d = (A.random_element(rng, 2) for _ in range(4))
    swap = B.involutions["swap"]
    p = pure_tensor(B, a, b.in_algebra(Aop))
    q = pure_tensor(B, c, d.in_algebra(Aop))
    assert p * q == pure_tensor(B, a * c, (d * b).in_algebra(Aop))
    assert swap(p) == pure_tensor(B, b, a.in_algebra(Aop))
    assert swap(p * q) == swap(q) * swap(p)


def test_matrix_units():
    M = builtin_algebra("M2Q")
    E11, E12, E21, E22 = M.basis_elements()
    assert E12 * E21 == E11
    assert E21 * E12 == E22
    assert E11 * E22 == M.zero()
    assert not M.is_commutative()
    # in the opposite algebra E12 . E11 = E11 E12 = E12
    Mop = M.opposite()
    assert (E12.in_algebra(Mop) * E11.in_algebra(Mop)).in_algebra(M) == E12


def test_gaussian_rationals_and_group_algebra():
    QI = builtin_algebra("QI")
    one, i = QI.basis_elements()
    assert i * i == -one
    C3 = builtin_algebra("QC3")
    e, g, g2 = C3.basis_elements()
    assert g * g2 == e
    assert C3.involutions["inverse"](g) == g2


@pytest.mark.parametrize("name", ["Q", "QI", "QxQ", "QC3", "F5"])
def test_mult_morphism_is_multiplicative(name):
    A = builtin_algebra(name)
    rng = random.Random(7)
    for inv in A.involutions.values():
        mu = mult_morphism(A, inv)
        B = envelope(A)
        for _ in range(20):
            x, y = B.random_element(rng, 2), B.random_element(rng, 2)
            assert mu(x * y) == mu(x) * mu(y)
        x = A.random_element(rng)
        assert mu(pure_tensor(B, x, A.one().in_algebra(A.opposite()))) == x


def test_mult_morphism_needs_commutativity():
    M = builtin_algebra("M2Q")
    with pytest.raises(UnsupportedError):
        mult_morphism(M, M.involutions["transpose"])


def test_json_round_trip():
    A = builtin_algebra("QI")
    B = algebra_from_dict(algebra_to_dict(A))
    assert B.structure_constants() == A.structure_constants()
    assert set(B.involutions) == {"conj", "id"}


def test_json_rejects_bad_constants():
    doc = algebra_to_dict(builtin_algebra("QI"))
    doc["constants"][0][1] = ["1"]
    with pytest.raises(ValidationError) as err:
        algebra_from_dict(doc)
    assert err.value.witness == "constants[0][1]"


def test_json_checks_unit_and_associativity():
    doc = {"field": "Q", "dim": 2, "basis": ["1", "x"], "unit": ["1", "0"],
           "constants": [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]}
    assert algebra_from_dict(doc).is_commutative()  # dual numbers
    with pytest.raises(ValidationError):
        algebra_from_dict(dict(doc, unit=["0", "1"]))
    # e0 e1 = e1 but e1 e0 = 0 and e1 e1 = e0: (e1 e1) e0 = e0 while e1 (e1 e0) = 0
    skew = {"field": "Q", "dim": 2, "basis": ["a", "b"], "unit": ["1", "0"],
            "constants": [[["1", "0"], ["0", "1"]], [["0", "0"], ["1", "0"]]]}
    with pytest.raises(ValidationError):
        algebra_from_dict(skew)


def test_declared_involution_is_checked():
    doc = algebra_to_dict(builtin_algebra("M2Q"))
    doc.pop("involutions")
    doc["involutions"] = {"bad": [["1", "0", "0", "0"], ["0", "0", "0", "1"],
                                  ["0", "0", "1", "0"], ["0", "1", "0", "0"]]}
    with pytest.raises(ValidationError):
        algebra_from_dict(doc)


def test_unknown_builtin():
    with pytest.raises(ValueError):
        builtin_algebra("Z")
