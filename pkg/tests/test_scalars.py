from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from psiherm.errors import FieldMismatchError
from psiherm.scalars import GF, QQ, Residue, is_prime, parse_field

PRIMES = [3, 5, 7, 11, 13]


def squarefree_oracle(n: int) -> int:
    """Signed squarefree part by trial division."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    out, d = 1, 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
        if n % d == 0:
            out *= d
            n //= d
        d += 1
    return sign * out * n


def test_parse_and_format():
    assert QQ.parse("-3/2") == mpq(-3, 2)
    assert QQ.format(QQ("-3/2")) == "-3/2"
    F7 = GF(7)
    assert F7.parse("4 mod 7") == 4
    assert F7.format(F7(-3)) == "4 mod 7"
    assert F7.parse("1/2") == 4
    assert parse_field("Fp:5") == GF(5)
    assert str(parse_field("Q")) == "Q"


@pytest.mark.parametrize("bad", ["x", "1/0", "", "3 mod"])
def test_parse_rejects(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        QQ.parse(bad)


def test_field_descriptor_checks():
    with pytest.raises(ValueError):
        GF(9)
    with pytest.raises(ValueError):
        GF(2)
    with pytest.raises(FieldMismatchError):
        GF(5).parse("4 mod 7")
    with pytest.raises(FieldMismatchError):
        GF(5)(1) + GF(7)(1)
    with pytest.raises(FieldMismatchError):
        QQ.add(QQ(1), GF(5)(1))
    with pytest.raises(FieldMismatchError):
        QQ(GF(5)(2))


@given(st.sampled_from(PRIMES), st.integers(-50, 50), st.integers(-50, 50))
def test_residue_matches_integer_arithmetic(p, a, b):
    x, y = Residue(a, p), Residue(b, p)
    assert (x + y).value == (a + b) % p
    assert (x - y).value == (a - b) % p
    assert (x * y).value == (a * b) % p
    if b % p:
        assert ((x / y) * y) == x


@pytest.mark.parametrize("p", PRIMES)
def test_square_class_fp_brute_force(p):
    F = GF(p)
    squares = {(x * x) % p for x in range(1, p)}
    for a in range(p):
        tag = F.square_class(a)
        assert tag == (0 if a == 0 else 1 if a in squares else -1)


def test_minus_one_mod_7_is_a_nonsquare():
    assert GF(7).square_class(-1) == -1
    assert GF(5).square_class(-1) == 1
    assert GF(7).nonsquare() == 3


@given(st.integers(-2000, 2000).filter(bool), st.integers(1, 300))
def test_square_class_q_oracle(num, den):
    q = mpq(num, den)
    assert QQ.square_class(q) == squarefree_oracle(int(q.numerator) * int(q.denominator))


@given(st.integers(-500, 500).filter(bool), st.integers(-500, 500).filter(bool))
def test_square_classes_multiply(a, b):
    assert QQ.mul_square_classes(QQ.square_class(a), QQ.square_class(b)) == QQ.square_class(a * b)
    F = GF(11)
    assert F.mul_square_classes(F.square_class(a), F.square_class(b)) == F.square_class(a * b)


def test_square_class_of_squares_and_zero():
    assert QQ.square_class(Fraction(9, 4)) == 1
    assert QQ.square_class(-8) == -2
    assert QQ.square_class(0) == 0


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
