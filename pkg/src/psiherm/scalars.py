"""Exact scalars: the rationals (backed by gmpy2.mpq) and prime fields F_p, p odd.

A :class:`Field` is the descriptor; elements are plain ``mpq`` values for
Q and :class:`Residue` values for F_p.  Both support the usual arithmetic
operators, so the linear algebra above this layer is written once.

Square classes are encoded as integers:

* over F_p the tag is the Legendre symbol (1 square, -1 non-square, 0 zero);
* over Q the tag is the signed squarefree part of x (0 for zero).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

import gmpy2
from gmpy2 import mpq

from .errors import FieldMismatchError, PsihermError

__all__ = [
    "Field",
    "Residue",
    "QQ",
    "GF",
    "parse_field",
    "is_prime",
]


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


class Residue:
    """An element of F_p, stored as its representative in [0, p)."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.p != self.p:
                raise FieldMismatchError(f"F_{self.p} and F_{other.p} elements mixed")
            return other.value
        if isinstance(other, int):
            return other
        raise FieldMismatchError(f"cannot combine F_{self.p} element with {type(other).__name__}")

    def __add__(self, other):
        return Residue(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return Residue(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return Residue(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.p)

    def inverse(self) -> "Residue":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return Residue(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * Residue(self._coerce(other), self.p).inverse()

    def __rtruediv__(self, other):
        return Residue(self._coerce(other), self.p) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Residue(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return (other - self.value) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} mod {self.p}"

    __str__ = __repr__


_FRACTION = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
_RESIDUE = re.compile(r"^\s*([+-]?\d+)\s*mod\s*(\d+)\s*$")


@dataclass(frozen=True)
class Field:
    """Descriptor of the base field: ``Field("Q")`` or ``Field("Fp", p)``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise ValueError("the rationals carry no characteristic")
        elif self.kind == "Fp":
            if self.p is None or not is_prime(self.p) or self.p < 3:
                raise ValueError(f"F_p needs an odd prime p, got {self.p!r}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    # -- construction -----------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.kind == "Q"

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == "Q" else self.p

    @cached_property
    def zero(self):
        return self(0)

    @cached_property
    def one(self):
        return self(1)

    def __call__(self, x):
        """Coerce an int, mpq/Fraction-like, or string into this field."""
        if isinstance(x, str):
            return self.parse(x)
        if self.kind == "Q":
            if isinstance(x, Residue):
                raise FieldMismatchError("F_p element used where a rational is expected")
            return mpq(x)
        if isinstance(x, Residue):
            if x.p != self.p:
                raise FieldMismatchError(f"F_{x.p} element used in F_{self.p}")
            return x
        if isinstance(x, int):
            return Residue(x, self.p)
        q = mpq(x)
        return Residue(int(q.numerator), self.p) / Residue(int(q.denominator), self.p)

    def contains(self, x) -> bool:
        if self.kind == "Q":
            return type(x) is type(mpq(0))
        return isinstance(x, Residue) and x.p == self.p

    def parse(self, text: str):
        """Parse ``"-3/2"``, ``"5"`` or (over F_p) ``"4 mod 7"``."""
        m = _RESIDUE.match(text)
        if m:
            if self.kind != "Fp" or int(m.group(2)) != self.p:
                raise FieldMismatchError(f"{text!r} is not an element of {self}")
            return Residue(int(m.group(1)), self.p)
        m = _FRACTION.match(text)
        if not m:
            raise ValueError(f"not an exact scalar: {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ZeroDivisionError(f"zero denominator in {text!r}")
        if self.kind == "Q":
            return mpq(num, den)
        if den % self.p == 0:
            raise ZeroDivisionError(f"{text!r}: denominator vanishes in F_{self.p}")
        return Residue(num, self.p) / Residue(den, self.p)

    def format(self, x) -> str:
        return str(x)

    def __str__(self):
        return "Q" if self.kind == "Q" else f"Fp:{self.p}"

    # -- the field_ops family, with descriptor checks -----------------------

    def _check(self, *xs):
        for x in xs:
            if not self.contains(x):
                raise FieldMismatchError(f"{x!r} is not an element of {self}")

    def add(self, a, b):
        self._check(a, b)
        return a + b

    def sub(self, a, b):
        self._check(a, b)
        return a - b

    def mul(self, a, b):
        self._check(a, b)
        return a * b

    def neg(self, a):
        self._check(a)
        return -a

    def inv(self, a):
        self._check(a)
        if not a:
            raise ZeroDivisionError("division by zero")
        return 1 / a

    def div(self, a, b):
        self._check(a, b)
        if not b:
            raise ZeroDivisionError("division by zero")
        return a / b

    # -- square classes -----------------------------------------------------

    def square_class(self, x) -> int:
        """Canonical tag of x modulo nonzero squares (see module docstring)."""
        x = self(x)
        if not x:
            return 0
        if self.kind == "Fp":
            return 1 if pow(x.value, (self.p - 1) // 2, self.p) == 1 else -1
        return _signed_squarefree(int(x.numerator) * int(x.denominator))

    def is_square(self, x) -> bool:
        return self.square_class(x) == 1

    def mul_square_classes(self, s: int, t: int) -> int:
        if s == 0 or t == 0:
            return 0
        if self.kind == "Fp":
            return s * t
        return _signed_squarefree(s * t)

    def square_class_label(self, tag: int) -> str:
        if self.kind == "Fp":
            return {0: "zero", 1: "square", -1: "non-square"}[tag]
        return "zero" if tag == 0 else str(tag)

    def nonsquare(self):
        """Smallest positive non-square residue (F_p only)."""
        if self.kind != "Fp":
            raise PsihermError("the rationals have no distinguished non-square")
        return next(self(a) for a in range(2, self.p) if self.square_class(a) == -1)

    # -- sampling -----------------------------------------------------------

    def random(self, rng: random.Random, bound: int = 3):
        """Small random element: integers in [-bound, bound], occasionally halved."""
        if self.kind == "Fp":
            return Residue(rng.randrange(self.p), self.p)
        num = rng.randint(-bound, bound)
        return mpq(num, rng.choice((1, 1, 1, 2)))


QQ = Field("Q")


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field("Fp", p)


def parse_field(text: str) -> Field:
    """Parse the textual descriptor ``"Q"`` or ``"Fp:<prime>"``."""
    text = text.strip()
    if text == "Q":
        return QQ
    m = re.fullmatch(r"Fp:(\d+)", text)
    if not m:
        raise ValueError(f"field descriptor must be 'Q' or 'Fp:<prime>', got {text!r}")
    return GF(int(m.group(1)))


@lru_cache(maxsize=4096)
def _signed_squarefree(n: int) -> int:
    if n == 0:
        return 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    if gmpy2.is_square(n):
        return sign
    from sympy import factorint

    core = 1
    for prime, e in factorint(n).items():
        if e % 2:
            core *= prime
    return sign * core
