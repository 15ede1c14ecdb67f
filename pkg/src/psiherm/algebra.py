"""Finite-dimensional unital associative algebras given by structure constants.

An :class:`Algebra` over a base field k has a basis e_0..e_{d-1} and a
multiplication table ``e_i e_j = sum_l c[i][j][l] e_l``.  The table is
stored sparsely; every constructor runs the exhaustive associativity and
unit checks.  Also here: opposite and tensor algebras, the swap
antiinvolution on A (x) A^op, the multiplication morphism a (x) b -> a*bar(b)
for commutative A, the builtin test family, and small helpers for
matrices whose entries are algebra elements.

Basis of a tensor algebra A (x) A' is row-major: e_i (x) e'_j has index
``i * dim(A') + j``.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Sequence

from .errors import RingMismatchError, UnsupportedError, ValidationError
from .linalg import nullspace
from .scalars import QQ, GF, Field, parse_field


class Algebra:
    """A unital associative k-algebra with an explicit basis.

    Use :func:`algebra_from_structure_constants` or one of the builtin
    constructors rather than calling this directly.
    """

    def __init__(self, field: Field, basis: Sequence[str], table, unit: Sequence, name: str = "",
                 factors: tuple | None = None):
        self.field = field
        self.basis = tuple(basis)
        self.dim = len(self.basis)
        # table[i][j] is a tuple of (l, c) with c != 0
        self.table = tuple(tuple(tuple(cell) for cell in row) for row in table)
        self.unit = tuple(field(u) for u in unit)
        self.name = name or f"<{self.dim}-dim algebra over {field}>"
        self.factors = factors
        self.involutions: dict[str, Antiinvolution] = {}
        self._opposite: Algebra | None = None
        self.key = (field, self.table, self.unit)
        self._hash = hash(self.key)
        self._commutative: bool | None = None

    # -- identity -----------------------------------------------------------

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Algebra) or self._hash != other._hash:
            return False
        return self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Algebra({self.name}, dim={self.dim}, field={self.field})"

    # -- elements -----------------------------------------------------------

    def element(self, coords: Iterable) -> "AlgebraElement":
        c = tuple(self.field(x) for x in coords)
        if len(c) != self.dim:
            raise ValueError(f"{self.name} has dimension {self.dim}, got {len(c)} coordinates")
        return AlgebraElement(self, c)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, (self.field.zero,) * self.dim)

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, self.unit)

    def scalar(self, x) -> "AlgebraElement":
        x = self.field(x)
        return AlgebraElement(self, tuple(x * u for u in self.unit))

    def basis_element(self, i: int) -> "AlgebraElement":
        k = self.field
        return AlgebraElement(self, tuple(k.one if j == i else k.zero for j in range(self.dim)))

    def basis_elements(self) -> list["AlgebraElement"]:
        return [self.basis_element(i) for i in range(self.dim)]

    def random_element(self, rng, bound: int = 3) -> "AlgebraElement":
        return AlgebraElement(self, tuple(self.field.random(rng, bound) for _ in range(self.dim)))

    def mul_coords(self, x: Sequence, y: Sequence) -> tuple:
        z = [self.field.zero] * self.dim
        ys = [(t, b) for t, b in enumerate(y) if b]
        if not ys:
            return tuple(z)
        table = self.table
        for s, a in enumerate(x):
            if not a:
                continue
            row = table[s]
            for t, b in ys:
                cell = row[t]
                if cell:
                    ab = a * b
                    for u, c in cell:
                        z[u] += ab * c
        return tuple(z)

    def left_matrix(self, x: Sequence) -> list[list]:
        """Matrix of y -> x*y in the basis (columns indexed by y's basis vector)."""
        cols = [self.mul_coords(x, self.basis_element(s).c) for s in range(self.dim)]
        return [[cols[s][r] for s in range(self.dim)] for r in range(self.dim)]

    def structure_constants(self) -> list:
        k = self.field
        out = [[[k.zero] * self.dim for _ in range(self.dim)] for _ in range(self.dim)]
        for i, j in product(range(self.dim), repeat=2):
            for l, c in self.table[i][j]:
                out[i][j][l] = c
        return out

    # -- structure ----------------------------------------------------------

    def is_commutative(self) -> bool:
        if self._commutative is None:
            self._commutative = all(
                self.table[i][j] == self.table[j][i]
                for i in range(self.dim) for j in range(i + 1, self.dim)
            )
        return self._commutative

    def opposite(self) -> "Algebra":
        """A^op: same space, c_op[i][j] = c[j][i].  A^op^op is A itself."""
        if self._opposite is None:
            if self.is_commutative():
                self._opposite = self
            else:
                table = [[self.table[j][i] for j in range(self.dim)] for i in range(self.dim)]
                op = Algebra(self.field, self.basis, table, self.unit, name=f"{self.name}^op")
                op._opposite = self
                for nm, inv in self.involutions.items():
                    op.involutions[nm] = Antiinvolution(op, inv.matrix)
                self._opposite = op
        return self._opposite

    def validate(self) -> None:
        """Exhaustive associativity and unit checks; raises with a witness."""
        basis = self.basis_elements()
        one = self.unit
        for i in range(self.dim):
            e = basis[i].c
            if self.mul_coords(one, e) != e or self.mul_coords(e, one) != e:
                raise ValidationError(f"unit law fails on basis element {self.basis[i]}", witness=(i,))
        prods = [[self.mul_coords(basis[i].c, basis[j].c) for j in range(self.dim)] for i in range(self.dim)]
        for i, j, l in product(range(self.dim), repeat=3):
            left = self.mul_coords(prods[i][j], basis[l].c)
            right = self.mul_coords(basis[i].c, prods[j][l])
            if left != right:
                raise ValidationError(
                    f"associativity fails on ({self.basis[i]}, {self.basis[j]}, {self.basis[l]})",
                    witness=(i, j, l),
                )


class AlgebraElement:
    __slots__ = ("algebra", "c")

    def __init__(self, algebra: Algebra, coords: tuple):
        self.algebra = algebra
        self.c = coords

    def _same(self, other: "AlgebraElement") -> None:
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise RingMismatchError(f"{self.algebra.name} and {other.algebra.name} elements mixed")

    def __add__(self, other):
        self._same(other)
        return AlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other):
        self._same(other)
        return AlgebraElement(self.algebra, tuple(a - b for a, b in zip(self.c, other.c)))

    def __neg__(self):
        return AlgebraElement(self.algebra, tuple(-a for a in self.c))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._same(other)
            return AlgebraElement(self.algebra, self.algebra.mul_coords(self.c, other.c))
        s = self.algebra.field(other)
        return AlgebraElement(self.algebra, tuple(a * s for a in self.c))

    def __rmul__(self, other):
        s = self.algebra.field(other)
        return AlgebraElement(self.algebra, tuple(s * a for a in self.c))

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.c == other.c and (self.algebra is other.algebra or self.algebra == other.algebra)
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def in_algebra(self, target: Algebra) -> "AlgebraElement":
        """Same coordinates read in another algebra on the same space (e.g. A^op)."""
        if target.dim != self.algebra.dim or target.field != self.algebra.field:
            raise RingMismatchError("coordinate spaces differ")
        return AlgebraElement(target, self.c)

    def coords_str(self) -> list[str]:
        return [self.algebra.field.format(a) for a in self.c]

    def __repr__(self):
        terms = []
        for a, lab in zip(self.c, self.algebra.basis):
            if a:
                terms.append(f"{a}*{lab}")
        return " + ".join(terms) if terms else "0"


class Antiinvolution:
    """A k-linear T on an algebra with T^2 = id, T(xy) = T(y)T(x), T(1) = 1.

    ``matrix[r][s]`` is the e_r coordinate of T(e_s).  On a commutative
    algebra this is the same thing as an involution.
    """

    def __init__(self, algebra: Algebra, matrix, name: str = "", validate: bool = True):
        self.algebra = algebra
        self.matrix = tuple(tuple(algebra.field(x) for x in row) for row in matrix)
        self.name = name
        self._cols = tuple(tuple(self.matrix[r][s] for r in range(algebra.dim)) for s in range(algebra.dim))
        if validate:
            self.validate()

    def apply_coords(self, x: Sequence) -> tuple:
        k = self.algebra.field
        z = [k.zero] * self.algebra.dim
        for s, a in enumerate(x):
            if a:
                for r, t in enumerate(self._cols[s]):
                    if t:
                        z[r] += a * t
        return tuple(z)

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.apply_coords(x.c))

    def is_identity(self) -> bool:
        d = self.algebra.dim
        return all(self.matrix[r][s] == (1 if r == s else 0) for r in range(d) for s in range(d))

    def fixed_dimension(self) -> int:
        """k-dimension of the fixed subalgebra {x : T(x) = x}."""
        k = self.algebra.field
        d = self.algebra.dim
        M = [[self.matrix[r][s] - (k.one if r == s else k.zero) for s in range(d)] for r in range(d)]
        return len(nullspace(k, M, d))

    def validate(self) -> None:
        A = self.algebra
        basis = A.basis_elements()
        for s in range(A.dim):
            if self.apply_coords(self.apply_coords(basis[s].c)) != basis[s].c:
                raise ValidationError(f"T^2 != id on {A.basis[s]}", witness=(s,))
        if self.apply_coords(A.unit) != A.unit:
            raise ValidationError("T(1) != 1", witness=())
        images = [self.apply_coords(b.c) for b in basis]
        for i, j in product(range(A.dim), repeat=2):
            lhs = self.apply_coords(A.mul_coords(basis[i].c, basis[j].c))
            rhs = A.mul_coords(images[j], images[i])
            if lhs != rhs:
                raise ValidationError(
                    f"T(xy) != T(y)T(x) for x={A.basis[i]}, y={A.basis[j]}", witness=(i, j))

    def __repr__(self):
        return f"Antiinvolution({self.name or '?'} on {self.algebra.name})"


class AlgebraMorphism:
    """k-linear map between algebras; ``matrix[r][s]`` = e_r-coordinate of f(e_s)."""

    def __init__(self, source: Algebra, target: Algebra, matrix, validate: bool = True):
        if source.field != target.field:
            raise RingMismatchError("morphism between algebras over different fields")
        self.source = source
        self.target = target
        self.matrix = tuple(tuple(target.field(x) for x in row) for row in matrix)
        self._cols = tuple(tuple(self.matrix[r][s] for r in range(target.dim)) for s in range(source.dim))
        self.sigma: Antiinvolution | None = None
        if validate:
            self.validate()

    def apply_coords(self, x: Sequence) -> tuple:
        k = self.target.field
        z = [k.zero] * self.target.dim
        for s, a in enumerate(x):
            if a:
                for r, t in enumerate(self._cols[s]):
                    if t:
                        z[r] += a * t
        return tuple(z)

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        if x.algebra is not self.source and x.algebra != self.source:
            raise RingMismatchError("element is not in the morphism's source")
        return AlgebraElement(self.target, self.apply_coords(x.c))

    def validate(self) -> None:
        S, T = self.source, self.target
        if self.apply_coords(S.unit) != T.unit:
            raise ValidationError("morphism does not preserve the unit", witness=())
        basis = S.basis_elements()
        images = [self.apply_coords(b.c) for b in basis]
        for i, j in product(range(S.dim), repeat=2):
            if self.apply_coords(S.mul_coords(basis[i].c, basis[j].c)) != T.mul_coords(images[i], images[j]):
                raise ValidationError(
                    f"morphism not multiplicative on ({S.basis[i]}, {S.basis[j]})", witness=(i, j))

    def intertwines(self, source_bar: Antiinvolution, target_bar: Antiinvolution) -> tuple | None:
        """None when f(bar_S(x)) = bar_T(f(x)) on every basis vector, else the witness index."""
        for s in range(self.source.dim):
            e = self.source.basis_element(s).c
            if self.apply_coords(source_bar.apply_coords(e)) != target_bar.apply_coords(self.apply_coords(e)):
                return (s,)
        return None


# -- constructors -------------------------------------------------------------


def algebra_from_structure_constants(field: Field, basis_labels: Sequence[str], constants, unit,
                                     name: str = "") -> Algebra:
    d = len(basis_labels)
    if len(constants) != d or any(len(row) != d for row in constants) or any(
            len(cell) != d for row in constants for cell in row):
        raise ValidationError(f"structure constants must be a {d}x{d}x{d} array", witness="shape")
    if len(unit) != d:
        raise ValidationError(f"unit must have {d} coordinates", witness="shape")
    table = []
    for i in range(d):
        row = []
        for j in range(d):
            row.append(tuple((l, field(c)) for l, c in enumerate(constants[i][j]) if field(c)))
        table.append(row)
    A = Algebra(field, basis_labels, table, unit, name=name)
    A.validate()
    return A


def _from_rule(field: Field, labels: Sequence[str], rule: Callable[[int, int], dict], unit_index: int,
               name: str) -> Algebra:
    d = len(labels)
    table = [[tuple((l, field(c)) for l, c in sorted(rule(i, j).items()) if c) for j in range(d)]
             for i in range(d)]
    unit = [field.one if i == unit_index else field.zero for i in range(d)]
    A = Algebra(field, labels, table, unit, name=name)
    A.validate()
    return A


def _identity_matrix(field: Field, d: int):
    return [[field.one if r == s else field.zero for s in range(d)] for r in range(d)]


def _permutation_matrix(field: Field, perm: Sequence[int], signs: Sequence | None = None):
    d = len(perm)
    M = [[field.zero] * d for _ in range(d)]
    for s, r in enumerate(perm):
        M[r][s] = field(signs[s]) if signs else field.one
    return M


def field_algebra(k: Field) -> Algebra:
    A = _from_rule(k, ["1"], lambda i, j: {0: 1}, 0, name=str(k))
    A.involutions["id"] = Antiinvolution(A, _identity_matrix(k, 1), "id")
    return A


def matrix_algebra(k: Field, n: int) -> Algebra:
    if not 1 <= n <= 4:
        raise UnsupportedError(f"matrix_algebra supports 1 <= n <= 4, got {n}")
    labels = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]

    def rule(a, b):
        i, j = divmod(a, n)
        kk, l = divmod(b, n)
        return {i * n + l: 1} if j == kk else {}

    table = [[tuple((l, k(c)) for l, c in rule(a, b).items()) for b in range(n * n)] for a in range(n * n)]
    unit = [k.one if a // n == a % n else k.zero for a in range(n * n)]
    A = Algebra(k, labels, table, unit, name=f"M{n}({k})")
    A.validate()
    A.involutions["transpose"] = Antiinvolution(
        A, _permutation_matrix(k, [(a % n) * n + a // n for a in range(n * n)]), "transpose")
    return A


def group_algebra(k: Field, m: int) -> Algebra:
    if not 1 <= m <= 6:
        raise UnsupportedError(f"group_algebra supports cyclic groups of order 1..6, got {m}")
    labels = [f"g^{i}" for i in range(m)]
    A = _from_rule(k, labels, lambda i, j: {(i + j) % m: 1}, 0, name=f"{k}[C{m}]")
    A.involutions["id"] = Antiinvolution(A, _identity_matrix(k, m), "id")
    if m > 2:
        A.involutions["inverse"] = Antiinvolution(A, _permutation_matrix(k, [(-i) % m for i in range(m)]),
                                                  "inverse")
    return A


def gaussian_rationals() -> Algebra:
    """Q[x]/(x^2+1) with basis (1, x) and the conjugation x -> -x declared."""
    A = _from_rule(QQ, ["1", "x"], lambda i, j: {0: -1} if i == j == 1 else {i + j: 1}, 0,
                   name="Q[x]/(x^2+1)")
    A.involutions["id"] = Antiinvolution(A, _identity_matrix(QQ, 2), "id")
    A.involutions["conj"] = Antiinvolution(A, [[1, 0], [0, -1]], "conj")
    return A


def product_algebra(A: Algebra, A2: Algebra) -> Algebra:
    if A.field != A2.field:
        raise RingMismatchError("product of algebras over different fields")
    d, d2 = A.dim, A2.dim
    labels = [f"({lab},0)" for lab in A.basis] + [f"(0,{lab})" for lab in A2.basis]
    table = []
    for i in range(d + d2):
        row = []
        for j in range(d + d2):
            if i < d and j < d:
                row.append(A.table[i][j])
            elif i >= d and j >= d:
                row.append(tuple((l + d, c) for l, c in A2.table[i - d][j - d]))
            else:
                row.append(())
        table.append(row)
    P = Algebra(A.field, labels, table, A.unit + A2.unit, name=f"{A.name}x{A2.name}")
    P.validate()
    k = A.field
    for nm, inv in A.involutions.items():
        if nm in A2.involutions:
            M = [[k.zero] * (d + d2) for _ in range(d + d2)]
            for r in range(d):
                for s in range(d):
                    M[r][s] = inv.matrix[r][s]
            for r in range(d2):
                for s in range(d2):
                    M[d + r][d + s] = A2.involutions[nm].matrix[r][s]
            P.involutions[nm] = Antiinvolution(P, M, nm)
    if A == A2:
        P.involutions["swap"] = Antiinvolution(
            P, _permutation_matrix(k, [(s + d) % (2 * d) for s in range(2 * d)]), "swap")
    return P


_BUILTIN = re.compile(r"^(?:(Q)|F(\d+)|M(\d)(Q|F\d+)|(Q|F\d+)C(\d)|(QI)|(Q|F\d+)x(Q|F\d+))$")


def _base_field(token: str) -> Field:
    return QQ if token == "Q" else GF(int(token[1:]))


@lru_cache(maxsize=None)
def builtin_algebra(name: str) -> Algebra:
    """Builtin family addressed by name.

    ``Q``, ``F<p>``, ``M<n>Q`` / ``M<n>F<p>`` (n <= 4), ``QC<m>`` /
    ``F<p>C<m>`` (cyclic group algebras, m <= 6), ``QI`` (Q[x]/(x^2+1)) and
    products such as ``QxQ``.
    """
    m = _BUILTIN.match(name)
    if not m:
        raise UnsupportedError(f"unknown builtin algebra {name!r}")
    try:
        if m.group(1):
            return field_algebra(QQ)
        if m.group(2):
            return field_algebra(GF(int(m.group(2))))
        if m.group(3):
            return matrix_algebra(_base_field(m.group(4)), int(m.group(3)))
        if m.group(5):
            return group_algebra(_base_field(m.group(5)), int(m.group(6)))
        if m.group(7):
            return gaussian_rationals()
        return product_algebra(builtin_algebra(m.group(8)), builtin_algebra(m.group(9)))
    except ValueError as exc:
        if isinstance(exc, UnsupportedError):
            raise
        raise UnsupportedError(f"builtin {name!r}: {exc}") from exc


BUILTIN_FAMILY = ("Q", "F5", "F7", "M2Q", "QC3", "QI", "QxQ")


# -- tensor products and the enveloping ring B = A (x) A^op --------------------


@lru_cache(maxsize=None)
def tensor_algebra(A: Algebra, A2: Algebra) -> Algebra:
    if A.field != A2.field:
        raise RingMismatchError("tensor product of algebras over different fields")
    d, d2 = A.dim, A2.dim
    labels = [f"{a}⊗{b}" for a in A.basis for b in A2.basis]
    table = []
    for i, j in product(range(d), range(d2)):
        row = []
        for kk, l in product(range(d), range(d2)):
            cell: dict = {}
            for u, c in A.table[i][kk]:
                for v, c2 in A2.table[j][l]:
                    idx = u * d2 + v
                    cell[idx] = cell.get(idx, 0) + c * c2
            row.append(tuple((idx, c) for idx, c in sorted(cell.items()) if c))
        table.append(row)
    unit = [a * b for a in A.unit for b in A2.unit]
    T = Algebra(A.field, labels, table, unit, name=f"{A.name}⊗{A2.name}", factors=(A, A2))
    T.validate()
    return T


def swap_antiinvolution(A: Algebra) -> Antiinvolution:
    """a (x) b -> b (x) a on B = A (x) A^op."""
    B = envelope(A)
    return B.involutions["swap"]


@lru_cache(maxsize=None)
def envelope(A: Algebra) -> Algebra:
    """B = A (x)_k A^op carrying the factor-swapping antiinvolution as ``"swap"``."""
    B = tensor_algebra(A, A.opposite())
    if "swap" not in B.involutions:
        d = A.dim
        perm = [(s % d) * d + s // d for s in range(d * d)]
        B.involutions["swap"] = Antiinvolution(B, _permutation_matrix(A.field, perm), "swap")
    return B


def pure_tensor(T: Algebra, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """a (x) b in the tensor algebra T = A (x) A2; b may be given in A2 or on its space."""
    A, A2 = T.factors
    if a.algebra.dim != A.dim or b.algebra.dim != A2.dim:
        raise RingMismatchError("pure tensor factors have the wrong dimensions")
    return AlgebraElement(T, tuple(x * y for x in a.c for y in b.c))


def mult_morphism(A: Algebra, sigma: Antiinvolution) -> AlgebraMorphism:
    """The homomorphism B = A (x) A^op -> A, a (x) b -> a * sigma(b) (A commutative)."""
    if not A.is_commutative():
        raise UnsupportedError(f"{A.name} is not commutative; a (x) b -> a*bar(b) is not multiplicative")
    if sigma.algebra != A:
        raise RingMismatchError("involution lives on a different algebra")
    B = envelope(A)
    d = A.dim
    cols = []
    for r, s in product(range(d), repeat=2):
        cols.append(A.mul_coords(A.basis_element(r).c, sigma.apply_coords(A.basis_element(s).c)))
    matrix = [[cols[c][r] for c in range(d * d)] for r in range(d)]
    mu = AlgebraMorphism(B, A, matrix)
    witness = mu.intertwines(B.involutions["swap"], sigma)
    if witness is not None:
        raise ValidationError("mult_morphism does not intertwine swap and sigma", witness=witness)
    mu.sigma = sigma
    return mu


# -- JSON algebra files ----------------------------------------------------


def algebra_from_dict(doc: dict) -> Algebra:
    """Build an algebra from an algebra JSON document (see README)."""
    for key in ("field", "dim", "basis", "constants", "unit"):
        if key not in doc:
            raise ValidationError(f"algebra file is missing field {key!r}", witness=key)
    field = parse_field(doc["field"])
    d = doc["dim"]
    if not isinstance(d, int) or d < 1:
        raise ValidationError("dim must be a positive integer", witness="dim")
    basis = doc["basis"]
    if len(basis) != d:
        raise ValidationError(f"basis has {len(basis)} labels, dim is {d}", witness="basis")

    def scalar(x, where):
        if not isinstance(x, (str, int)):
            raise ValidationError(f"{where}: scalars must be strings like \"-1/2\"", witness=where)
        try:
            return field(str(x))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"{where}: {exc}", witness=where) from exc

    constants = doc["constants"]
    if not isinstance(constants, list) or len(constants) != d:
        raise ValidationError(f"constants must be a {d}x{d}x{d} array", witness="constants")
    parsed = []
    for i, row in enumerate(constants):
        if not isinstance(row, list) or len(row) != d:
            raise ValidationError(f"constants[{i}] must have {d} entries", witness=f"constants[{i}]")
        prow = []
        for j, cell in enumerate(row):
            if not isinstance(cell, list) or len(cell) != d:
                raise ValidationError(f"constants[{i}][{j}] must have {d} entries",
                                      witness=f"constants[{i}][{j}]")
            prow.append([scalar(x, f"constants[{i}][{j}][{l}]") for l, x in enumerate(cell)])
        parsed.append(prow)
    if not isinstance(doc["unit"], list) or len(doc["unit"]) != d:
        raise ValidationError(f"unit must have {d} entries", witness="unit")
    unit = [scalar(x, f"unit[{i}]") for i, x in enumerate(doc["unit"])]
    A = algebra_from_structure_constants(field, basis, parsed, unit, name=doc.get("name", ""))
    declared = dict(doc.get("involutions", {}))
    if "involution" in doc:
        declared[doc.get("involution_name", "declared")] = doc["involution"]
    for nm, rows in declared.items():
        where = f"involutions.{nm}"
        if not isinstance(rows, list) or len(rows) != d or any(not isinstance(r, list) or len(r) != d for r in rows):
            raise ValidationError(f"{where} must be a {d}x{d} matrix", witness=where)
        M = [[scalar(x, f"{where}[{r}][{s}]") for s, x in enumerate(row)] for r, row in enumerate(rows)]
        A.involutions[nm] = Antiinvolution(A, M, nm)
    if A.is_commutative() and "id" not in A.involutions:
        A.involutions["id"] = Antiinvolution(A, _identity_matrix(field, d), "id")
    return A


def algebra_to_dict(A: Algebra) -> dict:
    doc = {
        "field": str(A.field),
        "dim": A.dim,
        "basis": list(A.basis),
        "constants": [[[A.field.format(c) for c in cell] for cell in row] for row in A.structure_constants()],
        "unit": [A.field.format(u) for u in A.unit],
        "name": A.name,
    }
    if A.involutions:
        doc["involutions"] = {nm: [[A.field.format(x) for x in row] for row in inv.matrix]
                              for nm, inv in sorted(A.involutions.items())}
    return doc


# -- matrices over an algebra ---------------------------------------------------


def mat_zero(R: Algebra, m: int, n: int) -> list:
    z = R.zero()
    return [[z] * n for _ in range(m)]


def mat_identity(R: Algebra, n: int) -> list:
    z, o = R.zero(), R.one()
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def mat_mul(R: Algebra, X, Y) -> list:
    m = len(X)
    inner = len(Y)
    n = len(Y[0]) if Y else 0
    zero = (R.field.zero,) * R.dim
    mul = R.mul_coords
    out = []
    for i in range(m):
        acc = [list(zero) for _ in range(n)]
        touched = [False] * n
        row = X[i]
        for k in range(inner):
            a = row[k]
            if not a:
                continue
            yk = Y[k]
            for j in range(n):
                b = yk[j]
                if not b:
                    continue
                p = mul(a.c, b.c)
                tgt = acc[j]
                for t, v in enumerate(p):
                    if v:
                        tgt[t] += v
                touched[j] = True
        out.append([AlgebraElement(R, tuple(acc[j])) if touched[j] else AlgebraElement(R, zero)
                    for j in range(n)])
    return out


def mat_add(X, Y) -> list:
    return [[a + b for a, b in zip(rx, ry)] for rx, ry in zip(X, Y)]


def mat_sub(X, Y) -> list:
    return [[a - b for a, b in zip(rx, ry)] for rx, ry in zip(X, Y)]


def mat_map(f: Callable, X) -> list:
    return [[f(a) for a in row] for row in X]


def bar_transpose(bar: Antiinvolution, X) -> list:
    """Entrywise bar of the transpose: out[j][i] = bar(X[i][j])."""
    if not X:
        return []
    return [[bar(X[i][j]) for i in range(len(X))] for j in range(len(X[0]))]


def transpose_into(R: Algebra, X) -> list:
    """Transpose with every entry re-read in R (used for A -> A^op)."""
    if not X:
        return []
    return [[X[i][j].in_algebra(R) for i in range(len(X))] for j in range(len(X[0]))]


def mat_equal(X, Y) -> tuple | None:
    """None if X == Y entrywise, else the first differing (i, j)."""
    if len(X) != len(Y):
        return ("shape",)
    for i, (rx, ry) in enumerate(zip(X, Y)):
        if len(rx) != len(ry):
            return ("shape",)
        for j, (a, b) in enumerate(zip(rx, ry)):
            if a.c != b.c:
                return (i, j)
    return None


def block_diag(R: Algebra, *blocks) -> list:
    n = sum(len(b) for b in blocks)
    out = mat_zero(R, n, n)
    out = [list(row) for row in out]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def realize(R: Algebra, X) -> list[dict]:
    """k-linear realization of v -> X v on column vectors, as sparse rows.

    Row ``i*d + r`` and column ``j*d + s``: the e_r coordinate of X[i][j]*e_s.
    """
    d = R.dim
    m = len(X)
    n = len(X[0]) if X else 0
    rows = [dict() for _ in range(m * d)]
    basis = [R.basis_element(s).c for s in range(d)]
    for i in range(m):
        for j in range(n):
            a = X[i][j]
            if not a:
                continue
            for s in range(d):
                col = R.mul_coords(a.c, basis[s])
                for r, v in enumerate(col):
                    if v:
                        rows[i * d + r][j * d + s] = v
    return rows


def vector_from_coords(R: Algebra, coords: Sequence) -> list[AlgebraElement]:
    d = R.dim
    return [AlgebraElement(R, tuple(coords[i * d:(i + 1) * d])) for i in range(len(coords) // d)]


def vector_coords(v: Sequence[AlgebraElement]) -> list:
    return [x for a in v for x in a.c]
