"""Finitely generated projective right modules via idempotent presentations.

A module E over a ring R is ``e R^n`` for an idempotent n x n matrix e over
R.  Elements are column vectors v with e v = v; R acts on the right,
entrywise.  Module maps are matrices acting on the left.

Left A-modules (duals) are represented as right A^op-modules.  For
E = e A^n the dual is presented by the transpose of e, read in A^op, and
a functional f acts by eval(f, x) = sum_i f_i x_i.

For P over A^op and Q over A, the k-tensor product P (x)_k Q is a right
module over B = A (x) A^op.  Its generator u_ij = eps_i (x) e_j is the
pure tensor of the i-th dual basis vector and the j-th basis vector, and
the component (dual coordinate a, direct coordinate c) of slot (i, j) is
the B-element c (x) a.  Under this dictionary the product rule
(f (x) y)(lambda (x) mu) = mu f (x) y lambda is plain right multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Sequence

from .algebra import (
    Algebra,
    AlgebraElement,
    AlgebraMorphism,
    Antiinvolution,
    block_diag,
    envelope,
    mat_add,
    mat_equal,
    mat_identity,
    mat_mul,
    mat_sub,
    mat_zero,
    pure_tensor,
    realize,
    transpose_into,
    vector_from_coords,
)
from .errors import RingMismatchError, UnsupportedError, ValidationError
from .linalg import column_basis, echelon, inverse as k_inverse


class Module:
    """The right R-module e R^n.  Build with :func:`free_module` or :func:`projective_module`."""

    def __init__(self, ring: Algebra, idempotent, free: bool = False, labels: Sequence[str] | None = None):
        self.ring = ring
        self.idempotent = [list(row) for row in idempotent]
        self.rank = len(self.idempotent)
        self.is_free = free
        self.labels = list(labels) if labels is not None else None
        self.tensor_factors: tuple | None = None
        self._kdim: int | None = None

    def __repr__(self):
        kind = "free" if self.is_free else "projective"
        return f"Module({kind}, ambient rank {self.rank} over {self.ring.name})"

    # -- elements -------------------------------------------------------------

    def project(self, v: Sequence[AlgebraElement]) -> list[AlgebraElement]:
        if self.is_free:
            return list(v)
        return [row[0] for row in mat_mul(self.ring, self.idempotent, [[x] for x in v])]

    def element(self, vector: Sequence[AlgebraElement]) -> "ModuleElement":
        return ModuleElement(self, list(vector))

    def random_vector(self, rng, bound: int = 3) -> list[AlgebraElement]:
        return self.project([self.ring.random_element(rng, bound) for _ in range(self.rank)])

    def zero_vector(self) -> list[AlgebraElement]:
        return [self.ring.zero()] * self.rank

    def generator(self, i: int) -> list[AlgebraElement]:
        """e applied to the i-th standard basis column."""
        return [self.idempotent[r][i] for r in range(self.rank)]

    # -- k-linear structure --------------------------------------------------

    def k_dimension(self) -> int:
        if self._kdim is None:
            if self.is_free:
                self._kdim = self.rank * self.ring.dim
            else:
                self._kdim = len(echelon(self.ring.field, realize(self.ring, self.idempotent))[1])
        return self._kdim

    def k_basis(self) -> list[list[AlgebraElement]]:
        """Vectors forming a k-basis of the summand."""
        R = self.ring
        d = R.dim
        n = self.rank * d
        if self.is_free:
            cols = range(n)
            return [vector_from_coords(R, [R.field.one if t == c else R.field.zero for t in range(n)])
                    for c in cols]
        rows = realize(R, self.idempotent)
        dense = [[rows[r].get(c, R.field.zero) for c in range(n)] for r in range(n)]
        picked = column_basis(R.field, dense)
        return [vector_from_coords(R, [dense[r][c] for r in range(n)]) for c in picked]


@dataclass
class ModuleElement:
    module: Module
    vector: list = dc_field(default_factory=list)

    def __post_init__(self):
        if len(self.vector) != self.module.rank:
            raise ValidationError("vector length differs from the ambient rank", witness=len(self.vector))
        if not self.module.is_free:
            proj = self.module.project(self.vector)
            for i, (a, b) in enumerate(zip(proj, self.vector)):
                if a != b:
                    raise ValidationError("vector is not in the summand (e v != v)", witness=i)

    def act(self, r: AlgebraElement) -> "ModuleElement":
        return ModuleElement(self.module, right_act(self.vector, r))


def right_act(v: Sequence[AlgebraElement], r: AlgebraElement) -> list[AlgebraElement]:
    return [x * r for x in v]


def vec_add(u, v):
    return [a + b for a, b in zip(u, v)]


def _is_idempotent(R: Algebra, e) -> tuple | None:
    return mat_equal(mat_mul(R, e, e), e)


def free_module(R: Algebra, n: int) -> Module:
    return Module(R, mat_identity(R, n), free=True)


def projective_module(R: Algebra, n: int, e) -> Module:
    e = [[x if isinstance(x, AlgebraElement) else R.element(x) for x in row] for row in e]
    if len(e) != n or any(len(row) != n for row in e):
        raise ValidationError(f"idempotent must be {n}x{n}", witness="shape")
    for row in e:
        for x in row:
            if x.algebra != R:
                raise RingMismatchError("idempotent entries lie outside the ring")
    witness = _is_idempotent(R, e)
    if witness is not None:
        raise ValidationError(f"e*e != e at entry {witness}", witness=witness)
    free = mat_equal(e, mat_identity(R, n)) is None
    return Module(R, e, free=free)


def zero_module(R: Algebra) -> Module:
    return Module(R, [], free=True)


def complement(E: Module) -> Module:
    """(1 - e) R^n, so that E (+) complement(E) is free of rank n."""
    R = E.ring
    return Module(R, mat_sub(mat_identity(R, E.rank), E.idempotent), free=E.rank == 0)


def k_dimension(E: Module) -> int:
    return E.k_dimension()


def direct_sum(E: Module, F: Module) -> Module:
    if E.ring != F.ring:
        raise RingMismatchError("direct sum of modules over different rings")
    S = Module(E.ring, block_diag(E.ring, E.idempotent, F.idempotent), free=E.is_free and F.is_free)
    if E.labels is not None and F.labels is not None:
        S.labels = E.labels + F.labels
    return S


class ModuleMap:
    """R-linear map source -> target given by a matrix with e_t M e_s = M."""

    def __init__(self, source: Module, target: Module, matrix, validate: bool = True):
        if source.ring != target.ring:
            raise RingMismatchError("module map between modules over different rings")
        self.source = source
        self.target = target
        self.matrix = [list(row) for row in matrix]
        if validate:
            if len(self.matrix) != target.rank or any(len(r) != source.rank for r in self.matrix):
                raise ValidationError("map matrix has the wrong shape", witness="shape")
            R = source.ring
            M = self.matrix
            if not target.is_free:
                M = mat_mul(R, target.idempotent, M)
            if not source.is_free:
                M = mat_mul(R, M, source.idempotent)
            witness = mat_equal(M, self.matrix)
            if witness is not None:
                raise ValidationError(f"e_t M e_s != M at {witness}", witness=witness)

    @classmethod
    def from_ambient(cls, source: Module, target: Module, matrix) -> "ModuleMap":
        """Restrict an ambient matrix to e_t M e_s."""
        R = source.ring
        M = matrix
        if not target.is_free:
            M = mat_mul(R, target.idempotent, M)
        if not source.is_free:
            M = mat_mul(R, M, source.idempotent)
        return cls(source, target, M, validate=False)

    def apply(self, v: Sequence[AlgebraElement]) -> list[AlgebraElement]:
        return [row[0] for row in mat_mul(self.source.ring, self.matrix, [[x] for x in v])]

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other."""
        return ModuleMap(other.source, self.target, mat_mul(self.source.ring, self.matrix, other.matrix),
                         validate=False)

    def is_bijective(self) -> bool:
        """k-rank of the map on the summand equals both k-dimensions."""
        if self.source.k_dimension() != self.target.k_dimension():
            return False
        R = self.source.ring
        return len(echelon(R.field, realize(R, self.matrix))[1]) == self.source.k_dimension()


def ambient_inverse_on_summand(R: Algebra, g, e=None):
    """Inverse of g restricted to the summand e R^n (g = e g e assumed).

    g + (1 - e) is invertible on R^n exactly when g is invertible on the
    summand; its inverse, cut down by e, is the inverse on the summand.
    """
    n = len(g)
    if e is not None:
        g = mat_add(g, mat_sub(mat_identity(R, n), e))
    k = R.field
    d = R.dim
    rows = realize(R, g)
    dense = [[rows[r].get(c, k.zero) for c in range(n * d)] for r in range(n * d)]
    inv = k_inverse(k, dense)  # raises ValidationError when singular
    # entry (i, j) of the inverse: apply the realized inverse to the unit in slot j
    out = mat_zero(R, n, n)
    out = [list(row) for row in out]
    unit = R.unit
    for j in range(n):
        vec = [k.zero] * (n * d)
        for s in range(d):
            vec[j * d + s] = unit[s]
        col = [sum((inv[r][c] * vec[c] for c in range(n * d) if vec[c] and inv[r][c]), k.zero)
               for r in range(n * d)]
        for i in range(n):
            out[i][j] = AlgebraElement(R, tuple(col[i * d:(i + 1) * d]))
    if e is not None:
        out = mat_mul(R, mat_mul(R, e, out), e)
    return out


# -- duality ------------------------------------------------------------------


def dual_module(E: Module) -> Module:
    """E* = Hom_A(E, A) as a right A^op-module (idempotent = transpose of e in A^op)."""
    Aop = E.ring.opposite()
    D = Module(Aop, transpose_into(Aop, E.idempotent), free=E.is_free)
    return D


def eval_pairing(f: Sequence[AlgebraElement], x: Sequence[AlgebraElement]) -> AlgebraElement:
    """f(x) = sum_i f_i x_i in A, with f given by its A^op-coordinates."""
    A = x[0].algebra if x else None
    if A is None:
        raise ValueError("cannot evaluate on the zero module")
    total = A.zero()
    for fi, xi in zip(f, x):
        total = total + fi.in_algebra(A) * xi
    return total


def left_act_dual(mu: AlgebraElement, f: Sequence[AlgebraElement]) -> list[AlgebraElement]:
    """(mu . f)(x) = mu f(x): in A^op coordinates, entrywise f_i -> mu f_i."""
    Aop = f[0].algebra
    A = mu.algebra
    return [(mu * fi.in_algebra(A)).in_algebra(Aop) for fi in f]


def double_dual_iso(E: Module) -> ModuleMap:
    """Canonical E -> E** (x -> [f -> f(x)]); its matrix is e itself."""
    DD = dual_module(dual_module(E))
    if DD.ring != E.ring:
        raise ValidationError("double dual lives over a different ring")
    return ModuleMap(E, DD, [list(row) for row in E.idempotent])


def dual_matrix(h, Aop: Algebra):
    """Matrix on E* (columns over A^op) induced by f -> f o h: the transpose of h read in A^op."""
    return transpose_into(Aop, h)


# -- tensor products over k -----------------------------------------------------


def tensor_over_k(P: Module, Q: Module) -> Module:
    """P (x)_k Q over B = A (x) A^op, for P over A^op and Q over A."""
    A = Q.ring
    if P.ring != A.opposite():
        raise RingMismatchError("tensor_over_k needs P over A^op and Q over A")
    B = envelope(A)
    T = Module(B, tensor_matrix(B, P.idempotent, Q.idempotent), free=P.is_free and Q.is_free)
    T.tensor_factors = (P, Q)
    T.labels = [f"u{i + 1}{j + 1}" for i in range(P.rank) for j in range(Q.rank)]
    return T


def tensor_matrix(B: Algebra, D, g):
    """B-matrix of D (x) g: entry [(i,j),(k,l)] = g[j][l] (x) D[i][k]."""
    m, n = len(D), len(g)
    out = []
    for i in range(m):
        for j in range(n):
            row = []
            for k in range(m):
                dik = D[i][k]
                for l in range(n):
                    row.append(pure_tensor(B, g[j][l], dik))
            out.append(row)
    return out


def tensor_element(T: Module, f: Sequence[AlgebraElement], y: Sequence[AlgebraElement]) -> list[AlgebraElement]:
    """The pure tensor f (x) y in T = P (x)_k Q: slot (i, j) holds y_j (x) f_i."""
    B = T.ring
    return [pure_tensor(B, yj, fi) for fi in f for yj in y]


# -- Hom_A(E, E-bar) and scalar extension ----------------------------------------


def _require_commutative(A: Algebra):
    if not A.is_commutative():
        raise UnsupportedError(f"{A.name} is not commutative")


def hom_module(E: Module, sigma: Antiinvolution) -> Module:
    """Hom_A(E, E-bar) for commutative A with involution sigma.

    E-bar is E with x . a = x sigma(a).  A map g: E -> E-bar is stored as
    the n x n matrix G with g(x) = G sigma(x) computed in E, flattened
    row-major; the module structure is (g a)(x) = g(x) a.  The idempotent
    is G -> e G sigma(e).
    """
    A = E.ring
    _require_commutative(A)
    n = E.rank
    e = E.idempotent
    se = [[sigma(x) for x in row] for row in e]
    rows = []
    for i in range(n):
        for j in range(n):
            rows.append([e[i][k] * se[l][j] for k in range(n) for l in range(n)])
    H = Module(A, rows, free=E.is_free)
    H.labels = [f"G{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return H


def hom_apply(G, x: Sequence[AlgebraElement], sigma: Antiinvolution) -> list[AlgebraElement]:
    """Evaluate the map stored as G on x: G sigma(x)."""
    sx = [sigma(a) for a in x]
    A = sx[0].algebra
    return [sum((G[i][j] * sx[j] for j in range(len(sx))), A.zero()) for i in range(len(G))]


def flatten(G) -> list[AlgebraElement]:
    return [x for row in G for x in row]


def unflatten(v: Sequence[AlgebraElement], n: int):
    return [list(v[i * n:(i + 1) * n]) for i in range(n)]


def underlying_map(G, sigma: Antiinvolution):
    """Matrix of f-bar, the map E-bar -> E underlying f, as used in Tr(f-bar g)."""
    return [[sigma(x) for x in row] for row in G]


def phi_formula(f: Sequence[AlgebraElement], y: Sequence[AlgebraElement], a: AlgebraElement,
                sigma: Antiinvolution):
    """Direct evaluation of (f (x) y) (x) a -> [x -> sigma(f(x)) y a] as a matrix G.

    f is given by its coordinates (read in A).  G[j][i] = y_j a sigma(f_i).
    """
    A = a.algebra
    fa = [fi.in_algebra(A) for fi in f]
    return [[yj * a * sigma(fi) for fi in fa] for yj in y]


def extend_scalars(M: Module, mu: AlgebraMorphism) -> Module:
    """M (x)_B A along mu: same ambient rank, idempotent pushed through mu."""
    if M.ring != mu.source:
        raise RingMismatchError("module ring differs from the morphism's source")
    N = Module(mu.target, [[mu(x) for x in row] for row in M.idempotent], free=M.is_free)
    N.labels = [f"{lab}⊗1" for lab in M.labels] if M.labels else None
    return N


def phi_identification(E: Module, sigma: Antiinvolution, mu: AlgebraMorphism) -> ModuleMap:
    """The A-linear identification (E* (x) E) (x)_B A -> Hom_A(E, E-bar).

    Sends the generator u_ij (x) 1 to the matrix unit E_ji; in general
    (f (x) y) (x) a goes to G with G[j][i] = y_j a sigma(f_i).
    """
    A = E.ring
    n = E.rank
    src = extend_scalars(tensor_over_k(dual_module(E), E), mu)
    tgt = hom_module(E, sigma)
    P = [list(row) for row in mat_zero(A, n * n, n * n)]
    one = A.one()
    for i in range(n):
        for j in range(n):
            P[j * n + i][i * n + j] = one
    return ModuleMap.from_ambient(src, tgt, P)


# -- degree-two functors on free modules over commutative A -------------------------


def _require_free(E: Module, what: str):
    if not E.is_free:
        raise UnsupportedError(f"{what} is implemented for free modules only")


def sym_square(E: Module) -> Module:
    """S^2(E), basis e_i.e_j for i <= j in lexicographic order."""
    _require_commutative(E.ring)
    _require_free(E, "S^2")
    pairs = list(combinations_with_replacement(range(E.rank), 2))
    S = free_module(E.ring, len(pairs))
    S.labels = [f"e{i + 1}.e{j + 1}" for i, j in pairs]
    return S


def ext_square(E: Module) -> Module:
    """Lambda^2(E), basis e_i^e_j for i < j in lexicographic order."""
    _require_commutative(E.ring)
    _require_free(E, "Lambda^2")
    pairs = list(combinations(range(E.rank), 2))
    L = free_module(E.ring, len(pairs))
    L.labels = [f"e{i + 1}^e{j + 1}" for i, j in pairs]
    return L


def tensor_over_ring(E: Module, F: Module) -> Module:
    """E (x)_A F for free modules over commutative A."""
    if E.ring != F.ring:
        raise RingMismatchError("tensor product of modules over different rings")
    _require_commutative(E.ring)
    _require_free(E, "tensor over A")
    _require_free(F, "tensor over A")
    return free_module(E.ring, E.rank * F.rank)


# -- K_0 classes ----------------------------------------------------------------


class K0Class:
    """The formal difference [module] - [R^free_rank] in K_0(R)."""

    def __init__(self, ring: Algebra, module: Module, free_rank: int):
        if module.ring != ring:
            raise RingMismatchError("K0 class module over the wrong ring")
        if free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        self.ring = ring
        self.module = module
        self.free_rank = free_rank

    @classmethod
    def of(cls, E: Module) -> "K0Class":
        return cls(E.ring, E, 0)

    @classmethod
    def free(cls, R: Algebra, a: int, b: int = 0) -> "K0Class":
        """[R^a] - [R^b]."""
        return cls(R, free_module(R, a), b)

    @classmethod
    def from_lists(cls, R: Algebra, plus: Sequence[Module], minus: Sequence[Module]) -> "K0Class":
        total = cls(R, zero_module(R), 0)
        for E in plus:
            total = total + cls.of(E)
        for E in minus:
            total = total - cls.of(E)
        return total

    @property
    def plus(self) -> list[Module]:
        return [self.module]

    @property
    def minus(self) -> list[Module]:
        return [free_module(self.ring, self.free_rank)]

    def __add__(self, other: "K0Class") -> "K0Class":
        if other.ring != self.ring:
            raise RingMismatchError("K0 classes over different rings")
        return K0Class(self.ring, direct_sum(self.module, other.module), self.free_rank + other.free_rank)

    def __neg__(self) -> "K0Class":
        E = self.module
        if E.is_free:
            return K0Class(self.ring, free_module(self.ring, self.free_rank), E.rank)
        # -([E] - [R^n]) = [R^n (+) E^c] - [R^N], where E (+) E^c = R^N
        pos = direct_sum(free_module(self.ring, self.free_rank), complement(E))
        return K0Class(self.ring, pos, E.rank)

    def __sub__(self, other: "K0Class") -> "K0Class":
        return self + (-other)

    def virtual_k_dimension(self) -> int:
        return self.module.k_dimension() - self.free_rank * self.ring.dim

    def rank(self) -> Fraction:
        """Virtual rank: k-dimension divided by dim R (an integer for free classes)."""
        return Fraction(self.virtual_k_dimension(), self.ring.dim)

    def __repr__(self):
        return f"K0Class([{self.module!r}] - [R^{self.free_rank}])"
