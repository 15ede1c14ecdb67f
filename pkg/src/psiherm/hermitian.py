"""Hermitian modules over a ring with antiinvolution.

A form on M = e R^m is stored as an m x m Gram matrix Phi over R with

    phi(u, v) = bar(u)^T Phi v,

so phi(u b, v) = bar(b) phi(u, v) and phi(u, v b) = phi(u, v) b.  The
hermitian condition is Phi[j][i] = bar(Phi[i][j]); Grams are kept
compatible with the presentation, bar(e)^T Phi e = Phi.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebra import (
    Algebra,
    AlgebraElement,
    AlgebraMorphism,
    Antiinvolution,
    bar_transpose,
    block_diag,
    envelope,
    mat_equal,
    mat_identity,
    mat_mul,
    mat_zero,
    realize,
)
from .errors import RingMismatchError, UnsupportedError, ValidationError
from .linalg import det as k_det, echelon
from .modules import (
    Module,
    ModuleMap,
    direct_sum,
    extend_scalars,
    flatten,
    hom_module,
    unflatten,
    underlying_map,
)


@dataclass(frozen=True)
class RingWithAntiinvolution:
    ring: Algebra
    bar: Antiinvolution

    def __post_init__(self):
        if self.bar.algebra != self.ring:
            raise RingMismatchError("antiinvolution lives on a different algebra")

    def __eq__(self, other):
        if not isinstance(other, RingWithAntiinvolution):
            return NotImplemented
        return self.ring == other.ring and self.bar.matrix == other.bar.matrix

    def __hash__(self):
        return hash((self.ring, self.bar.matrix))


def enveloping_base(A: Algebra) -> RingWithAntiinvolution:
    """(B, swap) with B = A (x) A^op."""
    B = envelope(A)
    return RingWithAntiinvolution(B, B.involutions["swap"])


def involution_base(A: Algebra, name: str) -> RingWithAntiinvolution:
    return RingWithAntiinvolution(A, A.involutions[name])


@dataclass
class HermitianModule:
    """A module with a Gram matrix.  Use :func:`make_hermitian` to validate."""

    base: RingWithAntiinvolution
    module: Module
    gram: list = dc_field(default_factory=list)

    @property
    def rank(self) -> int:
        return self.module.rank

    def __repr__(self):
        return f"HermitianModule(ambient rank {self.rank} over {self.base.ring.name})"


def check_hermitian(M: HermitianModule) -> tuple | None:
    """None when M's Gram is hermitian and compatible with e, else a witness."""
    bar = M.base.bar
    G = M.gram
    m = M.module.rank
    if len(G) != m or any(len(r) != m for r in G):
        return ("shape",)
    for i in range(m):
        for j in range(i, m):
            if G[j][i].c != bar.apply_coords(G[i][j].c):
                return ("symmetry", i, j)
    if not M.module.is_free:
        R = M.base.ring
        e = M.module.idempotent
        w = mat_equal(mat_mul(R, mat_mul(R, bar_transpose(bar, e), G), e), G)
        if w is not None:
            return ("presentation",) + w
    return None


def make_hermitian(base: RingWithAntiinvolution, module: Module, gram, restrict: bool = False) -> HermitianModule:
    """Validate and wrap.  ``restrict=True`` first replaces Phi by bar(e)^T Phi e."""
    if module.ring != base.ring:
        raise RingMismatchError("module and base live over different rings")
    R = base.ring
    G = [[x if isinstance(x, AlgebraElement) else R.element(x) for x in row] for row in gram]
    if restrict and not module.is_free:
        e = module.idempotent
        G = mat_mul(R, mat_mul(R, bar_transpose(base.bar, e), G), e)
    M = HermitianModule(base, module, G)
    w = check_hermitian(M)
    if w is not None:
        kind = w[0]
        if kind == "symmetry":
            raise ValidationError(f"Gram is not hermitian: Phi[{w[2]}][{w[1]}] != bar(Phi[{w[1]}][{w[2]}])",
                                  witness=w[1:])
        if kind == "presentation":
            raise ValidationError(f"Gram incompatible with the idempotent at {w[1:]}", witness=w[1:])
        raise ValidationError("Gram has the wrong shape", witness="shape")
    return M


def evaluate_form(M: HermitianModule, u: Sequence[AlgebraElement], v: Sequence[AlgebraElement]) -> AlgebraElement:
    """phi(u, v) = sum_ij bar(u_i) Phi_ij v_j."""
    if hasattr(u, "vector"):
        u = u.vector
    if hasattr(v, "vector"):
        v = v.vector
    R = M.base.ring
    if len(u) != M.rank or len(v) != M.rank:
        raise RingMismatchError("element does not belong to the hermitian module")
    bar = M.base.bar
    k = R.field
    acc = [k.zero] * R.dim
    bu = [bar.apply_coords(x.c) if x else None for x in u]
    for i, row in enumerate(M.gram):
        if bu[i] is None:
            continue
        for j, g in enumerate(row):
            if not g or not v[j]:
                continue
            p = R.mul_coords(R.mul_coords(bu[i], g.c), v[j].c)
            for t, x in enumerate(p):
                if x:
                    acc[t] += x
    return AlgebraElement(R, tuple(acc))


def adjoint_row(M: HermitianModule, u: Sequence[AlgebraElement]) -> list[AlgebraElement]:
    """theta(u) as a row vector: bar(u)^T Phi."""
    return mat_mul(M.base.ring, [[M.base.bar(x) for x in u]], M.gram)[0]


def _right_realize(R: Algebra, e) -> list[dict]:
    """k-realization of r -> r e on row vectors, as sparse rows."""
    d = R.dim
    m = len(e)
    rows = [dict() for _ in range(m * d)]
    basis = [R.basis_element(s).c for s in range(d)]
    for i in range(m):
        for j in range(m):
            x = e[i][j]
            if not x:
                continue
            for s in range(d):
                col = R.mul_coords(basis[s], x.c)
                for r, v in enumerate(col):
                    if v:
                        rows[j * d + r][i * d + s] = v
    return rows


def theta_matrix(M: HermitianModule) -> list[list]:
    """k-matrix of theta on a k-basis of the summand.

    Columns are indexed by the k-basis of the module (``Module.k_basis``);
    rows by the coordinates of row vectors in R^m.
    """
    R = M.base.ring
    basis = M.module.k_basis()
    cols = []
    for b in basis:
        row = adjoint_row(M, b)
        cols.append([x for a in row for x in a.c])
    n_rows = M.rank * R.dim
    return [[cols[c][r] for c in range(len(cols))] for r in range(n_rows)]


def antidual_dimension(M: HermitianModule) -> int:
    R = M.base.ring
    if M.module.is_free:
        return M.rank * R.dim
    return len(echelon(R.field, _right_realize(R, M.module.idempotent))[1])


def is_nondegenerate(M: HermitianModule) -> bool:
    """theta: F -> F* is bijective: rank of its k-realization equals dim F = dim F*."""
    n = M.module.k_dimension()
    if n != antidual_dimension(M):
        return False
    T = theta_matrix(M)
    return len(echelon(M.base.ring.field, [{j: v for j, v in enumerate(row) if v} for row in T])[1]) == n


def theta_determinant(M: HermitianModule):
    """det of theta's square k-realization (free modules only)."""
    if not M.module.is_free:
        raise UnsupportedError("theta determinant needs a free module (square realization)")
    return k_det(M.base.ring.field, theta_matrix(M))


def hyperbolic(base: RingWithAntiinvolution, P: Module) -> HermitianModule:
    """H(P) on P (+) P*, with P* = {rows f = f e} made a right module via f.r = bar(r) f.

    P* is stored as columns bar(f)^T, presented by bar(e)^T.  The ambient
    Gram is [[0, I], [I, 0]], restricted to [[0, bar(e)^T], [e, 0]].
    """
    if P.ring != base.ring:
        raise RingMismatchError("module and base live over different rings")
    R = base.ring
    n = P.rank
    e = P.idempotent
    et = bar_transpose(base.bar, e)
    Pd = Module(R, et, free=P.is_free)
    H = direct_sum(P, Pd)
    G = [list(r) for r in mat_zero(R, 2 * n, 2 * n)]
    for i in range(n):
        for j in range(n):
            G[i][n + j] = et[i][j]
            G[n + i][j] = e[i][j]
    if P.labels:
        H.labels = list(P.labels) + [f"{lab}*" for lab in P.labels]
    return make_hermitian(base, H, G)


def orthogonal_sum(M1: HermitianModule, M2: HermitianModule) -> HermitianModule:
    if M1.base != M2.base:
        raise RingMismatchError("orthogonal sum of forms over different bases")
    R = M1.base.ring
    return HermitianModule(M1.base, direct_sum(M1.module, M2.module), block_diag(R, M1.gram, M2.gram))


def orthogonal_sum_all(base: RingWithAntiinvolution, parts: Sequence[HermitianModule]) -> HermitianModule:
    from .modules import zero_module

    total = HermitianModule(base, zero_module(base.ring), [])
    for p in parts:
        total = orthogonal_sum(total, p)
    return total


@dataclass
class IsometryCheck:
    ok: bool
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_isometry(T, M1: HermitianModule, M2: HermitianModule, inverse=None) -> IsometryCheck:
    """Is T: M1 -> M2 an isometry?

    Checks that T maps the summand into the summand, is bijective there
    (via ``inverse`` if supplied, else by k-rank), and pulls Phi2 back to
    Phi1 exactly.  On failure the first violating entry is the witness.
    """
    if M1.base != M2.base:
        raise RingMismatchError("isometry between forms over different bases")
    R = M1.base.ring
    bar = M1.base.bar
    mat = T.matrix if isinstance(T, ModuleMap) else T
    if len(mat) != M2.rank or any(len(r) != M1.rank for r in mat):
        raise ValidationError("map has the wrong shape for these modules", witness="shape")
    e1, e2 = M1.module.idempotent, M2.module.idempotent
    Te = mat if M1.module.is_free else mat_mul(R, mat, e1)
    if not M2.module.is_free:
        w = mat_equal(mat_mul(R, e2, Te), Te)
        if w is not None:
            return IsometryCheck(False, w, "image leaves the target summand")
    if inverse is not None:
        inv = inverse.matrix if isinstance(inverse, ModuleMap) else inverse
        w = mat_equal(mat_mul(R, inv, Te), e1)
        if w is not None:
            return IsometryCheck(False, w, "inverse does not undo the map on the source")
        w = mat_equal(mat_mul(R, Te, inv), e2)
        if w is not None:
            return IsometryCheck(False, w, "inverse does not undo the map on the target")
    else:
        k1, k2 = M1.module.k_dimension(), M2.module.k_dimension()
        if k1 != k2:
            return IsometryCheck(False, ("k-dimension", k1, k2), "summands have different dimensions")
        r = len(echelon(R.field, realize(R, Te))[1]) if Te else 0
        if r != k1:
            return IsometryCheck(False, ("k-rank", r, k1), "map is not bijective on the summands")
    pulled = mat_mul(R, mat_mul(R, bar_transpose(bar, Te), M2.gram), Te)
    w = mat_equal(pulled, M1.gram)
    if w is not None:
        return IsometryCheck(False, w, "bar(T)^T Phi2 T != Phi1")
    return IsometryCheck(True)


def base_change_hermitian(M: HermitianModule, mu: AlgebraMorphism,
                          sigma: Antiinvolution | None = None) -> HermitianModule:
    """Push M over (B, bar) along mu: B -> A to a form over (A, sigma)."""
    sigma = sigma or getattr(mu, "sigma", None)
    if sigma is None:
        raise ValidationError("no target involution given for the base change")
    if M.base.ring != mu.source:
        raise RingMismatchError("form and morphism have different source rings")
    w = mu.intertwines(M.base.bar, sigma)
    if w is not None:
        raise ValidationError("morphism is not involution-compatible", witness=w)
    N = extend_scalars(M.module, mu)
    return make_hermitian(RingWithAntiinvolution(mu.target, sigma), N, [[mu(x) for x in row] for row in M.gram])


def trace_value(G, H, sigma: Antiinvolution) -> AlgebraElement:
    """Tr(f-bar g) for maps stored as matrices G (for f) and H (for g)."""
    A = H[0][0].algebra
    fbar = underlying_map(G, sigma)
    n = len(G)
    total = A.zero()
    for i in range(n):
        for j in range(n):
            total = total + fbar[i][j] * H[j][i]
    return total


def trace_form(E: Module, sigma: Antiinvolution) -> HermitianModule:
    """(f, g) -> Tr(f-bar g) on Hom_A(E, E-bar), A commutative, E free."""
    A = E.ring
    if not A.is_commutative():
        raise UnsupportedError(f"{A.name} is not commutative")
    if not E.is_free:
        raise UnsupportedError("trace_form is implemented for free E; use psi + base change for projective E")
    H = hom_module(E, sigma)
    n = E.rank
    gens = [unflatten(H.generator(a), n) for a in range(H.rank)]
    G = [[trace_value(ga, gb, sigma) for gb in gens] for ga in gens]
    return make_hermitian(RingWithAntiinvolution(A, sigma), H, G)


class GWClass:
    """Formal difference sum(plus) - sum(minus) of hermitian modules over one base."""

    def __init__(self, base: RingWithAntiinvolution, plus=(), minus=()):
        self.base = base
        self.plus = list(plus)
        self.minus = list(minus)
        for M in self.plus + self.minus:
            if M.base != base:
                raise RingMismatchError("GW class terms over different bases")

    def __add__(self, other: "GWClass") -> "GWClass":
        return GWClass(self.base, self.plus + other.plus, self.minus + other.minus)

    def __neg__(self) -> "GWClass":
        return GWClass(self.base, self.minus, self.plus)

    def __sub__(self, other: "GWClass") -> "GWClass":
        return self + (-other)

    @classmethod
    def of(cls, M: HermitianModule) -> "GWClass":
        return cls(M.base, [M])

    def __repr__(self):
        return f"GWClass(+{len(self.plus)} terms, -{len(self.minus)} terms over {self.base.ring.name})"
