"""The functor psi(E) = E* (x)_k E with its hermitian form over B = A (x) A^op.

For E = e A^n the generators of psi(A^n) are u_ij = eps_i (x) e_j in
row-major order, and the form is

    phi[(f (x) y), (f' (x) y')] = f(y') (x) f'(y),

so the ambient Gram is the permutation matrix Phi[(i,j),(k,l)] = d_il d_jk.
Also here: the direct-sum decomposition psi(E (+) F) = psi(E) (+) psi(F)
(+) H(E* (x) F) as an explicit isometry, the representation
GL_n(A) -> O(psi(A^n)), and the extension of psi (and of S^2, Lambda^2,
psi^2) to K_0 classes through the cross-effect.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Algebra, AlgebraElement, mat_zero, pure_tensor
from .errors import RingMismatchError, UnsupportedError, ValidationError
from .hermitian import (
    GWClass,
    HermitianModule,
    IsometryCheck,
    enveloping_base,
    hyperbolic,
    is_nondegenerate,
    make_hermitian,
    orthogonal_sum_all,
    verify_isometry,
)
from .modules import (
    K0Class,
    Module,
    ModuleMap,
    ambient_inverse_on_summand,
    direct_sum,
    dual_matrix,
    dual_module,
    eval_pairing,
    ext_square,
    free_module,
    left_act_dual,
    sym_square,
    tensor_matrix,
    tensor_over_k,
    tensor_over_ring,
)


@dataclass
class PsiResult:
    input: Module
    output: HermitianModule
    basis_map: list  # generator index -> (i, j): eps_i (x) e_j


def psi_gram(B: Algebra, n: int) -> list:
    one, zero = B.one(), B.zero()
    return [[one if (i == l and j == k) else zero for k in range(n) for l in range(n)]
            for i in range(n) for j in range(n)]


def psi_module(E: Module, check_nondegenerate: bool = True) -> PsiResult:
    A = E.ring
    base = enveloping_base(A)
    F = tensor_over_k(dual_module(E), E)
    n = E.rank
    out = make_hermitian(base, F, psi_gram(base.ring, n), restrict=True)
    if check_nondegenerate and not is_nondegenerate(out):
        raise ValidationError("psi(E) came out degenerate", witness=None)
    return PsiResult(E, out, [(i, j) for i in range(n) for j in range(n)])


def psi_pairing(f, y, f2, y2) -> AlgebraElement:
    """phi[(f (x) y), (f2 (x) y2)] = f(y2) (x) f2(y), straight from the formula."""
    A = y[0].algebra
    from .algebra import envelope

    B = envelope(A)
    return pure_tensor(B, eval_pairing(f, y2), eval_pairing(f2, y).in_algebra(A.opposite()))


def pure_tensor_times(f, y, lam: AlgebraElement, mu: AlgebraElement):
    """(f (x) y)(lam (x) mu) = (mu f) (x) (y lam), returned as the pair of factors."""
    return left_act_dual(mu, f), [x * lam for x in y]


# -- psi(E (+) F) = psi(E) (+) psi(F) (+) H(E* (x) F) ------------------------------


@dataclass
class Decomposition:
    source: HermitianModule   # psi(E (+) F)
    target: HermitianModule   # psi(E) (+) psi(F) (+) H(E* (x) F)
    map: ModuleMap
    inverse: ModuleMap

    def check(self) -> IsometryCheck:
        return verify_isometry(self.map, self.source, self.target, inverse=self.inverse)


def sum_decomposition_isometry(E: Module, F: Module) -> Decomposition:
    """Generator permutation (E (+) F)* (x) (E (+) F) -> blocks.

    u_ij goes to psi(E) when i, j < a, to psi(F) when i, j >= a, to the
    E* (x) F half of the hyperbolic module when i < a <= j, and u_kl with
    l < a <= k goes to the dual generator paired with u_lk.
    """
    if E.ring != F.ring:
        raise RingMismatchError("E and F live over different rings")
    A = E.ring
    base = enveloping_base(A)
    B = base.ring
    a, b = E.rank, F.rank
    N = a + b
    src = psi_module(direct_sum(E, F), check_nondegenerate=False).output
    parts = [psi_module(E, False).output, psi_module(F, False).output,
             hyperbolic(base, tensor_over_k(dual_module(E), F))]
    tgt = orthogonal_sum_all(base, parts)

    def target_index(i: int, j: int) -> int:
        if i < a and j < a:
            return i * a + j
        if i >= a and j >= a:
            return a * a + (i - a) * b + (j - a)
        if i < a:
            return a * a + b * b + i * b + (j - a)
        return a * a + b * b + a * b + j * b + (i - a)

    one = B.one()
    T = [list(r) for r in mat_zero(B, N * N, N * N)]
    Tinv = [list(r) for r in mat_zero(B, N * N, N * N)]
    for i in range(N):
        for j in range(N):
            t = target_index(i, j)
            T[t][i * N + j] = one
            Tinv[i * N + j][t] = one
    fwd = ModuleMap.from_ambient(src.module, tgt.module, T)
    back = ModuleMap.from_ambient(tgt.module, src.module, Tinv)
    return Decomposition(src, tgt, fwd, back)


# -- the representation GL_n(A) -> O(psi(A^n)) ----------------------------------


@dataclass
class GLRepresentationElement:
    n: int
    g: list
    image: list          # matrix over B acting on psi(E)'s generators
    inverse_image: list  # psi(g^{-1})


def psi_on_iso(E: Module, g) -> GLRepresentationElement:
    """psi(g) = (g^{-1})* (x) g: contragredient on E*, g on E."""
    A = E.ring
    if isinstance(g, ModuleMap):
        g = g.matrix
    n = E.rank
    if len(g) != n or any(len(r) != n for r in g):
        raise ValidationError("automorphism has the wrong shape", witness="shape")
    try:
        h = ambient_inverse_on_summand(A, g, None if E.is_free else E.idempotent)
    except ValidationError as exc:
        raise ValidationError("g is not invertible on E") from exc
    B = enveloping_base(A).ring
    Aop = A.opposite()
    image = tensor_matrix(B, dual_matrix(h, Aop), g)
    inverse_image = tensor_matrix(B, dual_matrix(g, Aop), h)
    return GLRepresentationElement(n, g, image, inverse_image)


def signature_of_representation_target(n: int) -> tuple[int, int]:
    """(p, q) = (n + (n^2 - n)/2, (n^2 - n)/2) for psi(A^n)."""
    if n < 1:
        raise ValueError("n must be positive")
    q = (n * n - n) // 2
    return n + q, q


def random_invertible(A: Algebra, n: int, rng, bound: int = 2, tries: int = 200):
    """Random g in GL_n(A) with small entries (rejection sampling)."""
    for _ in range(tries):
        g = [[A.random_element(rng, bound) for _ in range(n)] for _ in range(n)]
        try:
            ambient_inverse_on_summand(A, g)
        except ValidationError:
            continue
        return g
    raise ValidationError(f"no invertible {n}x{n} matrix over {A.name} found")


# -- Dold extension to K_0 ----------------------------------------------------------


def gamma_modules(E: Module, F: Module) -> HermitianModule:
    """gamma(E, F) = H(E* (x) F)."""
    return hyperbolic(enveloping_base(E.ring), tensor_over_k(dual_module(E), F))


def gamma(x, y) -> GWClass:
    """Biadditive cross-effect, on modules or K0 classes."""
    if isinstance(x, Module):
        x = K0Class.of(x)
    if isinstance(y, Module):
        y = K0Class.of(y)
    if x.ring != y.ring:
        raise RingMismatchError("gamma of classes over different rings")
    A = x.ring
    base = enveloping_base(A)
    Xn, Ym = free_module(A, x.free_rank), free_module(A, y.free_rank)
    plus = [gamma_modules(x.module, y.module), gamma_modules(Xn, Ym)]
    minus = [gamma_modules(x.module, Ym), gamma_modules(Xn, y.module)]
    return GWClass(base, plus, minus)


def dold_extend_psi(c: K0Class) -> GWClass:
    """psi(x - y) = psi(x) - psi(y) - gamma(x, y) + gamma(y, y) with c = [E] - [A^n]."""
    A = c.ring
    base = enveloping_base(A)
    E, An = c.module, free_module(A, c.free_rank)
    plus = [psi_module(E).output, gamma_modules(An, An)]
    minus = [psi_module(An).output, gamma_modules(E, An)]
    return GWClass(base, plus, minus)


def dold_free_instance(E: Module, n: int) -> GWClass:
    """psi(E - A^n) = psi(E) - psi(A^n) + H((A^n)* (x) A^n) - H(E* (x) A^n), term by term."""
    A = E.ring
    base = enveloping_base(A)
    An = free_module(A, n)
    return GWClass(
        base,
        plus=[psi_module(E).output, hyperbolic(base, tensor_over_k(dual_module(An), An))],
        minus=[psi_module(An).output, hyperbolic(base, tensor_over_k(dual_module(E), An))],
    )


_DEGREE2 = {"S2": sym_square, "L2": ext_square}


def dold_extend_degree2(op: str, c: K0Class) -> K0Class:
    """op(x - y) = op(x) - op(y) - x (x) y + y (x) y for op in {"S2", "L2"}."""
    if op not in _DEGREE2:
        raise ValueError(f"op must be one of {sorted(_DEGREE2)}")
    A = c.ring
    if not A.is_commutative():
        raise UnsupportedError(f"{A.name} is not commutative")
    if not c.module.is_free:
        raise UnsupportedError("degree-two operations are implemented on free classes")
    functor = _DEGREE2[op]
    X, Y = c.module, free_module(A, c.free_rank)
    plus = [functor(X), tensor_over_ring(Y, Y)]
    minus = [functor(Y), tensor_over_ring(X, Y)]
    return K0Class.from_lists(A, plus, minus)


def adams_psi2(c: K0Class) -> K0Class:
    """psi^2 = S^2 - Lambda^2 on K_0."""
    return dold_extend_degree2("S2", c) - dold_extend_degree2("L2", c)
