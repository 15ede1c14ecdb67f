"""Invariants of hermitian modules: diagonalization, signature, square-class
discriminant, Witt fingerprints, the diagonal eigenspace split of psi(E)
and the order of the image of K_0(A) in W_0(B)/p^alpha.

Every form is first pushed down to a symmetric k-bilinear form b on a
k-basis of the summand:

* base (R, bar) with R commutative and bar fixing only k.1: b = lambda(phi),
  lambda(a) the unit coordinate of (a + bar a)/2;
* base (A (x) A^op, swap) with A commutative: change rings along
  a (x) b -> a sigma(b) for a declared sigma fixing only k.1, then as above.

Anything else raises :class:`UnsupportedError`.
"""

from __future__ import annotations

import random as _random
from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .algebra import Algebra, AlgebraElement, mult_morphism
from .errors import DegenerateFormError, UnsupportedError, ValidationError
from .hermitian import (
    GWClass,
    HermitianModule,
    RingWithAntiinvolution,
    adjoint_row,
    base_change_hermitian,
    enveloping_base,
    hyperbolic,
    involution_base,
    make_hermitian,
)
from .linalg import identity
from .modules import Module, free_module
from .scalars import Field


# -- diagonalization -----------------------------------------------------------------


def diagonalize_symmetric(field: Field, gram: Sequence[Sequence], rng: _random.Random | None = None):
    """Congruence diagonalization: returns (D, P) with P^T G P = diag(D).

    With ``rng`` the pivot is picked at random among the admissible ones
    (used to check that the inertia does not depend on the pivot order).
    """
    n = len(gram)
    G = [[field(x) for x in row] for row in gram]
    for i in range(n):
        for j in range(i):
            if G[i][j] != G[j][i]:
                raise ValidationError(f"Gram is not symmetric at ({j}, {i})", witness=(j, i))
    P = identity(field, n)

    def add_multiple(dst: int, src: int, c):
        # column dst += c * column src, then the same on rows
        for r in range(n):
            if G[r][src]:
                G[r][dst] += c * G[r][src]
            if P[r][src]:
                P[r][dst] += c * P[r][src]
        for r in range(n):
            if G[src][r]:
                G[dst][r] += c * G[src][r]

    def swap(a: int, b: int):
        if a == b:
            return
        G[a], G[b] = G[b], G[a]
        for row in G:
            row[a], row[b] = row[b], row[a]
        for row in P:
            row[a], row[b] = row[b], row[a]

    for i in range(n):
        cands = [j for j in range(i, n) if G[j][j]]
        if not cands:
            pair = next(((j, l) for j in range(i, n) for l in range(j + 1, n) if G[j][l]), None)
            if pair is None:
                break
            j, l = pair
            add_multiple(j, l, field.one)  # G[j][j] becomes 2 G[j][l] != 0
            cands = [j]
        piv = rng.choice(cands) if rng is not None else cands[0]
        swap(i, piv)
        d = G[i][i]
        for j in range(i + 1, n):
            if G[i][j]:
                add_multiple(j, i, -G[i][j] / d)
    return [G[i][i] for i in range(n)], P


def inertia(gram: Sequence[Sequence], rng: _random.Random | None = None) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric rational Gram."""
    from .scalars import QQ

    D, _ = diagonalize_symmetric(QQ, gram, rng)
    return sum(1 for x in D if x > 0), sum(1 for x in D if x < 0), sum(1 for x in D if not x)


def signature(gram: Sequence[Sequence], rng: _random.Random | None = None) -> tuple[int, int]:
    """(p, q) of a nondegenerate symmetric Gram over Q."""
    p, q, z = inertia(gram, rng)
    if z:
        raise DegenerateFormError(f"form has a radical of dimension {z}", radical_dim=z)
    return p, q


# -- reduction to a k-bilinear form --------------------------------------------------


def _fixed_functional(base: RingWithAntiinvolution):
    """lambda(a) = unit coordinate of (a + bar a)/2, when the bar-fixed part is k.1."""
    R, bar = base.ring, base.bar
    if not R.is_commutative():
        raise UnsupportedError(f"{R.name} is not commutative")
    if bar.fixed_dimension() != 1:
        raise UnsupportedError(f"the involution {bar.name or '?'} on {R.name} fixes more than the scalars")
    s = next(i for i, u in enumerate(R.unit) if u)
    half = R.field(1) / R.field(2)
    u = R.unit[s]

    def lam(a) -> object:
        return (a.c[s] + bar.apply_coords(a.c)[s]) * half / u

    return lam


def _choose_sigma(A: Algebra):
    for name in sorted(A.involutions):
        sig = A.involutions[name]
        if sig.fixed_dimension() == 1:
            return sig
    raise UnsupportedError(f"no declared involution on {A.name} fixes exactly the scalars")


def _is_enveloping(base: RingWithAntiinvolution) -> Algebra | None:
    R = base.ring
    if R.factors is None:
        return None
    A, A2 = R.factors
    if A2 != A.opposite() or "swap" not in R.involutions:
        return None
    return A if base.bar.matrix == R.involutions["swap"].matrix else None


def reduce_to_field(M: HermitianModule) -> tuple[HermitianModule, Field, list, int]:
    """(form over the reduction base, k, symmetric k-Gram, k-dims per unit of rank)."""
    A = _is_enveloping(M.base)
    if A is not None and A.dim > 1:
        if not A.is_commutative():
            raise UnsupportedError(f"{A.name} is not commutative; no base change to a supported base")
        sigma = _choose_sigma(A)
        M = base_change_hermitian(M, mult_morphism(A, sigma), sigma)
    lam = _fixed_functional(M.base)
    R = M.base.ring
    basis = M.module.k_basis()
    support = [[(j, x.c) for j, x in enumerate(v) if x] for v in basis]
    G = []
    for u in basis:
        row = adjoint_row(M, u)  # bar(u)^T Phi, reused across v
        out = []
        for sv in support:
            acc = [R.field.zero] * R.dim
            for j, c in sv:
                if row[j]:
                    for t, x in enumerate(R.mul_coords(row[j].c, c)):
                        if x:
                            acc[t] += x
            out.append(lam(AlgebraElement(R, tuple(acc))))
        G.append(out)
    return M, R.field, G, R.dim


def _complex_type(base: RingWithAntiinvolution) -> bool:
    """R (x) Q_real is C with bar as conjugation: dim 2, anti-fixed x with x^2 < 0."""
    R, bar = base.ring, base.bar
    if R.dim != 2 or not R.field.is_rational or bar.is_identity():
        return False
    for b in R.basis_elements():
        x = b - bar(b)
        if x:
            sq = x * x
            s = next(i for i, u in enumerate(R.unit) if u)
            return sq.c[s] / R.unit[s] < 0
    return False


# -- fingerprints ---------------------------------------------------------------------


@dataclass(frozen=True)
class WittFingerprint:
    rank: int
    det_class: int
    signature: tuple | None
    degenerate: bool = False
    rank_is_k_dimension: bool = False
    radical_dim: int = 0
    field: str = "Q"

    @property
    def net_signature(self) -> int | None:
        return None if self.signature is None else self.signature[0] - self.signature[1]

    def as_dict(self, fmt_det=None) -> dict:
        return {
            "rank": self.rank,
            "rank_is_k_dimension": self.rank_is_k_dimension,
            "det_class": fmt_det(self.det_class) if fmt_det else self.det_class,
            "signature": list(self.signature) if self.signature is not None else None,
            "net_signature": self.net_signature,
            "degenerate": self.degenerate,
            "radical_dim": self.radical_dim,
            "field": self.field,
        }


def fingerprint_gram(field: Field, gram: Sequence[Sequence], scale: int = 1,
                     real: bool | None = None) -> WittFingerprint:
    """Invariants of a symmetric k-Gram; the radical is split off first."""
    D, _ = diagonalize_symmetric(field, gram)
    nz = [x for x in D if x]
    det_class = 1
    for x in nz:
        det_class = field.mul_square_classes(det_class, field.square_class(x))
    sig = None
    if (field.is_rational if real is None else real):
        p, q = sum(1 for x in nz if x > 0), sum(1 for x in nz if x < 0)
        sig = (p // scale, q // scale) if p % scale == 0 and q % scale == 0 else None
    z = len(D) - len(nz)
    return WittFingerprint(len(nz), det_class, sig, z > 0, True, z, str(field))


def _fingerprint_module(M: HermitianModule) -> WittFingerprint:
    R0 = M.base.ring
    free = M.module.is_free
    N, k, G, scale = reduce_to_field(M)
    real = k.is_rational and (scale == 1 or _complex_type(N.base))
    fp = fingerprint_gram(k, G, scale=scale, real=real)
    if fp.degenerate:
        return WittFingerprint(fp.rank, fp.det_class, fp.signature, True, True, fp.radical_dim, fp.field)
    if free:
        return WittFingerprint(M.module.rank, fp.det_class, fp.signature, False, False, 0, fp.field)
    return WittFingerprint(M.module.k_dimension(), fp.det_class, fp.signature, False, True, 0, fp.field)


def fingerprint(x) -> WittFingerprint:
    """Fingerprint of a HermitianModule or a GWClass (ranks and signatures subtract)."""
    if isinstance(x, HermitianModule):
        return _fingerprint_module(x)
    if not isinstance(x, GWClass):
        raise TypeError("fingerprint takes a HermitianModule or a GWClass")
    terms = [(1, _fingerprint_module(M), M) for M in x.plus] + [(-1, _fingerprint_module(M), M) for M in x.minus]
    if not terms:
        k = x.base.ring.field
        return WittFingerprint(0, 1, (0, 0) if k.is_rational else None, field=str(k))
    k = terms[0][1].field
    by_k = any(fp.rank_is_k_dimension for _, fp, _ in terms)
    rank = 0
    det = 1
    sig: tuple | None = (0, 0)
    radical = 0
    kfield = _reduction_field(x.base)
    for s, fp, M in terms:
        rank += s * (M.module.k_dimension() if by_k and not fp.degenerate else fp.rank)
        det = kfield.mul_square_classes(det, fp.det_class)
        radical += s * fp.radical_dim
        if sig is not None and fp.signature is not None:
            sig = (sig[0] + s * fp.signature[0], sig[1] + s * fp.signature[1])
        else:
            sig = None
    degenerate = any(fp.degenerate for _, fp, _ in terms)
    return WittFingerprint(rank, det, sig, degenerate, by_k, radical, k)


def _reduction_field(base: RingWithAntiinvolution) -> Field:
    return base.ring.field


def rank_invariant(x) -> int:
    """k-dimension (virtual for GW classes); defined on every base."""
    if isinstance(x, HermitianModule):
        return x.module.k_dimension()
    return sum(M.module.k_dimension() for M in x.plus) - sum(M.module.k_dimension() for M in x.minus)


# -- the diagonal split of psi(E) --------------------------------------------------------


@dataclass
class EigenspaceSplit:
    symmetric_part: HermitianModule
    antisymmetric_part: HermitianModule
    dims: tuple
    symmetric_basis: list      # vectors in Hom coordinates (flattened n x n)
    antisymmetric_basis: list

    def definiteness(self) -> tuple[str, str]:
        """'positive'/'negative'/'indefinite' for each part (rational scalars only)."""
        return _definiteness(self.symmetric_part), _definiteness(self.antisymmetric_part)


def _definiteness(M: HermitianModule) -> str:
    R = M.base.ring
    if R.dim != 1 or not R.field.is_rational:
        raise UnsupportedError("definiteness needs rational scalars")
    if M.module.rank == 0:
        return "zero"
    p, q, z = inertia([[x.c[0] for x in row] for row in M.gram])
    if z:
        return "degenerate"
    return "positive" if q == 0 else "negative" if p == 0 else "indefinite"


def symmetric_basis(n: int) -> list[tuple]:
    """Diagonal units first, then E_ij + E_ji for i < j: list of ((i, j), sign) pairs."""
    out = [[((i, i), 1)] for i in range(n)]
    out += [[((i, j), 1), ((j, i), 1)] for i in range(n) for j in range(i + 1, n)]
    return out


def antisymmetric_basis(n: int) -> list[tuple]:
    return [[((i, j), 1), ((j, i), -1)] for i in range(n) for j in range(i + 1, n)]


def diagonal_restriction(E: Module) -> EigenspaceSplit:
    """Split End(E), with the base-changed form of psi(E), under f -> f^T."""
    from .modules import phi_identification
    from .psi import psi_module

    A = E.ring
    if not A.is_commutative():
        raise UnsupportedError(f"{A.name} is not commutative")
    if not E.is_free:
        raise UnsupportedError("diagonal_restriction needs a free module")
    if "id" not in A.involutions:
        raise UnsupportedError(f"{A.name} has no declared trivial involution")
    sigma = A.involutions["id"]
    n = E.rank
    mu = mult_morphism(A, sigma)
    Psi = psi_module(E).output
    M = base_change_hermitian(Psi, mu, sigma)
    phi = phi_identification(E, sigma, mu).matrix
    # Gram on Hom generators: phi is a permutation, so H = phi G phi^T
    m = n * n
    where = [next(r for r in range(m) if phi[r][c]) for c in range(m)]
    H = [[None] * m for _ in range(m)]
    for a in range(m):
        for b in range(m):
            H[where[a]][where[b]] = M.gram[a][b]

    def vectors(spec):
        vs = []
        for terms in spec:
            v = [A.zero()] * m
            for (i, j), s in terms:
                v[i * n + j] = A.scalar(s)
            vs.append(v)
        return vs

    def restricted(vs, ws):
        return [[sum((v[a] * H[a][b] * w[b] for a in range(m) for b in range(m) if v[a] and w[b]), A.zero())
                 for w in ws] for v in vs]

    S, T = vectors(symmetric_basis(n)), vectors(antisymmetric_basis(n))
    cross = restricted(S, T)
    if any(x for row in cross for x in row):
        raise ValidationError("symmetric and antisymmetric parts are not orthogonal")
    base = involution_base(A, "id")
    sym = make_hermitian(base, free_module(A, len(S)), restricted(S, S))
    anti = make_hermitian(base, free_module(A, len(T)), restricted(T, T))
    return EigenspaceSplit(sym, anti, (len(S), len(T)), S, T)


# -- W_0(B)/p^alpha and the image of K_0(A) -------------------------------------------


def _witt_add_fq(field: Field, x: tuple, y: tuple) -> tuple:
    """Witt classes over F_q as (rank mod 2, signed discriminant class)."""
    r1, d1 = x
    r2, d2 = y
    sign = field.square_class(-1) if (r1 & r2) else 1
    return (r1 + r2) % 2, d1 * d2 * sign


def _witt_class_fq(fp: WittFingerprint, field: Field) -> tuple:
    r = fp.rank % 2
    sign = field.square_class(-1) if (fp.rank * (fp.rank - 1) // 2) % 2 else 1
    return r, fp.det_class * sign


def image_order_mod(A: Algebra, p: int, alpha: int) -> int:
    """Order of the image of K_0(A)/p^alpha in W_0(B)/p^alpha, B = A (x) A^op."""
    from .psi import psi_module
    from .scalars import is_prime

    if p == 2 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    if alpha < 1:
        raise ValueError("alpha must be positive")
    if A.dim != 1:
        raise UnsupportedError(f"image_order_mod supports the fields Q and F_q, not {A.name}")
    k = A.field
    base = enveloping_base(A)
    gen = fingerprint(psi_module(free_module(A, 1)).output)   # K_0(A) = Z [A]
    hyp = fingerprint(hyperbolic(base, free_module(base.ring, 1)))
    mod = p ** alpha
    if k.is_rational:
        if hyp.net_signature != 0:
            raise ValidationError("hyperbolic plane has nonzero signature")
        s = gen.net_signature
        return mod // gcd(s, mod)
    # finite field: W_0 has four elements, enumerated by (rank mod 2, signed discriminant)
    group = [(r, d) for r in (0, 1) for d in (1, -1)]
    zero = _witt_class_fq(hyp, k)
    if zero != (0, 1):
        raise ValidationError("hyperbolic plane is not trivial in W_0")

    def times(m: int, x: tuple) -> tuple:
        acc = (0, 1)
        for _ in range(m % 4):  # every class has order dividing 4
            acc = _witt_add_fq(k, acc, x)
        return acc

    sub = {times(mod, x) for x in group}             # p^alpha W_0
    w = _witt_class_fq(gen, k)
    orbit = set()
    acc = (0, 1)
    for _ in range(len(group)):
        orbit |= {_witt_add_fq(k, acc, y) for y in sub}
        acc = _witt_add_fq(k, acc, w)
    return len(orbit) // len(sub)
