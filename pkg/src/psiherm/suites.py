"""Verification suites: each runs one family of identities exactly and
returns a :class:`SuiteResult` (counts plus the first witness on failure).

The suites are what ``psiherm verify`` reports, and the acceptance tests
call them with larger trial counts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .algebra import Algebra, AlgebraElement, envelope, mat_equal, mat_identity, mat_mul, mult_morphism, pure_tensor
from .errors import UnsupportedError
from .hermitian import (
    HermitianModule,
    base_change_hermitian,
    evaluate_form,
    is_nondegenerate,
    trace_form,
    verify_isometry,
)
from .modules import (
    K0Class,
    Module,
    direct_sum,
    dual_module,
    eval_pairing,
    extend_scalars,
    free_module,
    hom_module,
    left_act_dual,
    phi_formula,
    phi_identification,
    tensor_element,
)
from .psi import (
    adams_psi2,
    dold_extend_psi,
    dold_free_instance,
    psi_module,
    psi_on_iso,
    random_invertible,
    signature_of_representation_target,
    sum_decomposition_isometry,
)
from .witt import fingerprint, rank_invariant, signature

SUITES = ("sesquilinear", "trace-prop", "sum-decomp", "gl-rep", "dold")


@dataclass
class SuiteResult:
    name: str
    status: str = "pass"          # pass | fail | not-applicable
    checks: int = 0
    failures: int = 0
    witness: object = None
    notes: list = dc_field(default_factory=list)

    def fail(self, witness) -> None:
        self.failures += 1
        if self.witness is None:
            self.witness = witness
        self.status = "fail"

    def check(self, ok: bool, witness) -> bool:
        self.checks += 1
        if not ok:
            self.fail(witness)
        return ok

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def as_dict(self) -> dict:
        out = {"status": self.status, "checks": self.checks, "failures": self.failures}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    if isinstance(x, AlgebraElement):
        return x.coords_str()
    return str(x)


# -- sesquilinearity -----------------------------------------------------------------
#
# Elements of E* (x) E are kept as lists of pure tensors (f, y); the form is
# evaluated straight from f(y') (x) f'(y), and right multiplication by
# b = sum c_rs (a_r (x) a_s) uses (f (x) y)(lam (x) mu) = mu f (x) y lam.
# These values are compared with the Gram-based evaluate_form.


def _random_pure(E: Module, rng, terms: int = 2):
    D = dual_module(E)
    return [(D.random_vector(rng, 2), E.random_vector(rng, 2)) for _ in range(terms)]


def _formula_form(B: Algebra, u, v) -> AlgebraElement:
    Aop = B.factors[1]
    total = B.zero()
    for f, y in u:
        for f2, y2 in v:
            total = total + pure_tensor(B, eval_pairing(f, y2), eval_pairing(f2, y).in_algebra(Aop))
    return total


def _formula_act(B: Algebra, u, b: AlgebraElement):
    A, Aop = B.factors
    d = A.dim
    out = []
    for r in range(d):
        for s in range(d):
            c = b.c[r * d + s]
            if not c:
                continue
            lam = A.basis_element(r)
            mu = Aop.basis_element(s).in_algebra(A)
            for f, y in u:
                out.append((left_act_dual(mu, f), [x * lam * A.scalar(c) for x in y]))
    return out


def _realize(T: Module, u) -> list:
    B = T.ring
    v = [B.zero()] * T.rank
    for f, y in u:
        v = [a + b for a, b in zip(v, tensor_element(T, f, y))]
    return v


def gram_matches_formula(P: HermitianModule, E: Module) -> tuple | None:
    """First generator pair (a, b) with Gram != formula, or None (free E only)."""
    if not E.is_free:
        return None
    B = P.base.ring
    A = E.ring
    n = E.rank
    D = dual_module(E)
    eps = [D.generator(i) for i in range(n)]
    es = [E.generator(j) for j in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    want = _formula_form(B, [(eps[i], es[j])], [(eps[k], es[l])])
                    if P.gram[i * n + j][k * n + l] != want:
                        return (i * n + j, k * n + l)
    return None


def check_sesquilinear(E: Module, trials: int, rng, P: HermitianModule | None = None,
                       result: SuiteResult | None = None) -> SuiteResult:
    """The three identities for psi(E) (or a supplied, possibly corrupted, form P on it)."""
    res = result or SuiteResult("sesquilinear")
    if P is None:
        P = psi_module(E, check_nondegenerate=False).output
    B = P.base.ring
    bar = P.base.bar
    T = P.module
    w = gram_matches_formula(P, E)
    res.check(w is None, {"gram_entry": w, "module_rank": E.rank})
    for t in range(trials):
        u, u2 = _random_pure(E, rng), _random_pure(E, rng)
        b = B.random_element(rng, 2)
        vu, vu2 = _realize(T, u), _realize(T, u2)
        base = _formula_form(B, u, u2)
        gram_val = evaluate_form(P, vu, vu2)
        ub = _formula_act(B, u, b)
        u2b = _formula_act(B, u2, b)
        where = {"trial": t, "module_rank": E.rank}
        res.check(gram_val == base, dict(where, identity="gram-vs-formula"))
        # phi(u b, u') = bar(b) phi(u, u')
        res.check(_formula_form(B, ub, u2) == bar(b) * base, dict(where, identity="left-antilinear"))
        res.check(evaluate_form(P, _realize(T, ub), vu2) == bar(b) * gram_val,
                  dict(where, identity="left-antilinear-gram"))
        # phi(u, u' b) = phi(u, u') b
        res.check(_formula_form(B, u, u2b) == base * b, dict(where, identity="right-linear"))
        res.check(evaluate_form(P, vu, _realize(T, u2b)) == gram_val * b, dict(where, identity="right-linear-gram"))
        # phi(u', u) = bar(phi(u, u'))
        res.check(_formula_form(B, u2, u) == bar(base), dict(where, identity="hermitian"))
        res.check(evaluate_form(P, vu2, vu) == bar(gram_val), dict(where, identity="hermitian-gram"))
    return res


def suite_sesquilinear(A: Algebra, rng, trials: int = 20, modules=None) -> SuiteResult:
    res = SuiteResult("sesquilinear")
    for E in modules or [free_module(A, n) for n in (1, 2, 3)]:
        check_sesquilinear(E, trials, rng, result=res)
        res.check(is_nondegenerate(psi_module(E, check_nondegenerate=False).output),
                  {"nondegenerate": False, "module_rank": E.rank})
    return res


# -- psi base-changed to A versus the trace form ---------------------------------------


def check_trace_prop(E: Module, sigma, rng, trials: int = 5, result: SuiteResult | None = None) -> SuiteResult:
    res = result or SuiteResult("trace-prop")
    A = E.ring
    mu = mult_morphism(A, sigma)
    M = base_change_hermitian(psi_module(E).output, mu, sigma)
    Tr = trace_form(E, sigma)
    phi = phi_identification(E, sigma, mu)
    where = {"involution": sigma.name, "module_rank": E.rank}
    chk = verify_isometry(phi, M, Tr)
    res.check(bool(chk), dict(where, entry=chk.witness, reason=chk.reason))
    # the matrix of phi against the direct description of (f (x) y) (x) a
    n = E.rank
    D = dual_module(E)
    src = extend_scalars(psi_module(E, check_nondegenerate=False).output.module, mu)
    for t in range(trials):
        f, y, a = D.random_vector(rng, 2), E.random_vector(rng, 2), A.random_element(rng, 2)
        v = [mu(x) * a for x in tensor_element(psi_module(E, False).output.module, f, y)]
        got = [row[0] for row in mat_mul(A, phi.matrix, [[x] for x in src.project(v)])]
        want = [x for row in phi_formula(f, y, a, sigma) for x in row]
        res.check(got == want, dict(where, trial=t, identity="phi-formula"))
    return res


def suite_trace_prop(A: Algebra, rng, trials: int = 5, modules=None) -> SuiteResult:
    res = SuiteResult("trace-prop")
    if not A.is_commutative():
        res.status = "not-applicable"
        res.notes.append(f"{A.name} is not commutative")
        return res
    for name in sorted(A.involutions):
        sigma = A.involutions[name]
        for E in modules or [free_module(A, n) for n in (1, 2, 3)]:
            check_trace_prop(E, sigma, rng, trials, res)
        if A.dim == 2 and not sigma.is_identity():
            # E = A: the form must be (lambda, mu) -> bar(lambda) mu
            Tr = trace_form(free_module(A, 1), sigma)
            for t in range(trials):
                lam, m = A.random_element(rng, 3), A.random_element(rng, 3)
                res.check(evaluate_form(Tr, [lam], [m]) == sigma(lam) * m,
                          {"involution": name, "trial": t, "identity": "standard-form"})
    return res


# -- psi(E (+) F) ------------------------------------------------------------------------


def suite_sum_decomp(A: Algebra, rng=None, max_total: int = 4, modules=None) -> SuiteResult:
    res = SuiteResult("sum-decomp")
    if modules:
        pairs = [(E, F) for E in modules for F in modules]
    else:
        pairs = [(free_module(A, a), free_module(A, b))
                 for a in range(max_total + 1) for b in range(max_total + 1 - a) if a + b > 0]
    for E, F in pairs:
        chk = sum_decomposition_isometry(E, F).check()
        res.check(bool(chk), {"ranks": [E.rank, F.rank], "entry": chk.witness, "reason": chk.reason})
    return res


# -- GL_n(A) -> O(psi(A^n)) ------------------------------------------------------------


def suite_gl_rep(A: Algebra, rng, trials: int = 10, max_n: int = 3) -> SuiteResult:
    res = SuiteResult("gl-rep")
    B = envelope(A)
    for n in range(1, max_n + 1):
        E = free_module(A, n)
        P = psi_module(E).output
        ident = psi_on_iso(E, mat_identity(A, n))
        res.check(mat_equal(ident.image, mat_identity(B, n * n)) is None, {"n": n, "identity": "psi(id)"})
        for t in range(trials):
            g, h = random_invertible(A, n, rng), random_invertible(A, n, rng)
            pg, ph = psi_on_iso(E, g), psi_on_iso(E, h)
            pgh = psi_on_iso(E, mat_mul(A, g, h))
            w = mat_equal(pgh.image, mat_mul(B, pg.image, ph.image))
            res.check(w is None, {"n": n, "trial": t, "identity": "psi(gh)", "entry": w})
            chk = verify_isometry(pg.image, P, P, inverse=pg.inverse_image)
            res.check(bool(chk), {"n": n, "trial": t, "identity": "isometry", "entry": chk.witness})
    if A.dim == 1 and A.field.is_rational:
        for n in range(1, 5):
            G = [[x.c[0] for x in row] for row in psi_module(free_module(A, n)).output.gram]
            got = signature(G)
            res.check(got == signature_of_representation_target(n),
                      {"n": n, "identity": "signature", "got": list(got)})
    return res


# -- Dold extension -------------------------------------------------------------------


def _invariant(x) -> tuple[str, object]:
    try:
        return "fingerprint", fingerprint(x)
    except UnsupportedError:
        return "rank-only", rank_invariant(x)


def suite_dold(A: Algebra, rng, max_rank: int = 3, max_n: int = 3, max_m: int = 3,
               classes: int = 10) -> SuiteResult:
    res = SuiteResult("dold")
    modes = set()
    for r in range(1, max_rank + 1):
        E = free_module(A, r)
        for n in range(max_n + 1):
            mode, ref = _invariant(dold_extend_psi(K0Class(A, E, n)))
            modes.add(mode)
            _, spec_ref = _invariant(dold_free_instance(E, n))
            res.check(ref == spec_ref, {"rank": r, "n": n, "identity": "free-instance"})
            for m in range(1, max_m + 1):
                c = K0Class(A, direct_sum(E, free_module(A, m)), n + m)
                _, val = _invariant(dold_extend_psi(c))
                res.check(val == ref, {"rank": r, "n": n, "m": m, "identity": "stability"})
    res.notes.append("invariant: " + ", ".join(sorted(modes)))
    if A.is_commutative():
        for t in range(classes):
            c = K0Class.free(A, rng.randint(0, 4), rng.randint(0, 4))
            res.check(adams_psi2(c).rank() == c.rank(),
                      {"trial": t, "identity": "psi2-rank", "class": [c.module.rank, c.free_rank]})
    return res


RUNNERS: dict[str, Callable] = {
    "sesquilinear": lambda A, rng, t: suite_sesquilinear(A, rng, t),
    "trace-prop": lambda A, rng, t: suite_trace_prop(A, rng, max(1, t // 4)),
    "sum-decomp": lambda A, rng, t: suite_sum_decomp(A, rng),
    "gl-rep": lambda A, rng, t: suite_gl_rep(A, rng, t),
    "dold": lambda A, rng, t: suite_dold(A, rng),
}


def run_suite(name: str, A: Algebra, seed: int, trials: int) -> SuiteResult:
    if name not in RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    # every suite gets its own stream so selecting a subset does not shift the others
    rng = random.Random(f"{seed}:{name}")
    return RUNNERS[name](A, rng, trials)
