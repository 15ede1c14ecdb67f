"""Acceptance gate: one block per criterion, at the stated trial counts.

The terminal summary prints one PASS/FAIL line per criterion (see conftest).
"""

import random
import subprocess
import sys

import pytest

from psiherm.algebra import BUILTIN_FAMILY, builtin_algebra
from psiherm.hermitian import evaluate_form, theta_determinant, trace_form
from psiherm.modules import K0Class, direct_sum, free_module, projective_module
from psiherm.psi import adams_psi2, dold_extend_psi, psi_module
from psiherm.suites import (
    check_sesquilinear,
    check_trace_prop,
    suite_gl_rep,
    suite_sum_decomp,
)
from psiherm.witt import diagonal_restriction, fingerprint, image_order_mod, signature

C1 = "sesquilinearity, every builtin, free rank <= 3, 200 exact trials"
C2 = "theta realization invertible (exact det != 0)"
C3 = "base-changed psi Gram equals Tr(f-bar g) Gram after phi"
C4 = "psi(E + F) = psi(E) + psi(F) + H(E* x F), rank E + rank F <= 4"
C5 = "GL_n representation laws (100 pairs, n <= 3) and signatures (1,0),(3,1),(6,3),(10,6)"
C6 = "Dold stability of fingerprints over Q and F7"
C7 = "diagonal restriction dims, definiteness, rank(psi^2 c) = rank c"
C8 = "image orders 3, 25, 1"
C9 = "verify builtin:Q all --seed 42 twice is byte-identical"


def _seeded(*key):
    return random.Random(":".join(map(str, key)))


# -- 1 ---------------------------------------------------------------------------------


@pytest.mark.criterion(1, C1)
@pytest.mark.parametrize("name", BUILTIN_FAMILY)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_c1_sesquilinear(name, n):
    A = builtin_algebra(name)
    res = check_sesquilinear(free_module(A, n), 200, _seeded(1, name, n))
    assert res.passed, res.witness
    assert res.checks == 1 + 7 * 200


@pytest.mark.criterion(1, C1)
def test_c1_sesquilinear_projective_summand():
    A = builtin_algebra("QxQ")
    e = A.element([1, 0])
    E = projective_module(A, 1, [[e]])
    res = check_sesquilinear(E, 200, _seeded(1, "QxQ", "proj"))
    assert res.passed, res.witness


# -- 2 ---------------------------------------------------------------------------------


@pytest.mark.criterion(2, C2)
@pytest.mark.parametrize("name", BUILTIN_FAMILY)
def test_c2_nondegenerate(name):
    A = builtin_algebra(name)
    for n in (1, 2, 3):
        P = psi_module(free_module(A, n)).output
        assert theta_determinant(P) != 0, (name, n)


# -- 3 ---------------------------------------------------------------------------------


@pytest.mark.criterion(3, C3)
@pytest.mark.parametrize("name", ["Q", "QI"])
def test_c3_trace_proposition(name):
    A = builtin_algebra(name)
    rng = _seeded(3, name)
    for inv in sorted(A.involutions):
        for n in (1, 2, 3):
            res = check_trace_prop(free_module(A, n), A.involutions[inv], rng, trials=20)
            assert res.passed, (inv, n, res.witness)


@pytest.mark.criterion(3, C3)
def test_c3_gaussian_standard_form():
    A = builtin_algebra("QI")
    conj = A.involutions["conj"]
    Tr = trace_form(free_module(A, 1), conj)
    assert Tr.gram == [[A.one()]]
    rng = _seeded(3, "standard")
    for _ in range(200):
        lam, mu = A.random_element(rng, 5), A.random_element(rng, 5)
        assert evaluate_form(Tr, [lam], [mu]) == conj(lam) * mu


# -- 4 ---------------------------------------------------------------------------------


@pytest.mark.criterion(4, C4)
@pytest.mark.parametrize("name", BUILTIN_FAMILY)
def test_c4_sum_decomposition(name):
    res = suite_sum_decomp(builtin_algebra(name), max_total=4)
    assert res.passed, res.witness
    assert res.checks == 14


# -- 5 ---------------------------------------------------------------------------------


@pytest.mark.criterion(5, C5)
@pytest.mark.parametrize("name", BUILTIN_FAMILY)
def test_c5_representation_laws(name):
    res = suite_gl_rep(builtin_algebra(name), _seeded(5, name), trials=100, max_n=3)
    assert res.passed, res.witness


@pytest.mark.criterion(5, C5)
def test_c5_signatures_over_q():
    Q = builtin_algebra("Q")
    got = [signature([[x.c[0] for x in row] for row in psi_module(free_module(Q, n)).output.gram])
           for n in (1, 2, 3, 4)]
    assert got == [(1, 0), (3, 1), (6, 3), (10, 6)]


# -- 6 ---------------------------------------------------------------------------------


@pytest.mark.criterion(6, C6)
@pytest.mark.parametrize("name", ["Q", "F7"])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_c6_dold_stability(name, r):
    A = builtin_algebra(name)
    E = free_module(A, r)
    for n in range(4):
        ref = fingerprint(dold_extend_psi(K0Class(A, E, n)))
        for m in range(4):
            c = K0Class(A, direct_sum(E, free_module(A, m)), n + m)
            assert fingerprint(dold_extend_psi(c)) == ref, (r, n, m)


# -- 7 ---------------------------------------------------------------------------------


@pytest.mark.criterion(7, C7)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_c7_diagonal_restriction(n):
    split = diagonal_restriction(free_module(builtin_algebra("Q"), n))
    assert split.dims == (n * (n + 1) // 2, n * (n - 1) // 2)
    sym, anti = split.definiteness()
    assert sym == "positive"
    assert anti == ("zero" if n == 1 else "negative")


@pytest.mark.criterion(7, C7)
def test_c7_adams_rank():
    rng = _seeded(7)
    for _ in range(50):
        A = builtin_algebra(rng.choice(["Q", "F5", "F7", "QI", "QxQ", "QC3"]))
        c = K0Class.free(A, rng.randint(0, 5), rng.randint(0, 5))
        assert adams_psi2(c).rank() == c.rank()


# -- 8 ---------------------------------------------------------------------------------


@pytest.mark.criterion(8, C8)
@pytest.mark.parametrize("name,p,alpha,expected", [("Q", 3, 1, 3), ("Q", 5, 2, 25), ("F5", 3, 1, 1)])
def test_c8_image_order(name, p, alpha, expected):
    assert image_order_mod(builtin_algebra(name), p, alpha) == expected


# -- 9 ---------------------------------------------------------------------------------


@pytest.mark.criterion(9, C9)
def test_c9_deterministic_report(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "psiherm", "verify", "--algebra", "builtin:Q", "--suite", "all",
             "--seed", "42", "--out", str(path), "--quiet"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
