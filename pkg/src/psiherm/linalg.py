"""Exact linear algebra over a :class:`~psiherm.scalars.Field`.

Matrices are dense lists of rows; elimination runs on sparse row
dictionaries because the k-linear realizations built elsewhere are large
and mostly zero (permutation-like Grams, block idempotents).
"""

from __future__ import annotations

from typing import Sequence

from .errors import ValidationError
from .scalars import Field

Matrix = list  # list[list[scalar]]


def identity(field: Field, n: int) -> Matrix:
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def zeros(field: Field, m: int, n: int) -> Matrix:
    return [[field.zero] * n for _ in range(m)]


def transpose(M: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*M)] if M else []


def matmul(field: Field, X: Sequence[Sequence], Y: Sequence[Sequence]) -> Matrix:
    if not X:
        return []
    inner = len(Y)
    ncols = len(Y[0]) if Y else 0
    out = []
    for row in X:
        acc = [field.zero] * ncols
        for k in range(inner):
            a = row[k]
            if a:
                yk = Y[k]
                for j in range(ncols):
                    b = yk[j]
                    if b:
                        acc[j] += a * b
        out.append(acc)
    return out


def matvec(field: Field, M: Sequence[Sequence], v: Sequence) -> list:
    return [sum((a * b for a, b in zip(row, v) if a and b), field.zero) for row in M]


def to_sparse(M: Sequence[Sequence]) -> list[dict]:
    return [{j: v for j, v in enumerate(row) if v} for row in M]


def _reduce(row: dict, pivots: dict) -> dict:
    """Clear every pivot column from ``row`` (pivot rows are normalized)."""
    while True:
        hit = [c for c in row if c in pivots]
        if not hit:
            return row
        c = min(hit)
        f = row[c]
        for j, v in pivots[c].items():
            nv = row.get(j, 0) - f * v
            if nv:
                row[j] = nv
            else:
                row.pop(j, None)


def echelon(field: Field, rows: Sequence[dict]) -> tuple[dict, list, list]:
    """Row-by-row elimination.

    Returns ``(pivots, order, leads)``: ``pivots`` maps pivot column to its
    normalized row, ``order`` lists (input row index, pivot column) for the
    rows that survived, and ``leads`` holds the unnormalized leading values
    (used for determinants).
    """
    pivots: dict = {}
    order = []
    leads = []
    for idx, src in enumerate(rows):
        r = _reduce(dict(src), pivots)
        if not r:
            continue
        c = min(r)
        lead = r[c]
        inv = 1 / lead
        pivots[c] = {j: v * inv for j, v in r.items()}
        order.append((idx, c))
        leads.append(lead)
    return pivots, order, leads


def rank(field: Field, M) -> int:
    rows = M if (M and isinstance(M[0], dict)) else to_sparse(M)
    return len(echelon(field, rows)[1])


def det(field: Field, M: Sequence[Sequence]):
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return field.one
    _, order, leads = echelon(field, to_sparse(M))
    if len(order) < n:
        return field.zero
    perm = [c for _, c in order]
    result = field.one
    for v in leads:
        result *= v
    return -result if _parity(perm) else result


def _parity(perm: list[int]) -> int:
    seen = [False] * len(perm)
    odd = 0
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        odd ^= (length - 1) & 1
    return odd


def rref(field: Field, rows: Sequence[dict]) -> dict:
    """Fully reduced row echelon form as {pivot column: row}."""
    pivots, _, _ = echelon(field, rows)
    for c in sorted(pivots, reverse=True):
        prow = pivots[c]
        for c2, row in pivots.items():
            if c2 != c and c in row:
                f = row[c]
                for j, v in prow.items():
                    nv = row.get(j, 0) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
    return pivots


def inverse(field: Field, M: Sequence[Sequence]) -> Matrix:
    n = len(M)
    rows = []
    for i, row in enumerate(M):
        r = {j: v for j, v in enumerate(row) if v}
        r[n + i] = field.one
        rows.append(r)
    piv = rref(field, rows)
    if any(c not in piv for c in range(n)):
        raise ValidationError("matrix is singular")
    out = zeros(field, n, n)
    for c in range(n):
        for j, v in piv[c].items():
            if j >= n:
                out[c][j - n] = v
    return out


def solve(field: Field, M: Sequence[Sequence], b: Sequence):
    """One solution x of M x = b, or None when the system is inconsistent."""
    ncols = len(M[0]) if M else 0
    rows = []
    for row, bi in zip(M, b):
        r = {j: v for j, v in enumerate(row) if v}
        if bi:
            r[ncols] = bi
        rows.append(r)
    piv = rref(field, rows)
    if ncols in piv:
        return None
    x = [field.zero] * ncols
    for c, row in piv.items():
        x[c] = row.get(ncols, field.zero)
    return x


def column_basis(field: Field, M: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal independent set of columns of M."""
    _, order, _ = echelon(field, to_sparse(transpose(M)))
    return sorted(idx for idx, _ in order)


def nullspace(field: Field, M: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis (as a list of vectors) of {x : M x = 0}."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    piv = rref(field, to_sparse(M))
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for c, row in piv.items():
            if f in row:
                x[c] = -row[f]
        basis.append(x)
    return basis
