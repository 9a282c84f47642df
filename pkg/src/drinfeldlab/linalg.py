"""Dense linear algebra over small finite fields.

Vectors are tuples of field-element indices, matrices lists of row tuples.
Prime fields go through numpy (int64, reduced mod p); non-prime fields use
the generic table-driven path.
"""

from __future__ import annotations

import numpy as np


def _is_prime_field(field):
    return field.base is None


def rref(field, rows):
    """Row-reduce; returns (reduced rows, pivot column list)."""
    if _is_prime_field(field):
        return _rref_np(field.p, rows)
    return _rref_generic(field, rows)


def _rref_np(p, rows):
    if not rows:
        return [], []
    M = np.array(rows, dtype=np.int64) % p
    nrows, ncols = M.shape
    pivots = []
    r = 0
    for c in range(ncols):
        sub = M[r:, c]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = (M[r] * inv) % p
        col = M[:, c].copy()
        col[r] = 0
        M = (M - np.outer(col, M[r])) % p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [tuple(int(x) for x in row) for row in M[:r]], pivots


def _rref_generic(field, rows):
    M = [list(row) for row in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((k for k in range(r, len(M)) if M[k][c]), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        inv = field.inv(M[r][c])
        M[r] = [field.mul(inv, x) for x in M[r]]
        for k in range(len(M)):
            if k != r and M[k][c]:
                f = M[k][c]
                M[k] = [field.sub(x, field.mul(f, y)) for x, y in zip(M[k], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return [tuple(row) for row in M[:r]], pivots


def kernel_basis(field, rows):
    """Basis of the right kernel {x : rows @ x = 0}."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(field, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = field.neg(red[r][fc])
        basis.append(tuple(vec))
    return basis


def solve(field, rows, rhs):
    """Solve rows @ x = rhs.  Returns (solution or None, unique: bool)."""
    if not rows:
        return ((), True) if not any(rhs) else (None, True)
    ncols = len(rows[0])
    aug = [tuple(row) + (b,) for row, b in zip(rows, rhs)]
    red, pivots = rref(field, aug)
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None, True  # inconsistent
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    unique = len(pivots) == ncols
    return tuple(x), unique


def rank(field, rows):
    return len(rref(field, rows)[1])


def in_span(field, basis_rows, vec):
    """Whether vec lies in the row span (basis_rows assumed row-reduced)."""
    if not basis_rows:
        return not any(vec)
    red, pivots = basis_rows
    v = list(vec)
    for r, pc in enumerate(pivots):
        if v[pc]:
            f = v[pc]
            row = red[r]
            v = [field.sub(x, field.mul(f, y)) for x, y in zip(v, row)]
    return not any(v)


class SpanTracker:
    """Incrementally row-reduced span for membership tests."""

    def __init__(self, field, ncols):
        self.field = field
        self.ncols = ncols
        self.rows = []
        self.pivots = []

    def reduce(self, vec):
        F = self.field
        v = list(vec)
        for row, pc in zip(self.rows, self.pivots):
            if v[pc]:
                f = v[pc]
                v = [F.sub(x, F.mul(f, y)) for x, y in zip(v, row)]
        return v

    def contains(self, vec):
        return not any(self.reduce(vec))

    def add(self, vec):
        """Insert if independent; returns True when the span grew."""
        F = self.field
        v = self.reduce(vec)
        pc = next((i for i, x in enumerate(v) if x), None)
        if pc is None:
            return False
        inv = F.inv(v[pc])
        v = [F.mul(inv, x) for x in v]
        self.rows.append(tuple(v))
        self.pivots.append(pc)
        order = sorted(range(len(self.pivots)), key=lambda i: self.pivots[i])
        self.rows = [self.rows[i] for i in order]
        self.pivots = [self.pivots[i] for i in order]
        return True

    @property
    def dim(self):
        return len(self.rows)


def mat_mul(field, A, B):
    """Matrix product with entries in the field."""
    if _is_prime_field(field):
        p = field.p
        out = (np.array(A, dtype=np.int64) @ np.array(B, dtype=np.int64)) % p
        return [tuple(int(x) for x in row) for row in out]
    F = field
    n, m = len(A), len(B[0])
    k = len(B)
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            acc = 0
            for l in range(k):
                if Ai[l] and B[l][j]:
                    acc = F.add(acc, F.mul(Ai[l], B[l][j]))
            row.append(acc)
        out.append(tuple(row))
    return out


def mat_vec(field, A, v):
    if _is_prime_field(field):
        p = field.p
        out = (np.array(A, dtype=np.int64) @ np.array(v, dtype=np.int64)) % p
        return tuple(int(x) for x in out)
    F = field
    out = []
    for row in A:
        acc = 0
        for a, b in zip(row, v):
            if a and b:
                acc = F.add(acc, F.mul(a, b))
        out.append(acc)
    return tuple(out)
