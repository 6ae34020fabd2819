"""Matrices over a finite field engine (lists of rows of element codes)."""

from __future__ import annotations


def identity(F, n):
    return [[F.one if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(F, A, B):
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        new = []
        for j in range(cols):
            acc = 0
            for k, a in enumerate(row):
                if a and B[k][j]:
                    acc = F.add(acc, F.mul(a, B[k][j]))
            new.append(acc)
        out.append(new)
    return out


def matvec(F, A, v):
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            if a and x:
                acc = F.add(acc, F.mul(a, x))
        out.append(acc)
    return out


def matpow(F, A, e):
    result = identity(F, len(A))
    while e:
        if e & 1:
            result = matmul(F, result, A)
        e >>= 1
        if e:
            A = matmul(F, A, A)
    return result


def sub(F, A, B):
    return [[F.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def rref(F, A):
    """Reduced row echelon form and pivot columns."""
    M = [list(r) for r in A]
    rows = len(M)
    cols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(x, inv) for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(F, A):
    return len(rref(F, A)[1])


def nullspace(F, A):
    """Basis of {v : A v = 0}, one vector per free column."""
    cols = len(A[0])
    M, pivots = rref(F, A)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(M[i][f])
        basis.append(v)
    return basis
