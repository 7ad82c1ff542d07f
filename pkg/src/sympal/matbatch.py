"""Vectorized arithmetic on stacks of matrices of field codes.

A stack is an int64 array of shape (N, n, n). All routines go through the
dense lookup tables of the field, so they require q <= TABLE_LIMIT.
"""

import numpy as np

from sympal.errors import Singular


def matmul(T, A, B):
    """A @ B for stacks (or a single (n, n) matrix on either side)."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim == 2:
        A = A[None]
    if B.ndim == 2:
        B = B[None]
    N = max(len(A), len(B))
    n = A.shape[1]
    out = np.empty((N, n, n), dtype=np.int64)
    add, mul = T.add, T.mul
    for i in range(n):
        for j in range(n):
            acc = mul[A[:, i, 0], B[:, 0, j]]
            for k in range(1, n):
                acc = add[acc, mul[A[:, i, k], B[:, k, j]]]
            out[:, i, j] = acc
    return out


def inverse(T, A):
    """Stack inverse by Gauss-Jordan with per-matrix pivoting."""
    A = np.asarray(A)
    N, n, _ = A.shape
    M = np.concatenate([A, np.broadcast_to(np.eye(n, dtype=np.int64), (N, n, n))], axis=2).copy()
    idx = np.arange(N)
    for c in range(n):
        nz = M[:, c:, c] != 0
        if not nz.any(axis=1).all():
            raise Singular("singular matrix in stack")
        piv = c + np.argmax(nz, axis=1)
        row_c = M[idx, c].copy()
        M[idx, c] = M[idx, piv]
        M[idx, piv] = row_c
        s = T.inv[M[:, c, c]]
        M[:, c, :] = T.mul[M[:, c, :], s[:, None]]
        for r in range(n):
            if r == c:
                continue
            f = T.neg[M[:, r, c]]
            M[:, r, :] = T.add[M[:, r, :], T.mul[f[:, None], M[:, c, :]]]
    return M[:, :, n:].copy()


def det2(T, A):
    return T.sub(T.mul[A[:, 0, 0], A[:, 1, 1]], T.mul[A[:, 0, 1], A[:, 1, 0]])


def trace(T, A):
    acc = A[:, 0, 0]
    for i in range(1, A.shape[1]):
        acc = T.add[acc, A[:, i, i]]
    return acc


def sub(T, A, B):
    return T.add[A, T.neg[B]]


def identity(n):
    return np.eye(n, dtype=np.int64)


def proj_canonical(T, A):
    """Scale each matrix so its first nonzero entry (row-major) is 1."""
    N = len(A)
    flat = A.reshape(N, -1)
    first = np.argmax(flat != 0, axis=1)
    lead = flat[np.arange(N), first]
    if (lead == 0).any():
        raise Singular("zero matrix in stack")
    s = T.inv[lead]
    return T.mul[A, s[:, None, None]]


def rank_le_one(T, D):
    """Mask of stack members of rank <= 1 (all 2x2 minors vanish)."""
    N, n, _ = D.shape
    ok = np.ones(N, dtype=bool)
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                for l in range(j + 1, n):
                    m = T.sub(T.mul[D[:, i, j], D[:, k, l]], T.mul[D[:, i, l], D[:, k, j]])
                    ok &= m == 0
    return ok


def keys(A, q):
    """Hashable per-matrix keys: int64 when q^(n^2) fits, else tuples."""
    N = len(A)
    flat = A.reshape(N, -1)
    width = flat.shape[1]
    if q**width < 2**62:
        weights = np.array([q**i for i in range(width)], dtype=np.int64)
        return flat @ weights
    return [tuple(r) for r in flat.tolist()]


def sort_stack(A):
    if len(A) == 0:
        return A
    flat = A.reshape(len(A), -1)
    order = np.lexsort(flat.T[::-1])
    return A[order]


def key_list(A, q):
    k = keys(A, q)
    return k.tolist() if isinstance(k, np.ndarray) else k
