"""Gaussian elimination over a finite field, on lists of element codes.

Matrices here are lists of row lists. These routines back :class:`Mat` and
the intertwiner searches; they are written for n <= 16 and a few hundred
rows, not for speed at scale.
"""

from itertools import combinations


def row_reduce(F, rows, ncols):
    """Reduced row echelon form. Returns (rref_rows, pivot_columns)."""
    M = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, x) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = F.neg(M[i][c])
                M[i] = [F.add(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(F, rows, ncols):
    return len(row_reduce(F, rows, ncols)[1])


def nullspace(F, rows, ncols):
    """Basis of {x : rows . x = 0}, one vector per free column."""
    R, pivots = row_reduce(F, rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(R, pivots):
            v[pc] = F.neg(row[fc])
        basis.append(v)
    return basis


def matmul(F, A, B):
    n, m, l = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(l):
            acc = 0
            for t in range(m):
                a = Ai[t]
                if a:
                    b = B[t][j]
                    if b:
                        acc = F.add(acc, F.mul(a, b))
            row.append(acc)
        out.append(row)
    return out


def det(F, A):
    n = len(A)
    M = [list(r) for r in A]
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = F.neg(d)
        d = F.mul(d, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            if M[i][c]:
                f = F.neg(F.mul(M[i][c], inv))
                M[i] = [F.add(x, F.mul(f, y)) for x, y in zip(M[i], M[c])]
    return d


def inverse(F, A):
    """Inverse, or None when singular."""
    n = len(A)
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    R, pivots = row_reduce(F, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(R) < n:
        return None
    return [row[n:] for row in R]


def charpoly(F, A):
    """Coefficients [a_1, ..., a_n] of X^n + a_1 X^(n-1) + ... + a_n.

    a_i = (-1)^i * (sum of principal i x i minors).
    """
    n = len(A)
    out = []
    for i in range(1, n + 1):
        s = 0
        for idx in combinations(range(n), i):
            s = F.add(s, det(F, [[A[r][c] for c in idx] for r in idx]))
        out.append(F.neg(s) if i % 2 else s)
    return out
