"""Matrices over finite fields, GSp_n multipliers and symplectic transvections.

The alternating form is fixed once for the whole package: its Gram matrix is
J = [[0, I], [-I, 0]] with blocks of size n/2, so <u, v> = u^T J v.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from sympal import linalg
from sympal.errors import (
    Degenerate,
    NotAlternating,
    NotGSp,
    Singular,
    ZeroDirection,
    ZeroMatrix,
    ZeroParameter,
)
from sympal.ffield import FFElem, parse_field

FORM_CONVENTION = "J=[[0,I],[-I,0]]"


def _code(F, x):
    if isinstance(x, FFElem):
        return x.value
    if isinstance(x, str):
        return F.parse_elem(x)
    return F.embed_int(int(x))


class Mat:
    """Immutable square matrix over a finite field, stored as codes row-major."""

    __slots__ = ("field", "n", "entries", "__dict__")

    def __init__(self, field, n, entries):
        self.field = field
        self.n = n
        self.entries = tuple(int(e) for e in entries)
        if len(self.entries) != n * n:
            raise ValueError(f"expected {n * n} entries, got {len(self.entries)}")

    # construction -----------------------------------------------------------
    @classmethod
    def from_rows(cls, field, rows):
        """Rows may hold ints (read mod p), FFElems or element strings."""
        n = len(rows)
        flat = []
        for r in rows:
            if len(r) != n:
                raise ValueError("matrix must be square")
            flat.extend(_code(field, x) for x in r)
        return cls(field, n, flat)

    @classmethod
    def from_codes(cls, field, rows):
        n = len(rows)
        return cls(field, n, [c for r in rows for c in r])

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def scalar(cls, field, n, c):
        c = _code(field, c)
        return cls(field, n, [c if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def from_array(cls, field, arr):
        arr = np.asarray(arr)
        return cls(field, arr.shape[0], arr.reshape(-1).tolist())

    # views --------------------------------------------------------------------
    def rows(self):
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def entry(self, i, j):
        return FFElem(self.field, self.entries[i * self.n + j])

    @cached_property
    def array(self):
        return np.array(self.entries, dtype=np.int64).reshape(self.n, self.n)

    def __eq__(self, other):
        return isinstance(other, Mat) and self.field == other.field and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __lt__(self, other):
        return self.entries < other.entries

    def __repr__(self):
        F = self.field
        body = "; ".join(" ".join(F.format_elem(c) for c in r) for r in self.rows())
        return f"Mat[{F.descriptor()}]({body})"

    # arithmetic ---------------------------------------------------------------
    def __mul__(self, other):
        F = self.field
        if isinstance(other, Mat):
            if other.field != F or other.n != self.n:
                raise ValueError("incompatible matrices")
            return Mat.from_codes(F, linalg.matmul(F, self.rows(), other.rows()))
        c = _code(F, other)
        return Mat(F, self.n, [F.mul(c, x) for x in self.entries])

    def scale(self, c):
        """Multiply by the field element with code c."""
        F = self.field
        return Mat(F, self.n, [F.mul(c, x) for x in self.entries])

    def __rmul__(self, other):
        return self.__mul__(other)

    def __add__(self, other):
        F = self.field
        return Mat(F, self.n, [F.add(a, b) for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        F = self.field
        return Mat(F, self.n, [F.sub(a, b) for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        F = self.field
        return Mat(F, self.n, [F.neg(a) for a in self.entries])

    def apply_vec(self, v):
        F = self.field
        return [
            _dot(F, self.entries[i * self.n:(i + 1) * self.n], v) for i in range(self.n)
        ]

    @property
    def T(self):
        n = self.n
        return Mat(self.field, n, [self.entries[j * n + i] for i in range(n) for j in range(n)])

    def det(self):
        return FFElem(self.field, linalg.det(self.field, self.rows()))

    def inv(self):
        inv = linalg.inverse(self.field, self.rows())
        if inv is None:
            raise Singular("matrix is singular")
        return Mat.from_codes(self.field, inv)

    def rank(self):
        return linalg.rank(self.field, self.rows(), self.n)

    def trace(self):
        F = self.field
        acc = 0
        for i in range(self.n):
            acc = F.add(acc, self.entries[i * self.n + i])
        return FFElem(F, acc)

    def charpoly(self):
        """[a_1, ..., a_n] with charpoly X^n + a_1 X^(n-1) + ... + a_n."""
        return [FFElem(self.field, a) for a in linalg.charpoly(self.field, self.rows())]

    def frob(self, i):
        F = self.field
        return Mat(F, self.n, [F.frob(a, i) for a in self.entries])

    def is_zero(self):
        return not any(self.entries)

    def in_subfield(self, d):
        F = self.field
        return all(F.frob(a, d) == a for a in self.entries)

    # serialization --------------------------------------------------------------
    def to_json(self):
        F = self.field
        return {
            "field": F.descriptor(),
            "n": self.n,
            "form": FORM_CONVENTION,
            "rows": [[F.format_elem(c) for c in r] for r in self.rows()],
        }

    @classmethod
    def from_json(cls, obj, field=None):
        F = field if field is not None else parse_field(obj["field"])
        M = cls.from_rows(F, obj["rows"])
        if "n" in obj and obj["n"] != M.n:
            raise ValueError("declared n does not match rows")
        return M


def _dot(F, a, b):
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = F.add(acc, F.mul(x, y))
    return acc


def std_form(field, n):
    """Gram matrix J of the standard alternating form."""
    if n % 2 or n < 2:
        raise ValueError("symplectic dimension must be even and >= 2")
    h = n // 2
    minus_one = field.neg(1)
    entries = [0] * (n * n)
    for i in range(h):
        entries[i * n + h + i] = 1
        entries[(h + i) * n + i] = minus_one
    return Mat(field, n, entries)


def pairing(field, u, v):
    """<u, v> = u^T J v on code vectors."""
    h = len(u) // 2
    acc = 0
    for i in range(h):
        acc = field.add(acc, field.mul(u[i], v[h + i]))
        acc = field.sub(acc, field.mul(u[h + i], v[i]))
    return acc


def multiplier(A):
    """The scalar m with A^T J A = m J, as an FFElem."""
    F = A.field
    if A.n % 2:
        raise NotGSp("odd dimension")
    if linalg.det(F, A.rows()) == 0:
        raise Singular("matrix is singular")
    J = std_form(F, A.n)
    G = A.T * J * A
    h = A.n // 2
    m = G.entries[h]  # entry (0, h) of m*J is m
    if G != J.scale(m):
        raise NotGSp("matrix does not preserve the form up to a scalar")
    return FFElem(F, m)


def is_gsp(A):
    try:
        multiplier(A)
    except (NotGSp, Singular):
        return False
    return True


@dataclass(frozen=True)
class Transvection:
    """u -> u + lam <u, v> v, with codes for v and lam."""

    field: object
    v: tuple
    lam: int

    def matrix(self):
        return transvection_matrix(self)


def transvection_matrix(t):
    F = t.field
    v = list(t.v)
    n = len(v)
    if not any(v):
        raise ZeroDirection("direction vector is zero")
    if t.lam == 0:
        raise ZeroParameter("parameter must be nonzero")
    Jv = std_form(F, n).apply_vec(v)
    # T = I + lam * v (Jv)^T since <u, v> = (Jv) . u
    entries = []
    for i in range(n):
        for j in range(n):
            e = F.mul(t.lam, F.mul(v[i], Jv[j]))
            entries.append(F.add(e, 1) if i == j else e)
    return Mat(F, n, entries)


def canonical_transvection(field, v, lam):
    """Rescale so the first nonzero coordinate of v is 1 (T_{cv}[l] = T_v[c^2 l])."""
    c = next(x for x in v if x)
    cinv = field.inv(c)
    return Transvection(field, tuple(field.mul(cinv, x) for x in v), field.mul(lam, field.mul(c, c)))


def detect_transvection(A):
    """Canonical Transvection if A = T_v[lam] for some v, lam; else None."""
    F, n = A.field, A.n
    if n % 2:
        return None
    D = A - Mat.identity(F, n)
    rows = D.rows()
    nonzero = [r for r in rows if any(r)]
    if not nonzero:
        return None
    if linalg.rank(F, rows, n) != 1:
        return None
    # rank 1: D = x y^T, y taken from the first nonzero row
    y = nonzero[0]
    jpiv = next(j for j, c in enumerate(y) if c)
    yinv = F.inv(y[jpiv])
    x = [F.mul(r[jpiv], yinv) for r in rows]
    # need y = c * J x
    Jx = std_form(F, n).apply_vec(x)
    jj = next((j for j, c in enumerate(Jx) if c), None)
    if jj is None or y[jj] == 0:
        return None
    c = F.div(y[jj], Jx[jj])
    if any(y[j] != F.mul(c, Jx[j]) for j in range(n)):
        return None
    t = canonical_transvection(F, x, c)
    if transvection_matrix(t) != A:
        return None
    return t


def symplectic_basis(I):
    """N with N^T I N = J for a nondegenerate alternating Gram matrix I."""
    F, n = I.field, I.n
    if n % 2:
        raise Degenerate("odd dimension")
    rows = I.rows()
    for i in range(n):
        if rows[i][i] != 0:
            raise NotAlternating("nonzero diagonal entry")
        for j in range(i + 1, n):
            if rows[i][j] != F.neg(rows[j][i]):
                raise NotAlternating("matrix is not antisymmetric")
    if linalg.det(F, rows) == 0:
        raise Degenerate("form is degenerate")

    def form(u, v):
        return _dot(F, u, I.apply_vec(v))

    pool = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    es, fs = [], []
    while pool:
        e = pool.pop(0)
        idx = next((k for k, w in enumerate(pool) if form(e, w)), None)
        if idx is None:
            raise Degenerate("form is degenerate")
        f = pool.pop(idx)
        s = F.inv(form(e, f))
        f = [F.mul(s, x) for x in f]
        new_pool = []
        for w in pool:
            a = form(f, w)
            b = F.neg(form(e, w))
            w2 = [F.add(F.add(wi, F.mul(a, ei)), F.mul(b, fi)) for wi, ei, fi in zip(w, e, f)]
            new_pool.append(w2)
        pool = [w for w in new_pool if any(w)]
        es.append(e)
        fs.append(f)
    cols = es + fs
    return Mat(F, n, [cols[j][i] for i in range(n) for j in range(n)])


def proj_canonical(A):
    """The scalar multiple of A whose first nonzero entry (row-major) is 1."""
    F = A.field
    lead = next((x for x in A.entries if x), None)
    if lead is None:
        raise ZeroMatrix("zero matrix has no projective class")
    if lead == 1:
        return A
    return A.scale(F.inv(lead))
