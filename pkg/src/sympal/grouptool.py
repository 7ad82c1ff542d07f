"""Finite matrix groups inside GSp_n(F_q): enumeration and structural tests.

Groups are materialized as sorted stacks of code matrices (numpy arrays of
shape (N, n, n)) so that products, inverses and membership tests over whole
groups are vectorized through the field's lookup tables.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Optional

import numpy as np

from sympal import linalg
from sympal import matbatch as mb
from sympal.errors import SympalError, CapExceeded, CharTwo, MixedAmbient, NotDivisor, NotGSp, Singular
from sympal.ffield import subfield_codes
from sympal.symplectic import (
    Mat,
    Transvection,
    detect_transvection,
    multiplier,
    std_form,
    symplectic_basis,
    transvection_matrix,
)

DEFAULT_CAP = 500_000


class MatGroup:
    """A finite subgroup of GL_n(F) held as a sorted stack of elements."""

    def __init__(self, field, n, arr, generators=None, cap=DEFAULT_CAP):
        self.field = field
        self.n = n
        self.arr = mb.sort_stack(np.asarray(arr, dtype=np.int64).reshape(-1, n, n))
        self._gens = list(generators) if generators is not None else None
        self.cap = cap
        self._keys = None
        self._keyset = None
        self.transvections = None  # filled in by transvection_subgroup

    def __len__(self):
        return len(self.arr)

    order = property(__len__)

    def __repr__(self):
        return f"MatGroup({self.field.descriptor()}, n={self.n}, order={len(self)})"

    def elements(self):
        return [Mat.from_array(self.field, a) for a in self.arr]

    @property
    def keys(self):
        if self._keys is None:
            self._keys = mb.keys(self.arr, self.field.q)
        return self._keys

    @property
    def keyset(self):
        if self._keyset is None:
            self._keyset = set(mb.key_list(self.arr, self.field.q))
        return self._keyset

    def contains_stack(self, A):
        """Boolean mask: which matrices of the stack A lie in the group."""
        k = mb.keys(A, self.field.q)
        if isinstance(k, np.ndarray) and isinstance(self.keys, np.ndarray):
            return np.isin(k, self.keys)
        ks = self.keyset
        return np.array([x in ks for x in k], dtype=bool)

    def __contains__(self, A):
        return bool(self.contains_stack(A.array[None])[0])

    def same_set(self, other):
        return self.field == other.field and self.n == other.n and self.keyset == other.keyset

    def issubset(self, other):
        return bool(other.contains_stack(self.arr).all())

    @property
    def generators(self):
        """Generators as Mats; a greedy generating set is built on demand."""
        if self._gens is None:
            self._gens = _greedy_generators(self)
        return self._gens

    def tables(self):
        return self.field.tables()


def _greedy_generators(G):
    F, n = G.field, G.n
    gens = []
    current = MatGroup(F, n, mb.identity(n)[None], generators=[])
    for a in G.arr:
        if len(current) == len(G):
            break
        if current.contains_stack(a[None])[0]:
            continue
        gens.append(Mat.from_array(F, a))
        current = closure(gens, cap=len(G))
    return gens


def _check_gens(gens):
    F, n = gens[0].field, gens[0].n
    for g in gens:
        if g.field != F or g.n != n:
            raise MixedAmbient("generators live in different ambient groups")
    for g in gens:
        if linalg.det(F, g.rows()) == 0:
            raise Singular("generator is singular")
        if n % 2 == 0:
            multiplier(g)  # raises NotGSp
        else:
            raise NotGSp("odd dimension")
    return F, n


def closure(gens, cap=DEFAULT_CAP, field=None, n=None):
    """Breadth-first closure of the generators under right multiplication."""
    gens = list(gens)
    if not gens:
        if field is None or n is None:
            raise ValueError("empty generator list needs field and n")
        return MatGroup(field, n, mb.identity(n)[None], generators=[], cap=cap)
    F, n = _check_gens(gens)
    T = F.tables()
    q = F.q
    gen_arr = [g.array for g in gens]
    frontier = mb.identity(n)[None]
    seen = set(mb.key_list(frontier, q))
    chunks = [frontier]
    while len(frontier):
        cand = np.concatenate([mb.matmul(T, frontier, g) for g in gen_arr])
        ks = mb.keys(cand, q)
        if isinstance(ks, np.ndarray):
            ks, first = np.unique(ks, return_index=True)
            cand = cand[first]
            ks = ks.tolist()
        fresh = []
        for i, k in enumerate(ks):
            if k not in seen:
                seen.add(k)
                fresh.append(i)
        if len(seen) > cap:
            raise CapExceeded(cap)
        frontier = cand[fresh]
        chunks.append(frontier)
    return MatGroup(F, n, np.concatenate(chunks), generators=gens, cap=cap)


def group_from_stack(field, n, arr, cap=DEFAULT_CAP):
    return MatGroup(field, n, arr, cap=cap)


# standard groups ----------------------------------------------------------------

def _subfield_basis(F, d):
    """An F_p-basis (as codes) of the subfield F_{p^d} of F."""
    if F.k % d:
        raise NotDivisor(f"{d} does not divide {F.k}")
    w = F.pow(F.primitive_element(), (F.q - 1) // (F.p**d - 1))
    out, x = [], 1
    for _ in range(d):
        out.append(x)
        x = F.mul(x, w)
    return out


def sp_generators(F, n, d=None):
    """Transvections generating Sp_n(F_{p^d}) inside GL_n(F)."""
    d = F.k if d is None else d
    h = n // 2
    basis = _subfield_basis(F, d)

    def unit(*idx):
        v = [0] * n
        for i in idx:
            v[i] = 1
        return v

    dirs = [unit(i) for i in range(n)]
    dirs += [unit(i, j) for i in range(h) for j in range(i + 1, h)]
    dirs += [unit(i, h + j) for i in range(h) for j in range(h)]
    return [transvection_matrix(Transvection(F, tuple(v), lam)) for v in dirs for lam in basis]


def gsp_generators(F, n, d=None):
    d = F.k if d is None else d
    h = n // 2
    alpha = F.pow(F.primitive_element(), (F.q - 1) // (F.p**d - 1))
    D = Mat(F, n, [(1 if i < h else alpha) if i == j else 0 for i in range(n) for j in range(n)])
    return sp_generators(F, n, d) + [D]


@lru_cache(maxsize=32)
def sp_group(F, n, d=None):
    return closure(sp_generators(F, n, d))


@lru_cache(maxsize=32)
def gsp_group(F, n, d=None):
    return closure(gsp_generators(F, n, d))


def sp_order(m, q):
    """|Sp_{2m}(F_q)| = q^(m^2) prod_{i<=m} (q^(2i) - 1)."""
    out = q ** (m * m)
    for i in range(1, m + 1):
        out *= q ** (2 * i) - 1
    return out


def gsp_order(m, q):
    return sp_order(m, q) * (q - 1)


def general_linear_2(F, d=None):
    """GL_2(F_{p^d}) inside GL_2(F), by direct enumeration."""
    d = F.k if d is None else d
    T = F.tables()
    S = np.array(subfield_codes(F, d), dtype=np.int64)
    grid = np.stack(np.meshgrid(S, S, S, S, indexing="ij"), axis=-1).reshape(-1, 2, 2)
    det = mb.det2(T, grid)
    return MatGroup(F, 2, grid[det != 0])


def special_linear_2(F, d=None):
    G = general_linear_2(F, d)
    det = mb.det2(F.tables(), G.arr)
    return MatGroup(F, 2, G.arr[det == 1])


def scalar_group(F, n, d=None):
    d = F.k if d is None else d
    S = [c for c in subfield_codes(F, d) if c]
    arr = np.array([np.eye(n, dtype=np.int64) * c for c in S])
    return MatGroup(F, n, arr)


def diagonal_torus(F, n, d=None):
    d = F.k if d is None else d
    S = np.array([c for c in subfield_codes(F, d) if c], dtype=np.int64)
    grid = np.stack(np.meshgrid(*([S] * n), indexing="ij"), axis=-1).reshape(-1, n)
    arr = np.zeros((len(grid), n, n), dtype=np.int64)
    for i in range(n):
        arr[:, i, i] = grid[:, i]
    return MatGroup(F, n, arr)


def product_set(G, H):
    """The set {gh} as a MatGroup-shaped stack (not checked to be a group)."""
    T = G.tables()
    prods = np.concatenate([mb.matmul(T, G.arr, h) for h in H.arr])
    ks = mb.keys(prods, G.field.q)
    if isinstance(ks, np.ndarray):
        _, first = np.unique(ks, return_index=True)
    else:
        seen, first = set(), []
        for i, k in enumerate(ks):
            if k not in seen:
                seen.add(k)
                first.append(i)
    return MatGroup(G.field, G.n, prods[np.sort(first)])


def conjugate_stack(T, arr, C):
    """C^-1 arr C for a stack arr and a single matrix C."""
    Cinv = mb.inverse(T, C[None])[0]
    return mb.matmul(T, mb.matmul(T, Cinv, arr), C)


# transvections and the huge test --------------------------------------------

def find_transvections(G):
    """All transvections in G, as (element array, Transvection) pairs."""
    T = G.tables()
    n = G.n
    D = mb.sub(T, G.arr, mb.identity(n)[None])
    nonzero = (D != 0).reshape(len(D), -1).any(axis=1)
    mask = nonzero & mb.rank_le_one(T, D)
    out = []
    for a in G.arr[mask]:
        t = detect_transvection(Mat.from_array(G.field, a))
        if t is not None:
            out.append((a, t))
    return out


def transvection_subgroup(G):
    """Subgroup generated by the transvections of G; keeps them in .transvections."""
    found = find_transvections(G)
    F, n = G.field, G.n
    gens = []
    current = closure([], field=F, n=n)
    for a, _ in found:
        if current.contains_stack(a[None])[0]:
            continue
        gens.append(Mat.from_array(F, a))
        current = closure(gens, cap=max(len(G), 1))
    current.transvections = [t for _, t in found]
    return current


@dataclass
class HugeReport:
    is_huge: bool
    d: Optional[int]
    conjugator: Optional[Mat]
    transvection_count: int
    transvection_order: int = 1
    search_bound: int = 1
    caveat: str = dc_field(default="")

    def to_json(self):
        return {
            "is_huge": self.is_huge,
            "d": self.d,
            "conjugator": None if self.conjugator is None else self.conjugator.to_json(),
            "transvection_count": self.transvection_count,
            "transvection_order": self.transvection_order,
            "search_bound": self.search_bound,
            "caveat": self.caveat,
        }


def _divisors(k):
    return [d for d in range(1, k + 1) if k % d == 0]


def _apply_stack(T, arr, v):
    """Rows A v for every A in the stack."""
    n = arr.shape[1]
    out = np.empty((len(arr), n), dtype=np.int64)
    for i in range(n):
        acc = T.mul[arr[:, i, 0], v[0]]
        for j in range(1, n):
            acc = T.add[acc, T.mul[arr[:, i, j], v[j]]]
        out[:, i] = acc
    return out


def _conjugator_to_sp(Tgrp, d):
    """C with C^-1 T C = Sp_n(F_{p^d}), or None."""
    F, n = Tgrp.field, Tgrp.n
    target = sp_group(F, n, d)
    if Tgrp.same_set(target):
        return Mat.identity(F, n)
    tabs = F.tables()
    v1 = np.array(Tgrp.transvections[0].v, dtype=np.int64)
    orbit = np.unique(_apply_stack(tabs, Tgrp.arr, v1), axis=0)
    cols = []
    for w in orbit.tolist():
        if not any(w):
            continue
        if linalg.rank(F, cols + [w], n) == len(cols) + 1:
            cols.append(w)
            if len(cols) == n:
                break
    if len(cols) < n:
        return None
    B = Mat(F, n, [cols[j][i] for i in range(n) for j in range(n)])
    gram = B.T * std_form(F, n) * B
    lead = next(x for x in gram.entries if x)
    gram = gram.scale(F.inv(lead))
    if not gram.in_subfield(d):
        return None
    try:
        N = symplectic_basis(gram)
    except SympalError:
        return None
    C = B * N
    conj = MatGroup(F, n, conjugate_stack(tabs, Tgrp.arr, C.array))
    return C if conj.same_set(target) else None


def huge_test(G):
    """Is the transvection subgroup of G conjugate to Sp_n(F_{p^d}) for some d | k?"""
    F, n = G.field, G.n
    if F.p == 2:
        raise CharTwo("the huge test needs odd characteristic")
    T = transvection_subgroup(G)
    count = len(T.transvections)
    caveat = f"subfields searched only inside {F.descriptor()}"
    report = HugeReport(False, None, None, count, len(T), F.k, caveat)
    if count == 0:
        return report
    m = n // 2
    for d in _divisors(F.k):
        if len(T) != sp_order(m, F.p**d):
            continue
        C = _conjugator_to_sp(T, d)
        if C is not None:
            return HugeReport(True, d, C, count, len(T), F.k, caveat)
    return report


# normalizers and centralizers ------------------------------------------------

def _scan(ambient, pred, threads=1):
    arr = ambient.arr
    if threads <= 1 or len(arr) < 2 * threads:
        return pred(arr)
    parts = np.array_split(np.arange(len(arr)), threads)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        masks = list(ex.map(lambda idx: pred(arr[idx]), parts))
    return np.concatenate(masks)


def normalizer_in(H, ambient, threads=1):
    """{A in ambient : A H A^-1 = H}, checked on generators of H."""
    T = ambient.tables()
    gens = [g.array for g in H.generators]

    def pred(A):
        if not gens:
            return np.ones(len(A), dtype=bool)
        Ainv = mb.inverse(T, A)
        ok = np.ones(len(A), dtype=bool)
        for g in gens:
            X = mb.matmul(T, mb.matmul(T, A, g), Ainv)
            ok &= H.contains_stack(X)
        return ok

    mask = _scan(ambient, pred, threads)
    return MatGroup(ambient.field, ambient.n, ambient.arr[mask])


def centralizer_in(H, ambient, threads=1):
    """{A in ambient : AB = BA for all B in H}, checked on generators of H."""
    T = ambient.tables()
    gens = [g.array for g in H.generators]

    def pred(A):
        ok = np.ones(len(A), dtype=bool)
        for g in gens:
            left = mb.matmul(T, A, g)
            right = mb.matmul(T, g, A)
            ok &= (left == right).reshape(len(A), -1).all(axis=1)
        return ok

    mask = _scan(ambient, pred, threads)
    return MatGroup(ambient.field, ambient.n, ambient.arr[mask])


# projective classification ----------------------------------------------------

def projective_keys(G, C=None):
    """Set of canonical projective representatives of G (optionally C^-1 G C)."""
    T = G.tables()
    arr = G.arr if C is None else conjugate_stack(T, G.arr, C.array)
    P = mb.proj_canonical(T, arr)
    return set(mb.key_list(P, G.field.q))


@dataclass
class ProjectiveClass:
    kind: str  # "PSp", "PGSp" or "Other"
    d: Optional[int]
    image_order: int
    report: HugeReport

    @property
    def label(self):
        return self.kind if self.d is None else f"{self.kind}({self.d})"

    def to_json(self):
        return {"label": self.label, "d": self.d, "image_order": self.image_order}


def classify_projective_image(G):
    report = huge_test(G)
    if not report.is_huge:
        return ProjectiveClass("Other", None, len(projective_keys(G)), report)
    F, n, d = G.field, G.n, report.d
    image = projective_keys(G, report.conjugator)
    if image == projective_keys(sp_group(F, n, d)):
        kind = "PSp"
    elif image == projective_keys(gsp_group(F, n, d)):
        kind = "PGSp"
    else:
        return ProjectiveClass("Other", None, len(image), report)
    return ProjectiveClass(kind, d, len(image), report)
