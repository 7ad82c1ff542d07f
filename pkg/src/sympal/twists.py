"""Inner twists of representations of finite groups over F_{p^k} / F_{p^d}.

A representation is stored as a stack of image matrices indexed like the
elements of an abstract :class:`FiniteGroup`. The Galois group of L/K is
cyclic, generated by x -> x^(p^d), so an automorphism is just a Frobenius
power that is a multiple of d.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from math import gcd
from typing import Optional

import numpy as np

from sympal import linalg
from sympal import matbatch as mb
from sympal.errors import (
    CapExceeded,
    DescentFailed,
    MissingFactorization,
    NormObstruction,
    NotDivisor,
    NotIrreducible,
    NotIrreducibleOnI,
    TracesNotInSubfield,
)
from sympal.ffield import FFElem, GaloisAuto, cyclic_characters
from sympal.symplectic import FORM_CONVENTION, Mat, multiplier, std_form, symplectic_basis

GROUP_CAP = 4096


# abstract groups ----------------------------------------------------------------

class FiniteGroup:
    """A finite group given by labels and a multiplication table of indices."""

    def __init__(self, labels, table, check=True):
        self.labels = [str(x) for x in labels]
        self.table = np.asarray(table, dtype=np.int64)
        N = len(self.labels)
        if N > GROUP_CAP:
            raise CapExceeded(GROUP_CAP)
        if self.table.shape != (N, N):
            raise ValueError("table shape does not match the labels")
        if len(set(self.labels)) != N:
            raise ValueError("duplicate labels")
        ids = [e for e in range(N) if (self.table[e] == np.arange(N)).all()]
        if not ids:
            raise ValueError("table has no identity")
        self.identity = ids[0]
        inv = np.argmax(self.table == self.identity, axis=1)
        if check:
            if not (self.table[np.arange(N), inv] == self.identity).all():
                raise ValueError("table has elements without inverses")
            for row in self.table:
                if len(set(row.tolist())) != N:
                    raise ValueError("table is not a Latin square")
            if N <= 256:
                T = self.table
                lhs = T[T[:, :, None], np.arange(N)[None, None, :]]
                rhs = T[np.arange(N)[:, None, None], T[None, :, :]]
                if not (lhs == rhs).all():
                    raise ValueError("table is not associative")
        self.inv = inv
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._gens = None

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"FiniteGroup(order={len(self)})"

    def index(self, label):
        return self._index[str(label)]

    def mul(self, a, b):
        return int(self.table[a, b])

    def element_order(self, g):
        x, k = g, 1
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    def subgroup_closure(self, seeds):
        """Indices of the subgroup generated by the seed indices (sorted)."""
        seeds = sorted(set(int(s) for s in seeds))
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s in seeds:
                    y = int(self.table[x, s])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    @property
    def generators(self):
        """A greedy generating set, in index order."""
        if self._gens is None:
            gens, current = [], {self.identity}
            for g in range(len(self)):
                if len(current) == len(self):
                    break
                if g not in current:
                    gens.append(g)
                    current = set(self.subgroup_closure(gens))
            self._gens = gens
        return self._gens

    def commutator_subgroup(self):
        T, inv = self.table, self.inv
        comm = T[T, T[inv][:, inv]]
        return self.subgroup_closure(np.unique(comm).tolist())

    def subgroup(self, indices):
        """The subgroup on the given indices, as a FiniteGroup, plus the index map."""
        idx = sorted(int(i) for i in indices)
        pos = {g: j for j, g in enumerate(idx)}
        sub = self.table[np.ix_(idx, idx)]
        try:
            table = np.vectorize(pos.__getitem__)(sub)
        except KeyError as exc:
            raise ValueError("indices do not form a subgroup") from exc
        return FiniteGroup([self.labels[i] for i in idx], table, check=False), idx

    def to_json(self):
        return {"labels": self.labels, "table": self.table.tolist()}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["labels"], obj["table"])

    # constructors -------------------------------------------------------------
    @classmethod
    def cyclic(cls, m, name="c"):
        labels = [f"{name}{i}" for i in range(m)]
        table = (np.arange(m)[:, None] + np.arange(m)[None, :]) % m
        return cls(labels, table, check=False)

    @classmethod
    def direct_product(cls, A, B):
        na, nb = len(A), len(B)
        labels = [f"({a},{b})" for a in A.labels for b in B.labels]
        ia = np.repeat(np.arange(na), nb)
        ib = np.tile(np.arange(nb), na)
        table = A.table[ia[:, None], ia[None, :]] * nb + B.table[ib[:, None], ib[None, :]]
        return cls(labels, table, check=False)

    @classmethod
    def from_matgroup(cls, G, prefix="g"):
        """Abstract group of a materialized MatGroup; element i is G.arr[i]."""
        N = len(G)
        if N > GROUP_CAP:
            raise CapExceeded(GROUP_CAP)
        T = G.tables()
        keys = mb.keys(G.arr, G.field.q)
        if isinstance(keys, np.ndarray):
            order = np.argsort(keys)
            sorted_keys = keys[order]

            def lookup(k):
                return order[np.searchsorted(sorted_keys, k)]
        else:
            pos = {k: i for i, k in enumerate(keys)}

            def lookup(k):
                return np.array([pos[x] for x in k])
        table = np.empty((N, N), dtype=np.int64)
        for j in range(N):
            table[:, j] = lookup(mb.keys(mb.matmul(T, G.arr, G.arr[j]), G.field.q))
        return cls([f"{prefix}{i}" for i in range(N)], table, check=False)


# representations --------------------------------------------------------------

class GroupRep:
    """rho: G -> GL_n(L) with K = F_{p^d} marked inside L = F_{p^k}."""

    def __init__(self, group, images, L, d=1, symplectic=False, check=True):
        self.group = group
        self.L = L
        self.d = d
        self.symplectic = symplectic
        if L.k % d:
            raise NotDivisor(f"{d} does not divide {L.k}")
        if isinstance(images, dict):
            images = [images[lab] for lab in group.labels]
        arr = [m.array if isinstance(m, Mat) else np.asarray(m) for m in images]
        self.arr = np.asarray(arr, dtype=np.int64)
        self.n = self.arr.shape[1]
        if len(self.arr) != len(group):
            raise ValueError("need one image per group element")
        if check:
            self._check()

    def _check(self):
        T = self.L.tables()
        for s in self.group.generators:
            lhs = mb.matmul(T, self.arr, self.arr[s])
            rhs = self.arr[self.group.table[:, s]]
            if not (lhs == rhs).all():
                raise ValueError("images do not define a homomorphism")
        if self.symplectic:
            for s in self.group.generators:
                multiplier(self.image(s))

    def image(self, g):
        return Mat.from_array(self.L, self.arr[g])

    def images(self):
        return [self.image(g) for g in range(len(self.group))]

    @property
    def K_degree(self):
        return self.d

    @classmethod
    def from_matgroup(cls, G, d=1, symplectic=False):
        group = FiniteGroup.from_matgroup(G)
        return cls(group, G.arr, G.field, d, symplectic, check=False)

    def traces(self):
        return mb.trace(self.L.tables(), self.arr)

    def multipliers(self):
        """Multiplier codes, one per element (requires the symplectic flag)."""
        h = self.n // 2
        J = std_form(self.L, self.n).array
        T = self.L.tables()
        G = mb.matmul(T, mb.matmul(T, np.transpose(self.arr, (0, 2, 1)), J), self.arr)
        return G[:, 0, h]

    def charpolys(self):
        """(N, n) array of charpoly coefficients a_1..a_n per element."""
        if getattr(self, "_charpolys", None) is None:
            rows = [linalg.charpoly(self.L, a.tolist()) for a in self.arr]
            self._charpolys = np.array(rows, dtype=np.int64)
        return self._charpolys

    def galois(self, power):
        return GroupRep(self.group, self.L.frob_table(power)[self.arr], self.L, self.d,
                        self.symplectic, check=False)

    def twist(self, chi):
        T = self.L.tables()
        arr = T.mul[self.arr, np.asarray(chi.values)[:, None, None]]
        return GroupRep(self.group, arr, self.L, self.d, self.symplectic, check=False)

    def conjugate(self, M):
        """M^-1 rho M."""
        T = self.L.tables()
        Minv = mb.inverse(T, M.array[None])[0]
        arr = mb.matmul(T, mb.matmul(T, Minv, self.arr), M.array)
        return GroupRep(self.group, arr, self.L, self.d, self.symplectic, check=False)

    def restrict(self, indices):
        sub, idx = self.group.subgroup(indices)
        return GroupRep(sub, self.arr[idx], self.L, self.d, self.symplectic, check=False), idx

    def kernel(self):
        eye = mb.identity(self.n)[None]
        return np.flatnonzero((self.arr == eye).reshape(len(self.arr), -1).all(axis=1)).tolist()

    def to_json(self):
        L = self.L
        return {
            "field": L.descriptor(),
            "K_degree": self.d,
            "symplectic": self.symplectic,
            "n": self.n,
            "form": FORM_CONVENTION,
            "group": self.group.to_json(),
            "images": {
                lab: [[L.format_elem(c) for c in row] for row in self.arr[i].tolist()]
                for i, lab in enumerate(self.group.labels)
            },
        }

    @classmethod
    def from_json(cls, obj):
        """Accepts a full table, or matrix generators closed via grouptool."""
        from sympal import grouptool
        from sympal.ffield import parse_field

        L = parse_field(obj["field"])
        d = int(obj.get("K_degree", 1))
        symp = bool(obj.get("symplectic", False))
        grp = obj["group"]
        if "generators" in grp:
            gens = [Mat.from_rows(L, rows) for rows in grp["generators"]]
            G = grouptool.closure(gens, cap=GROUP_CAP)
            return cls.from_matgroup(G, d, symp)
        group = FiniteGroup.from_json(grp)
        images = [Mat.from_rows(L, obj["images"][lab]) for lab in group.labels]
        return cls(group, images, L, d, symp)


def is_absolutely_irreducible(rep):
    """Burnside: the images span all of M_n(L)."""
    n = rep.n
    rows = []
    basis_rank = 0
    for a in rep.arr:
        cand = rows + [a.reshape(-1).tolist()]
        r = linalg.rank(rep.L, cand, n * n)
        if r > basis_rank:
            rows, basis_rank = linalg.row_reduce(rep.L, cand, n * n)[0], r
            if r == n * n:
                return True
    return basis_rank == n * n


# characters -------------------------------------------------------------------

@dataclass(frozen=True)
class Character:
    """A homomorphism G -> L^x, by its value codes in group index order."""

    group: FiniteGroup = dc_field(compare=False, hash=False, repr=False)
    field: object = dc_field(repr=False)
    values: tuple

    def __call__(self, g):
        if isinstance(g, str):
            g = self.group.index(g)
        return FFElem(self.field, self.values[g])

    def __mul__(self, other):
        F = self.field
        return Character(self.group, F, tuple(F.mul(a, b) for a, b in zip(self.values, other.values)))

    def inverse(self):
        F = self.field
        return Character(self.group, F, tuple(F.inv(a) for a in self.values))

    def galois(self, power):
        F = self.field
        return Character(self.group, F, tuple(F.frob(a, power) for a in self.values))

    def is_trivial(self):
        return all(v == 1 for v in self.values)

    def order(self):
        out = 1
        for v in set(self.values):
            m = self.field.mult_order(v)
            out = out * m // gcd(out, m)
        return out

    def kernel(self):
        return [i for i, v in enumerate(self.values) if v == 1]

    def to_json(self):
        F = self.field
        return {lab: F.format_elem(v) for lab, v in zip(self.group.labels, self.values)}

    @classmethod
    def trivial(cls, group, field):
        return cls(group, field, tuple([1] * len(group)))


def abelianization(group):
    """(coset id per element, quotient group, coset representatives)."""
    D = group.commutator_subgroup()
    T = group.table
    coset_min = T[:, D].min(axis=1)
    reps = sorted(set(coset_min.tolist()))
    pos = {r: i for i, r in enumerate(reps)}
    coset = np.array([pos[c] for c in coset_min.tolist()], dtype=np.int64)
    qtable = coset[T[np.ix_(reps, reps)]]
    Q = FiniteGroup([group.labels[r] for r in reps], qtable, check=False)
    return coset, Q, reps


def enumerate_characters(rep_or_group, L=None):
    """All homomorphisms G -> L^x, via the abelianization G/[G, G]."""
    if isinstance(rep_or_group, GroupRep):
        group, L = rep_or_group.group, rep_or_group.L
    else:
        group = rep_or_group
    coset, Q, _ = abelianization(group)
    T = L.tables()
    gens = Q.generators
    # BFS spanning tree of Q over its generators
    parent = {Q.identity: None}
    order = [Q.identity]
    for x in order:
        for i, s in enumerate(gens):
            y = Q.mul(x, s)
            if y not in parent:
                parent[y] = (x, i)
                order.append(y)
    choices = [[c.value for c in cyclic_characters(Q.element_order(s), L)] for s in gens]
    out = []

    def assign(k, acc):
        if k == len(gens):
            val = np.zeros(len(Q), dtype=np.int64)
            val[Q.identity] = 1
            for y in order[1:]:
                x, i = parent[y]
                val[y] = T.mul[val[x], acc[i]]
            for i, s in enumerate(gens):
                if not (val[Q.table[:, s]] == T.mul[val, acc[i]]).all():
                    return
            out.append(Character(group, L, tuple(val[coset].tolist())))
            return
        for c in choices[k]:
            assign(k + 1, acc + [c])

    assign(0, [])
    out.sort(key=lambda ch: ch.values)
    return out


def character_count_oracle(group, L):
    """|Hom(G, L^x)| = #{x in G^ab : x^(q-1) = 1}, independent of enumeration."""
    _, Q, _ = abelianization(group)
    m = L.q - 1
    return sum(1 for x in range(len(Q)) if m % Q.element_order(x) == 0)


# inner twists -------------------------------------------------------------------

@dataclass(frozen=True)
class InnerTwist:
    gamma: GaloisAuto
    epsilon: Character

    @property
    def power(self):
        return self.gamma.power

    def __mul__(self, other):
        """(g1, e1)(g2, e2) = (g1 g2, g1(e2) e1)."""
        return InnerTwist(self.gamma * other.gamma, other.epsilon.galois(self.power) * self.epsilon)

    def inverse(self):
        gi = self.gamma.inverse()
        return InnerTwist(gi, self.epsilon.inverse().galois(gi.power))

    def key(self):
        return (self.power, self.epsilon.values)

    def to_json(self):
        return {"gamma_power": self.power, "epsilon": self.epsilon.to_json()}


@dataclass
class TwistAnalysis:
    stabilizer: list
    gamma_group: list  # Frobenius powers
    delta_group: list
    eps_group: list  # characters epsilon with (1, epsilon) in the stabilizer
    K_degree: int
    E_degree: int
    has_cm: bool
    I_subgroup: list  # element indices
    H_subgroup: list

    def labels(self, group, which):
        return [group.labels[i] for i in getattr(self, which)]

    def to_json(self, group):
        return {
            "twists": [t.to_json() for t in self.stabilizer],
            "gamma_group": self.gamma_group,
            "delta_group": self.delta_group,
            "K_degree": self.K_degree,
            "E_degree": self.E_degree,
            "has_cm": self.has_cm,
            "I_subgroup": self.labels(group, "I_subgroup"),
            "H_subgroup": self.labels(group, "H_subgroup"),
        }


def _fixed_degree(powers, k):
    """Degree of the fixed field of the cyclic group of Frobenius powers."""
    pos = [p for p in powers if p]
    return min(pos) if pos else k


def _kernel_intersection(chars, N):
    keep = np.ones(N, dtype=bool)
    for ch in chars:
        keep &= np.asarray(ch.values) == 1
    return np.flatnonzero(keep).tolist()


def inner_twist_stabilizer(rep, characters=None):
    """All (gamma, eps) with gamma(tr rho(g)) = tr rho(g) eps(g) for every g."""
    if not is_absolutely_irreducible(rep):
        raise NotIrreducible("representation is not absolutely irreducible")
    L, d = rep.L, rep.d
    T = L.tables()
    chars = enumerate_characters(rep) if characters is None else characters
    E = np.array([c.values for c in chars], dtype=np.int64)
    tr = rep.traces()
    stab = []
    for power in range(0, L.k, d):
        ftr = L.frob_table(power)[tr] if power else tr
        ok = (T.mul[tr[None, :], E] == ftr[None, :]).all(axis=1)
        for c in np.flatnonzero(ok):
            stab.append(InnerTwist(GaloisAuto(L, power), chars[c]))
    gamma = sorted({t.power for t in stab})
    delta = sorted({t.power for t in stab if t.epsilon.is_trivial()})
    eps = [t.epsilon for t in stab if t.power == 0]
    N = len(rep.group)
    return TwistAnalysis(
        stabilizer=stab,
        gamma_group=gamma,
        delta_group=delta,
        eps_group=eps,
        K_degree=_fixed_degree(gamma, L.k),
        E_degree=_fixed_degree(delta, L.k),
        has_cm=len(eps) > 1,
        I_subgroup=_kernel_intersection([t.epsilon for t in stab], N),
        H_subgroup=_kernel_intersection(eps, N),
    )


def charpoly_twist_check(rep, tw):
    """gamma(a_i(g)) = eps(g)^i a_i(g) for all g and i."""
    L = rep.L
    T = L.tables()
    A = rep.charpolys()
    eps = np.asarray(tw.epsilon.values)
    lhs = L.frob_table(tw.power)[A] if tw.power else A
    epow = np.ones_like(eps)
    for i in range(rep.n):
        epow = T.mul[epow, eps]
        if not (lhs[:, i] == T.mul[epow, A[:, i]]).all():
            return False
    return True


def self_twist_vanishing_check(rep, eps):
    """For a self-twist eps: a_i(g) != 0 implies eps(g)^i = 1."""
    T = rep.L.tables()
    A = rep.charpolys()
    e = np.asarray(eps.values)
    epow = np.ones_like(e)
    for i in range(rep.n):
        epow = T.mul[epow, e]
        if ((A[:, i] != 0) & (epow != 1)).any():
            return False
    return True


def _subfield_degree_of(L, codes, base):
    """Least e with base | e | k such that all codes lie in F_{p^e}."""
    for e in range(base, L.k + 1, base):
        if L.k % e:
            continue
        if all(L.frob(c, e) == c for c in codes):
            return e
    return L.k


def epsilon_order_check(rep, analysis, psi=None, symplectic_clause=False):
    """Self-twist orders divide n; optionally, twist values lie in K(values of psi)."""
    if any(rep.n % e.order() for e in analysis.eps_group):
        return False
    if symplectic_clause:
        if psi is None:
            raise MissingFactorization("symplectic clause needs the finite-order part psi")
        e = _subfield_degree_of(rep.L, set(psi.values), rep.d)
        for t in analysis.stabilizer:
            if any(rep.L.frob(v, e) != v for v in set(t.epsilon.values)):
                return False
    return True


def kernel_character_check(rep, analysis):
    ker = rep.kernel()
    return all(t.epsilon.values[g] == 1 for t in analysis.stabilizer for g in ker)


def trace_field_degree(rep):
    """Degree of the field generated over K by traces (and multipliers if symplectic)."""
    codes = set(rep.traces().tolist())
    if rep.symplectic:
        codes |= set(rep.multipliers().tolist())
    return _subfield_degree_of(rep.L, codes, rep.d)


# intertwiners ----------------------------------------------------------------------

def intertwiner_space(L, A, B, gens):
    """Basis of {P : A(g) P = P B(g) for g in gens}, as Mats."""
    n = A.shape[1]
    eqs = []
    for g in gens:
        a, b = A[g].tolist(), B[g].tolist()
        # (A P - P B)_{ij} = sum_k A_ik P_kj - P_ik B_kj, unknown P_xy at x*n+y
        for i in range(n):
            for j in range(n):
                row = [0] * (n * n)
                for k in range(n):
                    row[k * n + j] = L.add(row[k * n + j], a[i][k])
                    row[i * n + k] = L.sub(row[i * n + k], b[k][j])
                eqs.append(row)
    return [Mat(L, n, v) for v in linalg.nullspace(L, eqs, n * n)]


def find_intertwiner(L, A, B, gens, seed=0, tries=32):
    """An invertible P with A(g) P = P B(g), or None."""
    basis = intertwiner_space(L, A, B, gens)
    if not basis:
        return None
    for P in basis:
        if P.det().value:
            return P
    rng = random.Random(seed)
    n = basis[0].n
    for _ in range(tries):
        acc = Mat(L, n, [0] * (n * n))
        for P in basis:
            acc = acc + P.scale(rng.randrange(L.q))
        if acc.det().value:
            return acc
    return None


def twist_is_isomorphism(rep, tw, seed=0):
    """Independent check that gamma(rho) and rho (x) eps are conjugate."""
    A = rep.galois(tw.power).arr
    B = rep.twist(tw.epsilon).arr
    return find_intertwiner(rep.L, A, B, rep.group.generators, seed) is not None


# descent ---------------------------------------------------------------------------

def _norm_preimage(L, d, c):
    """a in L with N_{L/F_{p^d}}(a) = c, for c in F_{p^d}^x."""
    log, exp = L.log_exp()
    e = (L.q - 1) // (L.p**d - 1)
    t = int(log[c])
    if t % e:
        raise NormObstruction("element is not in the subfield")
    return int(exp[t // e])


def _in_subfield(L, arr, d):
    return (L.frob_table(d)[arr] == arr).all() if d % L.k else True


def descend_to_subfield(rep, d, seed=0, tries=64):
    """(rep', M) with rep' = M^-1 rep M defined over F_{p^d}."""
    L = rep.L
    if L.k % d:
        raise NotDivisor(f"{d} does not divide {L.k}")
    n = rep.n
    tr = rep.traces()
    if not _in_subfield(L, tr, d):
        raise TracesNotInSubfield(f"some trace is outside F_{L.p}^{d}")
    if rep.symplectic and not _in_subfield(L, rep.multipliers(), d):
        raise TracesNotInSubfield("some multiplier is outside the subfield")
    if _in_subfield(L, rep.arr, d):
        return rep, Mat.identity(L, n)
    if not is_absolutely_irreducible(rep):
        raise NotIrreducible("descent needs an absolutely irreducible representation")
    T = L.tables()
    gens = rep.group.generators
    m = L.k // d
    phi = L.frob_table(d)
    # P with phi(rho) P = P rho
    P = find_intertwiner(L, phi[rep.arr], rep.arr, gens, seed)
    if P is None:
        raise DescentFailed("no intertwiner between rho and its Frobenius conjugate")
    Q = P
    for i in range(1, m):
        Q = Mat(L, n, L.frob_table(d * i)[P.array].reshape(-1)) * Q
    c = Q.entries[0]
    if Q != Mat.identity(L, n).scale(c):
        raise DescentFailed("cocycle product is not scalar")
    P = P.scale(_norm_preimage(L, d, L.inv(c)))
    Pinv = P.inv()
    coeffs = [Mat.identity(L, n)]
    for _ in range(1, m):
        prev = coeffs[-1]
        coeffs.append(Pinv * Mat(L, n, phi[prev.array].reshape(-1)))
    rng = random.Random(seed)
    for _ in range(tries):
        X = np.array([rng.randrange(L.q) for _ in range(n * n)], dtype=np.int64).reshape(n, n)
        acc = np.zeros((n, n), dtype=np.int64)
        Xi = X
        for Ci in coeffs:
            acc = T.add[acc, mb.matmul(T, Ci.array, Xi)[0]]
            Xi = phi[Xi]
        M = Mat.from_array(L, acc)
        if M.det().value:
            break
    else:
        raise DescentFailed(f"no invertible averaged matrix after {tries} tries")
    out = rep.conjugate(M)
    if not _in_subfield(L, out.arr, d):
        raise DescentFailed("conjugated images are not over the subfield")
    if rep.symplectic:
        I = M.T * std_form(L, n) * M
        lead = next(x for x in I.entries if x)
        I = I.scale(L.inv(lead))
        if not I.in_subfield(d):
            raise DescentFailed("invariant form is not defined over the subfield")
        N = symplectic_basis(I)
        M = M * N
        out = rep.conjugate(M)
    return out, M


def hilbert90(L, d, c):
    """a != 0 with c = a / phi(a), phi = x -> x^(p^d), for c of norm 1 to F_{p^d}."""
    m = L.k // d
    norm, x = 1, c
    for _ in range(m):
        norm = L.mul(norm, x)
        x = L.frob(x, d)
    if norm != 1:
        raise NormObstruction("cocycle value has norm different from 1")
    for b in range(1, L.q):
        a, prod, bb, cj = 0, 1, b, c
        for _ in range(m):
            a = L.add(a, L.mul(prod, bb))
            prod = L.mul(prod, cj)
            cj = L.frob(cj, d)
            bb = L.frob(bb, d)
        if a:
            return a
    raise NormObstruction("no nonzero averaging sum found")


@dataclass
class ProjectiveDescent:
    images: list  # canonical projective representatives, one Mat per element
    K_degree: int
    conjugator: Mat
    scalars: list  # a_g codes

    def to_json(self, group):
        return {
            "K_degree": self.K_degree,
            "conjugator": self.conjugator.to_json(),
            "images": {lab: m.to_json()["rows"] for lab, m in zip(group.labels, self.images)},
        }


def descend_projective(rep, analysis=None, seed=0):
    """Projective model of rep with every entry in K_[rho]."""
    L = rep.L
    T = L.tables()
    an = inner_twist_stabilizer(rep) if analysis is None else analysis
    e = an.K_degree
    sub, _ = rep.restrict(an.I_subgroup)
    if not is_absolutely_irreducible(sub):
        raise NotIrreducibleOnI("restriction to the common kernel is not absolutely irreducible")
    sub = GroupRep(sub.group, sub.arr, L, e, rep.symplectic, check=False)
    _, M = descend_to_subfield(sub, e, seed=seed)
    rho = rep.conjugate(M)
    phi_power = e % L.k
    if phi_power == 0:
        scal = [1] * len(rep.group)
    else:
        tw = next(t for t in an.stabilizer if t.power == phi_power)
        # gamma(rho') = rho' (x) eps must now hold exactly
        if not (L.frob_table(phi_power)[rho.arr] == rho.twist(tw.epsilon).arr).all():
            raise NormObstruction("conjugated model does not satisfy the twist identity")
        scal = [hilbert90(L, e, c) for c in tw.epsilon.values]
    arr = T.mul[rho.arr, np.asarray(scal, dtype=np.int64)[:, None, None]]
    proj = mb.proj_canonical(T, arr)
    if not _in_subfield(L, proj, e):
        raise NormObstruction("projective model leaves the projective field")
    images = [Mat.from_array(L, a) for a in proj]
    return ProjectiveDescent(images, e, M, scal)


def projective_image_keys(L, arr):
    return set(mb.key_list(mb.proj_canonical(L.tables(), arr), L.q))


__all__ = [
    "Character",
    "FiniteGroup",
    "GroupRep",
    "InnerTwist",
    "ProjectiveDescent",
    "TwistAnalysis",
    "charpoly_twist_check",
    "descend_projective",
    "descend_to_subfield",
    "enumerate_characters",
    "epsilon_order_check",
    "hilbert90",
    "inner_twist_stabilizer",
    "is_absolutely_irreducible",
    "kernel_character_check",
]
