"""Artin-type mock compatible systems over cyclotomic integer rings.

A system is one finite-image representation H -> GL_n(Z[zeta_N][1/m]) with
abstract Frobenius labels pointing into H. Reducing it at a prime lambda | ell
gives a GroupRep over the residue field, which the twist machinery analyses.
The cyclotomic-character factor of the multiplier cannot occur for finite
images; the exponent ``a`` is carried as metadata only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from sympal import polyfp
from sympal.cyclo import CycloElem, euler_phi, mult_order
from sympal.errors import (
    BadPrime,
    NoMultiplier,
    NotIrreducible,
    NotPrime,
    NotSurjective,
    Ramified,
    SympalError,
)
from sympal.ffield import ff_make
from sympal.twists import (
    FiniteGroup,
    GroupRep,
    abelianization,
    descend_to_subfield,
    inner_twist_stabilizer,
    is_absolutely_irreducible,
)

MULTIPLIER_NOTE = "multiplier checked against psi alone; the cyclotomic factor is metadata for finite images"


# the ring Z[zeta_N] --------------------------------------------------------------

@dataclass(frozen=True)
class NumberRing:
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("conductor must be positive")

    @property
    def degree(self):
        return euler_phi(self.N)

    @property
    def roots_of_unity(self):
        """Order of the torsion of Q(zeta_N)^x."""
        return self.N if self.N % 2 == 0 else 2 * self.N

    def units(self):
        return [u for u in range(1, max(self.N, 2)) if gcd(u, self.N) == 1]

    def root(self, k):
        """zeta_M^k with M = roots_of_unity, as an element of Q(zeta_N)."""
        M = self.roots_of_unity
        k %= M
        if M == self.N:
            return CycloElem.zeta_power(self.N, k)
        # odd N: zeta_{2N} = -zeta_N^((N + 1)/2)
        base = -CycloElem.zeta_power(self.N, (self.N + 1) // 2)
        return base**k

    def elem(self, coeffs):
        return CycloElem(self.N, [Fraction(c) for c in coeffs])

    def compose(self, u, v):
        return (u * v) % self.N


def _mat_mul(A, B):
    n = len(A)
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(1, n)), A[i][0] * B[0][j])
                       for j in range(n)) for i in range(n))


def _mat_key(A):
    return tuple(x.coeffs for row in A for x in row)


def _trace(A):
    acc = A[0][0]
    for i in range(1, len(A)):
        acc = acc + A[i][i]
    return acc


def _identity(N, n):
    one, zero = CycloElem.rational(N, 1), CycloElem.rational(N, 0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def closure_over_ring(N, gens, cap=4096):
    """Elements (BFS order from the identity) and multiplication table."""
    n = len(gens[0])
    elems = [_identity(N, n)]
    pos = {_mat_key(elems[0]): 0}
    i = 0
    while i < len(elems):
        for g in gens:
            y = _mat_mul(elems[i], g)
            k = _mat_key(y)
            if k not in pos:
                if len(elems) >= cap:
                    raise ValueError("group exceeds the cap")
                pos[k] = len(elems)
                elems.append(y)
        i += 1
    table = np.array([[pos[_mat_key(_mat_mul(a, b))] for b in elems] for a in elems], dtype=np.int64)
    return elems, table


def _form(N, n):
    h = n // 2
    one, zero = CycloElem.rational(N, 1), CycloElem.rational(N, 0)
    rows = [[zero] * n for _ in range(n)]
    for i in range(h):
        rows[i][h + i] = one
        rows[h + i][i] = -one
    return tuple(tuple(r) for r in rows)


def ring_multiplier(A):
    """m with A^T J A = m J, or None if A is not in GSp."""
    n = len(A)
    if n % 2:
        return None
    J = _form(A[0][0].N, n)
    At = tuple(tuple(A[j][i] for j in range(n)) for i in range(n))
    G = _mat_mul(_mat_mul(At, J), A)
    m = G[0][n // 2]
    if any(G[i][j] != m * J[i][j] for i in range(n) for j in range(n)) or m.is_zero():
        return None
    return m


# systems -------------------------------------------------------------------------

@dataclass
class MockSystem:
    ring: NumberRing
    group: FiniteGroup
    images: list  # per group element, a tuple of rows of CycloElem
    frob: dict  # prime label -> group element label
    S: tuple = ()
    psi: dict = None  # group label -> exponent k of zeta_M^k
    a: int = 0
    symplectic: bool = False

    def __post_init__(self):
        if len(self.images) != len(self.group):
            raise ValueError("need one image per group element")
        for lab, g in self.frob.items():
            if lab in self.S:
                raise ValueError(f"label {lab} is exceptional")
            self.group.index(g)

    @property
    def n(self):
        return len(self.images[0])

    def image_of(self, label):
        return self.images[self.group.index(self.frob[label])]

    def a_p(self, label):
        return _trace(self.image_of(label))

    def psi_value(self, label):
        return self.ring.root(self.psi[self.frob[label]])

    def to_json(self):
        def elem(x):
            return [str(c) for c in x.coeffs]
        return {
            "ring": {"N": self.ring.N},
            "group": self.group.to_json(),
            "images": {lab: [[elem(x) for x in row] for row in img]
                       for lab, img in zip(self.group.labels, self.images)},
            "frob": dict(sorted(self.frob.items())),
            "S": list(self.S),
            "psi": None if self.psi is None else dict(self.psi),
            "a": self.a,
            "symplectic": self.symplectic,
        }

    @classmethod
    def from_json(cls, obj):
        ring = NumberRing(int(obj["ring"]["N"]))
        group = FiniteGroup.from_json(obj["group"])
        images = [tuple(tuple(ring.elem(x) for x in row) for row in obj["images"][lab])
                  for lab in group.labels]
        return cls(ring, group, images, dict(obj["frob"]), tuple(obj.get("S", ())),
                   obj.get("psi"), int(obj.get("a", 0)), bool(obj.get("symplectic", False)))


def conjugacy_classes(group):
    T, inv = group.table, group.inv
    seen, classes = set(), []
    for g in range(len(group)):
        if g in seen:
            continue
        cls_ = sorted({int(T[T[h, g], inv[h]]) for h in range(len(group))})
        seen.update(cls_)
        classes.append(cls_)
    return classes


def _check_surjective(sys):
    hit = {sys.group.index(g) for g in sys.frob.values()}
    missing = [c[0] for c in conjugacy_classes(sys.group) if not hit & set(c)]
    if missing:
        raise NotSurjective(f"no Frobenius label in the class of {sys.group.labels[missing[0]]}")


def ring_characters(group, M):
    """All homomorphisms group -> mu_M, as exponent tuples mod M."""
    coset, Q, _ = abelianization(group)
    gens = Q.generators
    orders = [Q.element_order(s) for s in gens]
    out = []

    def assign(k, acc):
        if k == len(gens):
            val = {Q.identity: 0}
            frontier = [Q.identity]
            while frontier:
                nxt = []
                for x in frontier:
                    for i, s in enumerate(gens):
                        y = Q.mul(x, s)
                        v = (val[x] + acc[i]) % M
                        if y in val:
                            if val[y] != v:
                                return
                        else:
                            val[y] = v
                            nxt.append(y)
                frontier = nxt
            out.append(tuple(val[c] for c in coset.tolist()))
            return
        for e in range(M):
            if (orders[k] * e) % M == 0:
                assign(k + 1, acc + [e])

    assign(0, [])
    return sorted(set(out))


@dataclass
class GlobalTwistAnalysis:
    stabilizer: list  # (u, eps exponents)
    gamma_group: list  # units u mod N; this subgroup fixes K
    delta_group: list  # units with eps = 1; this subgroup fixes E
    eps_group: list  # self-twist characters
    K_degree: int
    E_degree: int
    has_cm: bool
    ring_N: int
    eps_modulus: int

    def to_json(self, group):
        def eps_json(e):
            return {lab: k for lab, k in zip(group.labels, e)}
        return {
            "N": self.ring_N,
            "eps_modulus": self.eps_modulus,
            "twists": [{"u": u, "epsilon": eps_json(e)} for u, e in self.stabilizer],
            "gamma_group": self.gamma_group,
            "delta_group": self.delta_group,
            "K_field": {"fixed_by": self.gamma_group, "degree": self.K_degree},
            "E_field": {"fixed_by": self.delta_group, "degree": self.E_degree},
            "has_cm": self.has_cm,
        }


def global_inner_twists(sys):
    """Pairs (gamma_u, eps) with gamma_u(a_p) = a_p eps(Frob_p) at every label."""
    _check_surjective(sys)
    ring = sys.ring
    M = ring.roots_of_unity
    labels = sorted(sys.frob)
    traces = [sys.a_p(lab) for lab in labels]
    frob_idx = [sys.group.index(sys.frob[lab]) for lab in labels]
    chars = ring_characters(sys.group, M)
    roots = [ring.root(k) for k in range(M)]
    stab = []
    for u in ring.units():
        moved = [t.galois(u) for t in traces]
        for eps in chars:
            if all(mv == t * roots[eps[g]] for mv, t, g in zip(moved, traces, frob_idx)):
                stab.append((u, eps))
    gamma = sorted({u for u, _ in stab})
    delta = sorted({u for u, e in stab if not any(e)})
    eps_group = [e for u, e in stab if u == 1]
    phi = ring.degree
    return GlobalTwistAnalysis(stab, gamma, delta, eps_group, phi // len(gamma), phi // len(delta),
                               len(eps_group) > 1, ring.N, M)


def generated_field_degree(N, elems):
    """[Q(elems) : Q], as the Q-dimension of the algebra they generate."""
    basis = []  # echelon rows of Fractions

    def reduce(v):
        v = list(v)
        for piv, row in basis:
            if v[piv]:
                f = Fraction(v[piv]) / row[piv]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def insert(x):
        v = reduce(x.coeffs)
        piv = next((i for i, c in enumerate(v) if c), None)
        if piv is None:
            return False
        basis.append((piv, [Fraction(c) for c in v]))
        return True

    one = CycloElem.rational(N, 1)
    insert(one)
    span = [one]
    grew = True
    while grew:
        grew = False
        for x in list(span):
            for e in elems:
                y = x * e
                if insert(y):
                    span.append(y)
                    grew = True
    return len(basis)


def decomposition_group(ring, ell):
    if not polyfp.is_prime(ell):
        raise NotPrime(f"{ell} is not prime")
    if ring.N % ell == 0:
        raise Ramified(f"{ell} divides the conductor {ring.N}")
    return sorted({pow(ell, j, ring.N) for j in range(mult_order(ell, ring.N))}) if ring.N > 1 else [1]


# reduction -----------------------------------------------------------------------

@dataclass(frozen=True)
class ResiduePrime:
    ell: int
    f: int
    factor: tuple  # ascending monic factor of Phi_N mod ell
    zeta_code: int  # image of zeta_N in F_{ell^f}


def residue_prime(ring, ell):
    """The prime lambda | ell of the least monic factor of Phi_N mod ell."""
    N = ring.N
    if not polyfp.is_prime(ell):
        raise NotPrime(f"{ell} is not prime")
    if N % ell == 0:
        raise Ramified(f"{ell} divides the conductor {N}")
    f = mult_order(ell, N) if N > 1 else 1
    F = ff_make(ell, f)
    g = F.primitive_element()
    w = F.pow(g, (F.q - 1) // N)
    prims = [F.pow(w, j) for j in range(N) if gcd(j, N) == 1]
    best = None
    for z in prims:
        orbit = [F.frob(z, i) for i in range(f)]
        poly = [1]
        for r in orbit:
            # multiply by (X - r), ascending coefficients
            nxt = [0] * (len(poly) + 1)
            for i, c in enumerate(poly):
                nxt[i + 1] = F.add(nxt[i + 1], c)
                nxt[i] = F.sub(nxt[i], F.mul(c, r))
            poly = nxt
        if any(c >= ell for c in poly):
            raise ArithmeticError("factor has coefficients outside the prime field")
        cand = (tuple(reversed(poly)), min(orbit))
        if best is None or cand < best:
            best = cand
    return ResiduePrime(ell, f, tuple(reversed(best[0])), best[1]), F


def _reduce_elem(F, zeta, x, ell):
    acc, zp = 0, 1
    for c in x.coeffs:
        if c:
            c = Fraction(c)
            if c.denominator % ell == 0:
                raise BadPrime(f"{ell} divides a denominator")
            v = (c.numerator * pow(c.denominator, -1, ell)) % ell
            acc = F.add(acc, F.mul(v, zp))
        zp = F.mul(zp, zeta)
    return acc


def reduce_at(sys, ell):
    """Reduction of the system at the chosen prime over ell, with K = F_ell."""
    if ell == 2:
        raise BadPrime("ell must be odd")
    lam, F = residue_prime(sys.ring, ell)
    arr = np.array([[[_reduce_elem(F, lam.zeta_code, x, ell) for x in row] for row in img]
                    for img in sys.images], dtype=np.int64)
    return GroupRep(sys.group, arr, F, 1, sys.symplectic)


def _quotient_order(ell, N, H):
    x, k = ell % N, 1
    H = set(H)
    while x not in H:
        x = (x * ell) % N
        k += 1
    return k


@dataclass
class ResidualReport:
    ell: int
    residue_degree: int  # [kappa(L_lambda) : F_ell]
    residual_K_degree: int
    expected_K_degree: int
    residual_gamma: list  # Frobenius powers
    meet_gamma: list  # powers j with ell^j in Gamma_lambda and in Gamma_global
    E_residue_degree: int
    descends_to_E: bool
    note: str = MULTIPLIER_NOTE

    @property
    def equal(self):
        return self.residual_K_degree == self.expected_K_degree

    @property
    def meet_identity(self):
        return self.residual_gamma == self.meet_gamma

    def to_json(self):
        return {
            "ell": self.ell,
            "residue_degree": self.residue_degree,
            "residual_projective_field": f"F_{self.ell}^{self.residual_K_degree}",
            "expected_projective_field": f"F_{self.ell}^{self.expected_K_degree}",
            "equal": self.equal,
            "residual_gamma": self.residual_gamma,
            "decomposition_meet_gamma": self.meet_gamma,
            "meet_identity": self.meet_identity,
            "E_residue_degree": self.E_residue_degree,
            "descends_to_E": self.descends_to_E,
            "note": self.note,
        }


def residual_field_match(sys, ell, analysis=None, seed=0):
    rep = reduce_at(sys, ell)
    if not is_absolutely_irreducible(rep):
        raise NotIrreducible(f"reduction at {ell} is not absolutely irreducible")
    an = global_inner_twists(sys) if analysis is None else analysis
    res = inner_twist_stabilizer(rep)
    N = sys.ring.N
    f = rep.L.k
    expected = _quotient_order(ell, N, an.gamma_group)
    meet = sorted(j for j in range(f) if pow(ell, j, N) in set(an.gamma_group))
    e_E = _quotient_order(ell, N, an.delta_group)
    try:
        descend_to_subfield(rep, e_E, seed=seed)
        ok = True
    except SympalError:  # any descent failure means the claim is not confirmed
        ok = False
    return ResidualReport(ell, f, res.K_degree, expected, list(res.gamma_group), meet, e_E, ok)


def multiplier_consistency(sys):
    """Multipliers equal psi at every label, and self-twists are at most quadratic."""
    if not sys.symplectic:
        raise NoMultiplier("system is not symplectic")
    if sys.psi is None:
        raise NoMultiplier("system declares no psi")
    for lab in sys.frob:
        m = ring_multiplier(sys.image_of(lab))
        if m is None or m != sys.psi_value(lab):
            return False
    an = global_inner_twists(sys)
    M = an.eps_modulus
    return all(M // gcd(M, *e) <= 2 for e in an.eps_group)


# shipped systems -----------------------------------------------------------------

def _sigma_generators(N):
    """Quaternion units i, j, (1 + i + j + k)/2 as 2x2 matrices over Z[zeta_N], 4 | N."""
    if N % 4:
        raise ValueError("need i in Q(zeta_N)")
    R = NumberRing(N)
    I = CycloElem.zeta_power(N, N // 4)
    one, zero = R.elem([1]), R.elem([0])
    half = Fraction(1, 2)
    qi = ((I, zero), (zero, -I))
    qj = ((zero, one), (-one, zero))
    w = (((one + I) * half, (one + I) * half), ((I - one) * half, (one - I) * half))
    return [qi, qj, w]


def _frob_labels(group):
    return {f"P{j}": group.labels[c[0]] for j, c in enumerate(conjugacy_classes(group))}


def _det2(A):
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def _root_exponent(ring, x):
    M = ring.roots_of_unity
    for k in range(M):
        if ring.root(k) == x:
            return k
    raise ValueError("not a root of unity")


def _tensor_system(N, extra_order, extra_exp):
    """sigma (x) chi on SL_2(F_3) x C_m, chi(c) = zeta_M^(extra_exp c)."""
    ring = NumberRing(N)
    elems, table = closure_over_ring(N, _sigma_generators(N))
    Hs = FiniteGroup([f"s{i}" for i in range(len(elems))], table)
    C = FiniteGroup.cyclic(extra_order)
    group = FiniteGroup.direct_product(Hs, C)
    images = []
    for A in elems:
        for c in range(extra_order):
            z = ring.root(extra_exp * c)
            images.append(tuple(tuple(x * z for x in row) for row in A))
    psi = {lab: _root_exponent(ring, _det2(A)) for lab, A in zip(group.labels, images)}
    return MockSystem(ring, group, images, _frob_labels(group), (), psi, 0, True)


def rho_star_system():
    """sigma (x) mu over Z[zeta_12], mu of order 3 with values in zeta_3 = zeta_12^4."""
    return _tensor_system(12, 3, 4)


def quartic_twist_system():
    """sigma (x) chi over Z[i], chi of order 4."""
    return _tensor_system(4, 4, 1)


def sigma_system(N=4):
    ring = NumberRing(N)
    elems, table = closure_over_ring(N, _sigma_generators(N))
    group = FiniteGroup([f"s{i}" for i in range(len(elems))], table)
    psi = {lab: _root_exponent(ring, _det2(A)) for lab, A in zip(group.labels, elems)}
    return MockSystem(ring, group, elems, _frob_labels(group), (), psi, 0, True)


def _perm_matrix(N, perm):
    """Action of a permutation of {0..4} on the sum-zero lattice, basis e_i - e_4."""
    R = NumberRing(N)
    cols = []
    for i in range(4):
        a, b = perm[i], perm[4]
        col = [0] * 4
        if a < 4:
            col[a] += 1
        if b < 4:
            col[b] -= 1
        cols.append(col)
    return tuple(tuple(R.elem([cols[j][i]]) for j in range(4)) for i in range(4))


def perfect_system(N=4):
    """A_5 on the 4-dim sum-zero lattice: perfect group, rational traces, not symplectic."""
    gens = [_perm_matrix(N, (1, 2, 0, 3, 4)), _perm_matrix(N, (1, 2, 3, 4, 0))]
    elems, table = closure_over_ring(N, gens)
    group = FiniteGroup([f"a{i}" for i in range(len(elems))], table)
    return MockSystem(NumberRing(N), group, elems, _frob_labels(group), (), None, 0, False)


def with_psi(sys, psi):
    return MockSystem(sys.ring, sys.group, sys.images, sys.frob, sys.S, psi, sys.a, sys.symplectic)
