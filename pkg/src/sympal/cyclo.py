"""Exact arithmetic in Q(zeta_N), Gauss periods and their residue degrees.

Elements are coefficient vectors in the power basis zeta^0 .. zeta^(phi(N)-1),
reduced modulo the N-th cyclotomic polynomial. Coefficients are Python ints
or Fractions; nothing here uses floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from sympal import polyfp
from sympal.errors import DividesP, NotDivisor, NotPrime, Ramified


# cyclotomic polynomials ----------------------------------------------------------

def _poly_divexact(f, g):
    """Exact division of integer polynomials (ascending), g monic."""
    f = list(f)
    dg = len(g) - 1
    out = [0] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i]
        out[i - dg] = c
        if c:
            for j in range(dg + 1):
                f[i - dg + j] -= c * g[j]
    if any(f[:dg]):
        raise ArithmeticError("division is not exact")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(N):
    """Phi_N as an ascending tuple of ints."""
    f = [-1] + [0] * (N - 1) + [1]
    for d in range(1, N):
        if N % d == 0:
            f = _poly_divexact(f, cyclotomic_poly(d))
    return tuple(f)


def euler_phi(N):
    return sum(1 for a in range(1, N + 1) if gcd(a, N) == 1)


def mult_order(a, N):
    a %= N
    if gcd(a, N) != 1:
        raise ValueError(f"{a} is not a unit mod {N}")
    k, x = 1, a
    while x != 1 % N:
        x = (x * a) % N
        k += 1
    return k


# elements -------------------------------------------------------------------------

class CycloElem:
    """An element of Q(zeta_N) in the power basis."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N, coeffs):
        self.N = N
        deg = euler_phi(N)
        c = list(coeffs)
        if len(c) > deg:
            c = _reduce(c, N)
        c = c + [0] * (deg - len(c))
        self.coeffs = tuple(Fraction(x) if isinstance(x, Fraction) and x.denominator != 1 else
                            (int(x) if isinstance(x, Fraction) else x) for x in c)

    @classmethod
    def zeta_power(cls, N, e):
        e %= N
        return cls(N, [0] * e + [1])

    @classmethod
    def rational(cls, N, x):
        return cls(N, [x])

    def __eq__(self, other):
        if not isinstance(other, CycloElem):
            other = CycloElem.rational(self.N, other)
        return self.N == other.N and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.N, self.coeffs))

    def _wrap(self, other):
        return other if isinstance(other, CycloElem) else CycloElem.rational(self.N, other)

    def __add__(self, other):
        other = self._wrap(other)
        return CycloElem(self.N, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.N, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        other = self._wrap(other)
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return CycloElem(self.N, _reduce(out, self.N))

    __rmul__ = __mul__

    def __pow__(self, e):
        result = CycloElem.rational(self.N, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def galois(self, u):
        """Image under zeta -> zeta^u (u a unit mod N)."""
        if gcd(u, self.N) != 1:
            raise ValueError("u must be a unit mod N")
        out = [0] * self.N
        for i, c in enumerate(self.coeffs):
            if c:
                out[(i * u) % self.N] += c
        return CycloElem(self.N, _reduce(out, self.N))

    def is_rational(self):
        return not any(self.coeffs[1:])

    def is_zero(self):
        return not any(self.coeffs)

    def denominator(self):
        den = 1
        for c in self.coeffs:
            if isinstance(c, Fraction):
                den = den * c.denominator // gcd(den, c.denominator)
        return den

    def __repr__(self):
        terms = [f"{c}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"CycloElem[{self.N}](" + (" + ".join(terms) or "0") + ")"


def _reduce(c, N):
    phi = cyclotomic_poly(N)
    deg = len(phi) - 1
    c = list(c)
    for i in range(len(c) - 1, deg - 1, -1):
        x = c[i]
        if x:
            c[i] = 0
            for j in range(deg):
                if phi[j]:
                    c[i - deg + j] -= x * phi[j]
    c = c[:deg]
    return c + [0] * (deg - len(c))


def sum_of_zetas(N, exponents):
    out = [0] * N
    for e in exponents:
        out[e % N] += 1
    return CycloElem(N, _reduce(out, N))


# exact linear algebra ---------------------------------------------------------------

class Echelon:
    """Incremental exact elimination that tracks each row as a combination of inputs."""

    def __init__(self):
        self.rows = []  # (pivot, row, combo)
        self.count = 0

    def add(self, v):
        """Insert v; return the relation (Fractions, last entry 1) if v is dependent."""
        k = self.count
        self.count += 1
        row = [Fraction(x) for x in v]
        combo = [Fraction(0)] * k + [Fraction(1)]
        for piv, brow, bcombo in self.rows:
            f = row[piv]
            if f:
                f = f / brow[piv]
                row = [a - f * b for a, b in zip(row, brow)]
                for i, b in enumerate(bcombo):
                    if b:
                        combo[i] -= f * b
        piv = next((i for i, x in enumerate(row) if x), None)
        if piv is None:
            return combo
        self.rows.append((piv, row, combo))
        return None


def first_dependency(vectors):
    """Least k with vectors[k] in the span of vectors[:k], and the relation.

    Returns (k, coeffs) with sum_i coeffs[i] * vectors[i] = 0 and coeffs[k] = 1;
    None when all vectors are independent.
    """
    ech = Echelon()
    for k, v in enumerate(vectors):
        rel = ech.add(v)
        if rel is not None:
            return k, rel
    return None


def rank_q(vectors):
    """Rank over Q of integer/rational vectors (fraction-free elimination)."""
    rows = [list(v) for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][c]:
                a, b = p[c], rows[i][c]
                rows[i] = [a * x - b * y for x, y in zip(rows[i], p)]
        rank += 1
    return rank


# Gauss periods ----------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodData:
    p: int
    q: int
    n: int
    xi: CycloElem
    minpoly: tuple  # ascending integer coefficients, monic
    D: int

    def to_json(self):
        return {"p": self.p, "q": self.q, "n": self.n, "D": self.D,
                "minpoly": list(self.minpoly), "xi": [str(c) for c in self.xi.coeffs]}


def _check_p(p, q):
    if p < 3 or not polyfp.is_prime(p):
        raise NotPrime(f"{p} is not an odd prime")
    if q % p == 0:
        raise DividesP(f"{p} divides {q}")


def gauss_period(p, q):
    """xi = sum_{i<n} zeta_p^(q^i) with n = ord_p(q), and its minimal polynomial."""
    _check_p(p, q)
    n = mult_order(q, p)
    xi = sum_of_zetas(p, [pow(q, i, p) for i in range(n)])
    ech = Echelon()
    x = CycloElem.rational(p, 1)
    while True:
        combo = ech.add(x.coeffs)
        if combo is not None:
            break
        x = x * xi
    k = len(combo) - 1
    if any(c.denominator != 1 for c in combo):
        raise ArithmeticError("minimal polynomial of an algebraic integer must be integral")
    minpoly = tuple(int(c) for c in combo)
    D = k
    if D != (p - 1) // n:
        raise ArithmeticError("degree disagrees with (p - 1)/n")
    return PeriodData(p, q, n, xi, minpoly, D)


def conjugate_count(xi):
    """Number of distinct Galois conjugates of xi (its degree over Q)."""
    N = xi.N
    return len({xi.galois(u) for u in range(1, N) if gcd(u, N) == 1})


def residue_degree(pd, ell):
    """Residue degree of ell in Q(xi_p); raises Ramified at ell = p."""
    if not polyfp.is_prime(ell):
        raise NotPrime(f"{ell} is not prime")
    if ell == pd.p:
        raise Ramified(f"{ell} ramifies in Q(zeta_{pd.p})")
    f = [c % ell for c in pd.minpoly]
    if polyfp.is_squarefree(f, ell):
        degs = set(polyfp.ddf_degrees(f, ell))
        if len(degs) != 1:
            raise ArithmeticError("factor degrees of a cyclic extension must agree")
        return degs.pop()
    # ell divides the index of Z[xi]: read off the Frobenius zeta -> zeta^ell directly
    x, f_deg = pd.xi.galois(ell), 1
    while x != pd.xi:
        x = x.galois(ell)
        f_deg += 1
    return f_deg


def quotient_order(ell, p, q):
    """Order of ell in (Z/p)^x / <q>."""
    H = {pow(q, i, p) for i in range(mult_order(q, p))}
    x, k = ell % p, 1
    while x not in H:
        x = (x * ell) % p
        k += 1
    return k


def primes_up_to(bound):
    sieve = bytearray([1]) * (bound + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i in range(bound + 1) if sieve[i]]


@dataclass(frozen=True)
class DensityReport:
    frequency: Fraction
    prediction: Fraction
    count: int
    total: int
    ramified: tuple
    degrees: dict = field(default=None, repr=False, compare=False)  # ell -> residue degree

    def to_json(self):
        return {
            "frequency": str(self.frequency),
            "prediction": str(self.prediction),
            "count": self.count,
            "total": self.total,
            "ramified": list(self.ramified),
        }


def cyclic_order_share(d, D):
    """Share of elements of order exactly d in Z/D, by counting."""
    return Fraction(sum(1 for x in range(D) if D // gcd(x, D) == d), D)


def density_estimate(pd, d, bound):
    if pd.D % d:
        raise NotDivisor(f"{d} does not divide {pd.D}")
    count = total = 0
    ramified = []
    degrees = {}
    for ell in primes_up_to(bound):
        if ell == pd.p:
            ramified.append(ell)
            continue
        total += 1
        degrees[ell] = residue_degree(pd, ell)
        if degrees[ell] == d:
            count += 1
    freq = Fraction(count, total) if total else Fraction(0)
    return DensityReport(freq, cyclic_order_share(d, pd.D), count, total, tuple(ramified), degrees)


# diagonal model of a maximally induced place --------------------------------------

@dataclass(frozen=True)
class InducedDiagModel:
    p: int
    q: int
    n: int
    exponents: tuple

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("the induced model needs ord_p(q) > 1")
        if tuple(sorted(self.exponents)) != tuple(sorted({(self.exponents[0] * pow(self.q, i, self.p)) % self.p
                                                           for i in range(self.n)})):
            raise ValueError("exponents must form one orbit under multiplication by q")


def induced_model(p, q):
    _check_p(p, q)
    n = mult_order(q, p)
    return InducedDiagModel(p, q, n, tuple(pow(q, i, p) for i in range(n)))


@dataclass(frozen=True)
class FixedReport:
    eps_forced_trivial: bool
    admissible: tuple  # units u whose multiset matches
    multiset_matches_subgroup: bool
    period_fixed_exactly_on_subgroup: bool
    exponent_sum_zero: bool

    @property
    def ok(self):
        return (self.eps_forced_trivial and self.multiset_matches_subgroup
                and self.period_fixed_exactly_on_subgroup and self.exponent_sum_zero)


def xi_fixed_report(model):
    p, q, n = model.p, model.q, model.n
    # eps(sigma_0) is both an n-th and a p-th root of unity: zeta_p^k with n k = 0 mod p
    eps_ok = [k for k in range(p) if (n * k) % p == 0] == [0]
    H = {pow(q, i, p) for i in range(n)}
    base = sorted(model.exponents)
    xi = sum_of_zetas(p, model.exponents)
    admissible, match_ok, fixed_ok = [], True, True
    for u in range(1, p):
        same = sorted((u * e) % p for e in model.exponents) == base
        if same:
            admissible.append(u)
        match_ok &= same == (u in H)
        fixed_ok &= (xi.galois(u) == xi) == (u in H)
    sum_ok = sum(model.exponents) % p == 0
    return FixedReport(eps_ok, tuple(admissible), match_ok, fixed_ok, sum_ok)


def xi_fixed_under_twists(model):
    return xi_fixed_report(model).ok
