"""Fundamental characters of tame inertia as exponent arithmetic.

Tame inertia is modelled as a cyclic group of order ell^R - 1 with a marked
generator; the fundamental character psi_r of niveau r (r | R) sends it to
w^((ell^R - 1)/(ell^r - 1)) for a fixed primitive element w of F_{ell^R}.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Optional

from sympal.errors import HypothesisFails, NotTriangularizable
from sympal.symplectic import Mat


def _lcm(a, b):
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class NiveauBlock:
    ell: int
    digits: tuple  # (a_1, ..., a_r), each in [0, ell - 1]

    def __post_init__(self):
        if not self.digits or any(not 0 <= a < self.ell for a in self.digits):
            raise ValueError("digits must lie in [0, ell - 1]")

    @property
    def r(self):
        return len(self.digits)

    @property
    def b(self):
        return sum(a * self.ell**j for j, a in enumerate(self.digits))

    @property
    def modulus(self):
        return self.ell**self.r - 1

    def exponents(self):
        """The r conjugate exponents b ell^j mod ell^r - 1 of psi_r."""
        return [(self.b * self.ell**j) % self.modulus for j in range(self.r)]

    def rotate(self, c):
        """Digits after raising psi_r to the ell^c-th power."""
        r = self.r
        c %= r
        return NiveauBlock(self.ell, self.digits[r - c:] + self.digits[:r - c])


@dataclass(frozen=True)
class ShapeSpec:
    ell: int
    n: int
    t: int
    blocks: tuple

    def __post_init__(self):
        if sum(b.r for b in self.blocks) != self.n:
            raise ValueError("block sizes must add up to n")
        if any(b.ell != self.ell for b in self.blocks):
            raise ValueError("blocks use a different ell")

    @classmethod
    def from_digits(cls, ell, t, digit_tuples):
        blocks = tuple(NiveauBlock(ell, tuple(d)) for d in digit_tuples)
        return cls(ell, sum(b.r for b in blocks), t, blocks)

    @property
    def niveau(self):
        R = 1
        for b in self.blocks:
            R = _lcm(R, b.r)
        return R

    def det_exponent(self):
        """e with det(rho) restricted to inertia = psi_1^e, e mod ell - 1."""
        return (sum(b.b for b in self.blocks) - self.n * self.t) % (self.ell - 1)

    def lifted_exponents(self, R=None):
        """All diagonal exponents of rho (x) psi_1^t, as powers of psi_R."""
        R = self.niveau if R is None else R
        out = []
        for blk in self.blocks:
            f = (self.ell**R - 1) // blk.modulus
            out.extend(x * f for x in blk.exponents())
        return sorted(out)

    def canonical(self):
        """Each block rotated to its least exponent; blocks sorted."""
        best = []
        for blk in self.blocks:
            rots = [blk.rotate(c) for c in range(blk.r)]
            best.append(min(rots, key=lambda x: (x.b, x.digits)))
        best.sort(key=lambda x: (x.r, x.b))
        return ShapeSpec(self.ell, self.n, self.t, tuple(best))

    def to_json(self):
        return {"ell": self.ell, "n": self.n, "t": self.t,
                "blocks": [list(b.digits) for b in self.blocks]}

    @classmethod
    def from_json(cls, obj):
        return cls.from_digits(int(obj["ell"]), int(obj.get("t", 0)), obj["blocks"])


def conjugate_shape(shape, c):
    if c < 0:
        raise ValueError("c must be non-negative")
    return ShapeSpec(shape.ell, shape.n, shape.t, tuple(b.rotate(c) for b in shape.blocks))


def _check_hypothesis(shape, n):
    ell = shape.ell
    for blk in shape.blocks:
        for a in blk.digits:
            if not 2 * n * a < ell - 1:
                raise HypothesisFails(f"digit {a} is not below (ell - 1)/(2n) = {(ell - 1) / (2 * n)}")


def obstruction_witness(ell, n, shape):
    """First (i, j, c, x, y, m, b) solving the twist congruence, or None.

    Raises HypothesisFails when some digit is not below (ell - 1)/(2n).
    """
    if shape.ell != ell or shape.n != n:
        raise ValueError("shape does not match ell and n")
    _check_hypothesis(shape, n)
    blocks = shape.blocks
    R = shape.niveau
    divisors = [m for m in range(2, n + 1) if n % m == 0]
    for c in range(R):
        conj = conjugate_shape(shape, c).blocks
        for i, j in product(range(len(blocks)), repeat=2):
            bi, bj = conj[i], blocks[j]
            r = _lcm(bi.r, bj.r)
            mod = ell**r - 1
            fi, fj = mod // bi.modulus, mod // bj.modulus
            for x in bi.exponents():
                for y in bj.exponents():
                    for m in divisors:
                        if mod % m:
                            continue  # no character of order m on this quotient
                        for b in range(1, m):
                            if gcd(b, m) != 1:
                                continue
                            if (x * fi - y * fj - mod * b // m) % mod == 0:
                                return (i, j, c, x, y, m, b)
    return None


def twist_obstruction(ell, n, shape):
    """True when no ramified twist character is compatible with the shape."""
    return obstruction_witness(ell, n, shape) is None


def brute_force_twists(shape):
    """All (c, e) with e != 0 and {ell^c x} = {x + e} as multisets mod ell^R - 1.

    Independent of the block-pair argument: it tests every character of the
    cyclic inertia quotient against every Frobenius power directly.
    """
    ell = shape.ell
    R = shape.niveau
    mod = ell**R - 1
    X = shape.lifted_exponents(R)
    hits = []
    for c in range(R):
        lhs = sorted((x * ell**c) % mod for x in X)
        for e in range(1, mod):
            if lhs == sorted((x + e) % mod for x in X):
                hits.append((c, e))
    return hits


# shapes of explicit inertia images -----------------------------------------------

def _poly_eval(F, coeffs, x):
    acc = 0
    for c in coeffs:
        acc = F.add(F.mul(acc, x), c)
    return acc


def _deflate(F, coeffs, root):
    """Divide a monic polynomial (descending coefficients) by (X - root)."""
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(F.add(c, F.mul(out[-1], root)))
    return out


def eigenvalues(A):
    """Eigenvalue codes of A with multiplicity; NotTriangularizable if they leave the field."""
    F = A.field
    coeffs = [1] + [a.value for a in A.charpoly()]
    roots = []
    while len(coeffs) > 1:
        root = next((x for x in range(F.q) if _poly_eval(F, coeffs, x) == 0), None)
        if root is None:
            raise NotTriangularizable("characteristic polynomial does not split over the field")
        roots.append(root)
        coeffs = _deflate(F, coeffs, root)
    return sorted(roots)


def inertia_image(shape, field):
    """Diagonal image of the marked inertia generator under rho (untwisted)."""
    ell, K = field.p, field.k
    if ell != shape.ell or K % shape.niveau:
        raise ValueError("field must have characteristic ell and contain F_{ell^R}")
    log_, exp_ = field.log_exp()
    mod = field.q - 1
    psi1 = mod // (ell - 1)
    diag = []
    for blk in shape.blocks:
        f = mod // blk.modulus
        for x in blk.exponents():
            diag.append(int(exp_[(x * f - shape.t * psi1) % mod]))
    n = shape.n
    return Mat(field, n, [diag[i] if i == j else 0 for i in range(n) for j in range(n)])


def detect_shape(A, t=0) -> Optional[ShapeSpec]:
    """Recover the block shape of (rho (x) psi_1^t)(generator) from A = rho(generator)."""
    F = A.field
    ell = F.p
    mod = F.q - 1
    log_, _ = F.log_exp()
    roots = eigenvalues(A)
    if 0 in roots:
        return None
    shift = t * (mod // (ell - 1))
    exps = sorted((int(log_[x]) + shift) % mod for x in roots)
    remaining = list(exps)
    blocks = []
    while remaining:
        e = remaining[0]
        orbit = [e]
        x = (e * ell) % mod
        while x != e:
            orbit.append(x)
            x = (x * ell) % mod
        r = len(orbit)
        for y in orbit:
            if y not in remaining:
                return None
            remaining.remove(y)
        f = mod // (ell**r - 1)
        b = min(orbit) // f
        digits = tuple((b // ell**j) % ell for j in range(r))
        blocks.append(NiveauBlock(ell, digits))
    return ShapeSpec(ell, len(exps), t, tuple(blocks)).canonical()
