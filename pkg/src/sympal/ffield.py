"""Finite fields F_{p^k} with an explicit irreducible modulus.

Elements are coded as integers: the residue c_0 + c_1 t + ... + c_{k-1} t^{k-1}
has code c_0 + c_1 p + ... + c_{k-1} p^{k-1}. The code order is the fixed
element ordering used whenever a "least" element is needed. :class:`FFElem`
wraps a code for user-facing arithmetic; matrix and group code works on raw
codes through the dense numpy tables of :meth:`FiniteField.tables`.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from math import gcd

import numpy as np

from sympal import polyfp
from sympal.errors import NotDivisor, NotIrreducible, NotPrime, TableLimit

TABLE_LIMIT = 1024


@dataclass(frozen=True)
class FieldTables:
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray

    def sub(self, a, b):
        return self.add[a, self.neg[b]]


def _least_irreducible(p, k):
    if k == 1:
        return (0, 1)
    # lexicographic on the ascending coefficient vector (c_0 most significant)
    for lower in itertools.product(range(p), repeat=k):
        f = list(lower) + [1]
        if f[0] == 0:
            continue
        if polyfp.is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FiniteField:
    """The field F_p[t]/(modulus). Use :func:`ff_make` to construct."""

    def __init__(self, p, k, modulus):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(modulus)
        self._lock = threading.Lock()
        self._tables = None
        self._add_l = None
        self._mul_l = None
        self._frob_tables = {}
        self._prim = None
        self._log = None
        self._exp = None

    # identity -----------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and self.p == other.p
            and self.k == other.k
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"FiniteField({self.descriptor()})"

    def descriptor(self):
        if self.modulus == _least_irreducible(self.p, self.k):
            return f"{self.p}:{self.k}"
        coeffs = ",".join(str(c) for c in self.modulus)
        return f"{self.p}:{self.k}:modulus={coeffs}"

    # element coding -----------------------------------------------------
    def digits(self, a):
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, coeffs):
        if len(coeffs) > self.k:
            coeffs = polyfp.mod(polyfp.trim([c % self.p for c in coeffs]), list(self.modulus), self.p)
        code = 0
        for c in reversed(list(coeffs)):
            code = code * self.p + (c % self.p)
        return code

    def elem(self, value):
        """Element from an int code, an FFElem or a coefficient sequence."""
        if isinstance(value, FFElem):
            if value.field != self:
                raise ValueError("element belongs to another field")
            return value
        if isinstance(value, int):
            if not 0 <= value < self.q:
                raise ValueError(f"code {value} out of range for {self}")
            return FFElem(self, value)
        return FFElem(self, self.from_digits(list(value)))

    def embed_int(self, n):
        """Code of the prime-field element n mod p."""
        return n % self.p

    @property
    def zero(self):
        return FFElem(self, 0)

    @property
    def one(self):
        return FFElem(self, 1)

    def elements(self):
        return [FFElem(self, a) for a in range(self.q)]

    def parse_elem(self, text):
        """Comma-separated coefficients, lowest degree first; missing ones are 0."""
        coeffs = [int(c) for c in text.split(",")]
        if len(coeffs) > self.k:
            raise ValueError(f"expected at most {self.k} coefficients, got {text!r}")
        return self.from_digits(coeffs + [0] * (self.k - len(coeffs)))

    def format_elem(self, a):
        return ",".join(str(c) for c in self.digits(a))

    # arithmetic on codes ------------------------------------------------
    def add(self, a, b):
        if self._add_l is not None:
            return self._add_l[a][b]
        p = self.p
        return self.from_digits([(x + y) % p for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a):
        p = self.p
        return self.from_digits([(-x) % p for x in self.digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self._mul_l is not None:
            return self._mul_l[a][b]
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return (a * b) % self.p
        prod = polyfp.mul(polyfp.trim(self.digits(a)), polyfp.trim(self.digits(b)), self.p)
        return self.from_digits(polyfp.mod(prod, list(self.modulus), self.p))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def frob(self, a, i):
        """a^(p^i) on codes."""
        i %= self.k
        if i == 0:
            return a
        table = self._frob_tables.get(i)
        if table is not None:
            return int(table[a])
        return self.pow(a, self.p**i)

    def frob_table(self, i):
        """numpy map code -> code^(p^i); requires q <= TABLE_LIMIT."""
        i %= self.k
        with self._lock:
            table = self._frob_tables.get(i)
        if table is None:
            self._check_table_size()
            table = np.array([self.pow(a, self.p**i) for a in range(self.q)], dtype=np.int64)
            with self._lock:
                self._frob_tables[i] = table
        return table

    def mult_order(self, a):
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.q - 1
        order = n
        for r in polyfp.prime_factors(n):
            while order % r == 0 and self.pow(a, order // r) == 1:
                order //= r
        return order

    def primitive_element(self):
        """Least code generating the multiplicative group."""
        if self._prim is None:
            for a in range(1, self.q):
                if self.mult_order(a) == self.q - 1:
                    self._prim = a
                    break
        return self._prim

    def log_exp(self):
        """(log, exp) arrays w.r.t. the primitive element; log[0] = -1."""
        with self._lock:
            if self._log is not None:
                return self._log, self._exp
        g = self.primitive_element()
        exp = np.zeros(self.q - 1, dtype=np.int64)
        log = np.full(self.q, -1, dtype=np.int64)
        x = 1
        for j in range(self.q - 1):
            exp[j] = x
            log[x] = j
            x = self.mul(x, g)
        with self._lock:
            self._log, self._exp = log, exp
        return log, exp

    def in_subfield(self, a, d):
        return self.frob(a, d) == a

    # dense tables ---------------------------------------------------------
    def _check_table_size(self):
        if self.q > TABLE_LIMIT:
            raise TableLimit(f"{self} has {self.q} elements; dense tables need q <= {TABLE_LIMIT}")

    def tables(self):
        with self._lock:
            if self._tables is not None:
                return self._tables
        self._check_table_size()
        q, p, k = self.q, self.p, self.k
        codes = np.arange(q)
        digits = np.stack([(codes // p**i) % p for i in range(k)], axis=1).astype(np.int64)
        weights = p ** np.arange(k)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights
        log, exp = self.log_exp()
        s = (log[:, None] + log[None, :]) % (q - 1)
        mul = exp[s]
        mul[0, :] = 0
        mul[:, 0] = 0
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % (q - 1)]
        tables = FieldTables(add.astype(np.int64), mul.astype(np.int64), neg.astype(np.int64), inv)
        with self._lock:
            self._tables = tables
            self._add_l = tables.add.tolist()
            self._mul_l = tables.mul.tolist()
        return tables


class FFElem:
    """An element of a :class:`FiniteField`; immutable."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FFElem is immutable")

    def _other(self, other):
        if isinstance(other, FFElem):
            if other.field != self.field:
                raise ValueError("mixed fields")
            return other.value
        if isinstance(other, int):
            return self.field.embed_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FFElem(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FFElem(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FFElem(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        return FFElem(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FFElem(self.field, self.field.div(self.value, b))

    def __neg__(self):
        return FFElem(self.field, self.field.neg(self.value))

    def __pow__(self, e):
        return FFElem(self.field, self.field.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.embed_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.value))

    def __lt__(self, other):
        return self.value < other.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FFElem({self.field.format_elem(self.value)} in F_{self.field.q})"

    def __str__(self):
        return self.field.format_elem(self.value)

    @property
    def coeffs(self):
        return self.field.digits(self.value)

    def inverse(self):
        return FFElem(self.field, self.field.inv(self.value))

    def order(self):
        return self.field.mult_order(self.value)


@dataclass(frozen=True)
class GaloisAuto:
    """x -> x^(p^power) on ``field``."""

    field: FiniteField
    power: int

    def __post_init__(self):
        object.__setattr__(self, "power", self.power % self.field.k)

    def __call__(self, x):
        if isinstance(x, FFElem):
            return FFElem(self.field, self.field.frob(x.value, self.power))
        return self.field.frob(x, self.power)

    def __mul__(self, other):
        return GaloisAuto(self.field, self.power + other.power)

    def inverse(self):
        return GaloisAuto(self.field, -self.power)

    def is_identity(self):
        return self.power == 0


_FIELD_CACHE = {}
_CACHE_LOCK = threading.Lock()


def ff_make(p, k=1, modulus=None):
    """Construct F_{p^k}; the modulus defaults to the least irreducible one.

    Fields are interned so that equal descriptors share lookup tables.
    """
    if not polyfp.is_prime(p) or p >= 2**31:
        raise NotPrime(f"{p} is not a prime below 2^31")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if modulus is None:
        modulus = _least_irreducible(p, k)
    else:
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {k}")
        if not polyfp.is_irreducible(list(modulus), p):
            raise NotIrreducible(f"modulus {modulus} is reducible over F_{p}")
    key = (p, k, modulus)
    with _CACHE_LOCK:
        field = _FIELD_CACHE.get(key)
        if field is None:
            field = FiniteField(p, k, modulus)
            _FIELD_CACHE[key] = field
    if field.q <= TABLE_LIMIT:
        field.tables()
    return field


def parse_field(text):
    """Inverse of :meth:`FiniteField.descriptor`."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"bad field descriptor {text!r}")
    p, k = int(parts[0]), int(parts[1])
    modulus = None
    if len(parts) == 3:
        key, _, coeffs = parts[2].partition("=")
        if key != "modulus":
            raise ValueError(f"bad field descriptor {text!r}")
        modulus = [int(c) for c in coeffs.split(",")]
    return ff_make(p, k, modulus)


def frobenius(x, i):
    """x^(p^i)."""
    return FFElem(x.field, x.field.frob(x.value, i))


def subfield_elements(L, d):
    """The p^d elements of L fixed by x -> x^(p^d)."""
    if d < 1 or L.k % d:
        raise NotDivisor(f"{d} does not divide {L.k}")
    if d == L.k:
        return frozenset(L.elements())
    g = L.primitive_element()
    w = L.pow(g, (L.q - 1) // (L.p**d - 1))
    out = {0}
    x = 1
    for _ in range(L.p**d - 1):
        out.add(x)
        x = L.mul(x, w)
    return frozenset(FFElem(L, a) for a in out)


def subfield_codes(L, d):
    return sorted(x.value for x in subfield_elements(L, d))


def cyclic_characters(m, L):
    """All homomorphisms Z/m -> L^x, each given by the image of 1."""
    if m < 1:
        raise ValueError("group order must be >= 1")
    g = gcd(m, L.q - 1)
    base = L.pow(L.primitive_element(), (L.q - 1) // g)
    out = []
    x = 1
    for _ in range(g):
        out.append(FFElem(L, x))
        x = L.mul(x, base)
    return out


def embedding(small, big):
    """Field map small -> big as an array of codes.

    The generator of ``small`` is sent to the least root (by code) of its
    modulus among the elements of ``big``; the choice is fixed per pair.
    """
    if small.p != big.p or big.k % small.k:
        raise NotDivisor(f"{small} does not embed in {big}")
    candidates = subfield_codes(big, small.k)
    root = None
    for x in candidates:
        acc = 0
        for c in reversed(small.modulus):
            acc = big.add(big.mul(acc, x), big.embed_int(c))
        if acc == 0:
            root = x
            break
    powers = [1]
    for _ in range(small.k - 1):
        powers.append(big.mul(powers[-1], root))
    out = np.zeros(small.q, dtype=np.int64)
    for a in range(small.q):
        acc = 0
        for c, w in zip(small.digits(a), powers):
            if c:
                acc = big.add(acc, big.mul(big.embed_int(c), w))
        out[a] = acc
    return out
