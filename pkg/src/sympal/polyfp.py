"""Dense polynomials over GF(p).

A polynomial a_0 + a_1 x + ... + a_n x^n is the list [a_0, ..., a_n] with
a_n != 0; the zero polynomial is []. All functions return fresh trimmed lists.
"""

from math import gcd as _igcd


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def add(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def sub(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim([c % p for c in out])


def scale(f, c, p):
    return trim([(a * c) % p for a in f])


def divmod_(f, g, p):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = trim(f)
    inv = pow(g[-1], p - 2, p)
    dg = len(g) - 1
    if len(f) <= dg:
        return [], f
    q = [0] * (len(f) - dg)
    r = list(f)
    for i in range(len(f) - 1, dg - 1, -1):
        c = (r[i] * inv) % p
        if c:
            q[i - dg] = c
            for j in range(dg + 1):
                r[i - dg + j] = (r[i - dg + j] - c * g[j]) % p
    return trim(q), trim(r[:dg])


def mod(f, g, p):
    return divmod_(f, g, p)[1]


def monic(f, p):
    if not f:
        return []
    return scale(f, pow(f[-1], p - 2, p), p)


def gcd(f, g, p):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, mod(f, g, p)
    return monic(f, p)


def mulmod(f, g, m, p):
    return mod(mul(f, g, p), m, p)


def powmod(f, e, m, p):
    result = [1]
    base = mod(f, m, p)
    while e:
        if e & 1:
            result = mulmod(result, base, m, p)
        base = mulmod(base, base, m, p)
        e >>= 1
    return mod(result, m, p)


def deriv(f, p):
    return trim([(i * f[i]) % p for i in range(1, len(f))])


def evaluate(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f, p):
    """Rabin's test for a polynomial of degree >= 1."""
    f = monic(trim(f), p)
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if powmod(x, p**k, f, p) != mod(x, f, p):
        return False
    for r in _prime_factors(k):
        h = sub(powmod(x, p ** (k // r), f, p), x, p)
        if len(gcd(h, f, p)) != 1:
            return False
    return True


def is_squarefree(f, p):
    f = trim(f)
    d = deriv(f, p)
    if not d:
        return len(f) <= 1
    return len(gcd(f, d, p)) == 1


def ddf_degrees(f, p):
    """Distinct-degree factorization of a squarefree monic f.

    Returns a dict {degree: product of the irreducible factors of that degree}.
    """
    f = monic(trim(f), p)
    out = {}
    x = [0, 1]
    h = list(x)
    i = 0
    while len(f) - 1 >= 2 * (i + 1):
        i += 1
        h = powmod(h, p, f, p)
        g = gcd(sub(h, x, p), f, p)
        if len(g) > 1:
            out[i] = g
            f = divmod_(f, g, p)[0]
            h = mod(h, f, p)
    if len(f) > 1:
        out[len(f) - 1] = f
    return out


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


prime_factors = _prime_factors
igcd = _igcd
