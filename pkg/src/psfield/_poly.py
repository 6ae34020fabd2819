"""Dense univariate polynomials over a finite field engine.

A polynomial is a list of element codes, constant term first, with no
trailing zeros; ``[]`` is the zero polynomial.  Every function takes the
coefficient field ``F`` (a :class:`psfield.ff_core.GF`) explicitly.
"""

from __future__ import annotations


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def add(F, f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add(out[i], c)
    return trim(out)


def sub(F, f, g):
    return add(F, f, [F.neg(c) for c in g])


def mul(F, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] = F.add(out[i + j], F.mul(a, b))
    return trim(out)


def divmod_(F, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = len(g) - 1
    lead_inv = F.inv(g[-1])
    if len(f) - 1 < dg:
        return [], trim(f)
    quot = [0] * (len(f) - dg)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k]
        if c == 0:
            continue
        c = F.mul(c, lead_inv)
        quot[k - dg] = c
        for j, b in enumerate(g):
            if b:
                f[k - dg + j] = F.sub(f[k - dg + j], F.mul(c, b))
    return trim(quot), trim(f[:dg])


def mod(F, f, g):
    return divmod_(F, f, g)[1]


def monic(F, f):
    if not f:
        return []
    inv = F.inv(f[-1])
    return [F.mul(c, inv) for c in f]


def gcd(F, f, g):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, mod(F, f, g)
    return monic(F, f)


def powmod(F, f, e, m):
    result = [F.one]
    base = mod(F, f, m)
    while e:
        if e & 1:
            result = mod(F, mul(F, result, base), m)
        e >>= 1
        if e:
            base = mod(F, mul(F, base, base), m)
    return result


def evaluate(F, f, x):
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def prime_factors(m):
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def is_irreducible(F, f):
    """Rabin's test for a monic ``f`` of degree n over the field of size F.q."""
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    q = F.q
    x = [0, F.one]
    # frob[k] = x^(q^k) mod f
    frob = [mod(F, x, f)]
    for _ in range(n):
        frob.append(powmod(F, frob[-1], q, f))
    if trim(sub(F, frob[n], x)):
        return False
    for r in prime_factors(n):
        h = sub(F, frob[n // r], x)
        if len(gcd(F, f, h)) > 1:
            return False
    return True
