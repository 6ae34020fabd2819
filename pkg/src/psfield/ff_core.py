"""Exact arithmetic in small finite fields F_{p^n}.

A field is a quotient F_p[x]/(f) by the canonical modulus f: the
lexicographically smallest monic irreducible of degree n, comparing
coefficient sequences constant term first.  Elements are coefficient
tuples in the basis 1, a, ..., a^(n-1) where a is the class of x.

Internally an element is also an integer code ``sum(c_i * p**i)``; the
per-field engine :class:`GF` works on codes and backs both the scalar
:class:`FFElem` API and the numpy bulk routines used by the verifiers.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import _poly

MAX_FIELD_SIZE = 1 << 22
# exp/log tables are built lazily for fields up to this size
TABLE_LIMIT = 1 << 18


class FieldError(ValueError):
    """Bad field request or cross-field operation."""


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**n``; raise FieldError when q is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = _poly.prime_factors(q)
    if len(p) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = p[0]
    n = round(math.log(q, p))
    while p**n < q:
        n += 1
    while p**n > q:
        n -= 1
    return p, n


@dataclass(frozen=True)
class FieldSpec:
    p: int
    n: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.n

    def __str__(self) -> str:
        return format_spec(self)


@functools.lru_cache(maxsize=None)
def make_field(p: int, n: int = 1) -> FieldSpec:
    """Return the canonical ``FieldSpec`` of F_{p^n}."""
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if n < 1:
        raise FieldError("extension degree must be >= 1")
    if p**n > MAX_FIELD_SIZE:
        raise FieldError(f"{p}^{n} exceeds the field size cap {MAX_FIELD_SIZE}")
    if n == 1:
        return FieldSpec(p, 1, (0, 1))
    Fp = GF(FieldSpec(p, 1, (0, 1)))
    # constant term 0 means x divides the candidate
    for c0 in range(1, p):
        for rest in itertools.product(range(p), repeat=n - 1):
            f = [c0, *rest, 1]
            if _poly.is_irreducible(Fp, f):
                return FieldSpec(p, n, tuple(f))
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@functools.lru_cache(maxsize=None)
def field_ops(spec: FieldSpec) -> "GF":
    """The shared arithmetic engine for ``spec``."""
    return GF(spec)


class GF:
    """Arithmetic on integer codes of one field."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.n = spec.n
        self.q = spec.q
        self.zero = 0
        self.one = 1
        self.weights = [self.p**i for i in range(self.n)]
        self._mod = list(spec.modulus)
        self._tables = None
        self._generator = None

    # -- coding ---------------------------------------------------------
    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def encode(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * w for c, w in zip(coeffs, self.weights))

    def lex_key(self, code: int) -> tuple[int, ...]:
        return self.decode(code)

    def lex_codes(self) -> Iterator[int]:
        """All codes, in lexicographic order of coefficient tuples."""
        for t in itertools.product(range(self.p), repeat=self.n):
            yield self.encode(t)

    # -- scalar arithmetic ----------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p, out, w = self.p, 0, 1
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * w
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.n == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        p, out, w = self.p, 0, 1
        while a:
            a, r = divmod(a, p)
            out += ((-r) % p) * w
            w *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        t = self.tables()
        if t is not None:
            exp, log = t[2], t[3]
            return exp[(log[a] + log[b]) % (self.q - 1)]
        return self._mul_poly(a, b)

    def _mul_poly(self, a: int, b: int) -> int:
        p, n, m = self.p, self.n, self._mod
        x, y = self.decode(a), self.decode(b)
        prod = [0] * (2 * n - 1)
        for i, u in enumerate(x):
            if u:
                for j, v in enumerate(y):
                    if v:
                        prod[i + j] += u * v
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(n):
                    prod[k - n + j] -= c * m[j]
        return self.encode([c % p for c in prod[:n]])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.n == 1:
            return pow(a, e, self.p)
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def _pow_poly(self, a: int, e: int) -> int:
        # table-free power; used before the tables exist
        if self.n == 1:
            return pow(a, e, self.p)
        result = 1
        while e:
            if e & 1:
                result = self._mul_poly(result, a)
            e >>= 1
            if e:
                a = self._mul_poly(a, a)
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.n == 1:
            return pow(a, self.p - 2, self.p)
        t = self.tables()
        if t is not None:
            return t[2][(-t[3][a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- structure -------------------------------------------------------
    def element_order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        order = self.q - 1
        for ell in _poly.prime_factors(self.q - 1):
            while order % ell == 0 and self.pow(a, order // ell) == 1:
                order //= ell
        return order

    def generator(self) -> int:
        """Lex-least generator of the multiplicative group."""
        if self._generator is None:
            primes = _poly.prime_factors(self.q - 1)
            for c in self.lex_codes():
                if c and all(self._pow_poly(c, (self.q - 1) // ell) != 1 for ell in primes):
                    self._generator = c
                    break
        return self._generator

    def tables(self):
        """(exp_np, log_np, exp_list, log_list) for q <= TABLE_LIMIT, else None.

        ``exp[k] = g**k`` for the canonical generator g, built by repeated
        multiplication with the matrix of x -> g*x; ``log[0] = -1``.
        """
        if self._tables is None and self.q <= TABLE_LIMIT:
            self._tables = self._build_tables()
        return self._tables

    def _build_tables(self):
        p, n, q = self.p, self.n, self.q
        g = self.generator()
        # column j holds the coordinates of g * a^j
        mat = np.zeros((n, n), dtype=np.int64)
        for j in range(n):
            basis = p**j
            prod = self._mul_poly(g, basis) if n > 1 else (g * basis) % p
            mat[:, j] = self.decode(prod)
        powers = np.zeros((q - 1, n), dtype=np.int64)
        powers[0, 0] = 1
        filled = 1
        step = mat
        while filled < q - 1:
            take = min(filled, q - 1 - filled)
            powers[filled : filled + take] = (powers[:take] @ step.T) % p
            step = (step @ step) % p
            filled += take
        exp = powers @ np.array(self.weights, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        if (log[1:] < 0).any():
            raise AssertionError("generator does not generate")  # pragma: no cover
        return exp, log, exp.tolist(), log.tolist()

    # -- bulk (numpy) arithmetic ----------------------------------------
    def np_add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self.weights:
            out += (((a // w) % self.p + (b // w) % self.p) % self.p) * w
        return out

    def np_neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.n == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        out = np.zeros_like(a)
        for w in self.weights:
            out += ((-((a // w) % self.p)) % self.p) * w
        return out

    def np_sub(self, a, b):
        return self.np_add(a, self.np_neg(b))

    def np_mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return (a * b) % self.p
        t = self.tables()
        if t is None:
            raise FieldError("bulk multiplication needs exp/log tables")
        exp, log = t[0], t[1]
        idx = (log[a] + log[b]) % (self.q - 1)
        return np.where((a == 0) | (b == 0), 0, exp[idx])

    def np_pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        result = np.ones_like(a)
        while e:
            if e & 1:
                result = self.np_mul(result, a)
            e >>= 1
            if e:
                a = self.np_mul(a, a)
        return result

    def all_codes(self):
        return np.arange(self.q, dtype=np.int64)

    # -- element wrappers -------------------------------------------------
    def elem(self, code: int) -> "FFElem":
        return FFElem(self.spec, self.decode(code))


@dataclass(frozen=True)
class FFElem:
    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.spec.n or any(
            not 0 <= c < self.spec.p for c in self.coeffs
        ):
            raise FieldError(f"bad coefficients {self.coeffs} for {self.spec}")

    @property
    def code(self) -> int:
        return field_ops(self.spec).encode(self.coeffs)

    @property
    def field(self) -> GF:
        return field_ops(self.spec)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _other(self, other) -> int:
        if isinstance(other, FFElem):
            if other.spec is not self.spec and other.spec != self.spec:
                raise FieldError(f"spec mismatch: {self.spec} vs {other.spec}")
            return other.code
        if isinstance(other, int):
            return other % self.spec.p
        return NotImplemented

    def _wrap(self, code: int) -> "FFElem":
        return self.field.elem(code)

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(b, self.code))

    def __neg__(self):
        return self._wrap(self.field.neg(self.code))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.code, e))

    def __repr__(self) -> str:
        if self.spec.n == 1:
            return f"{self.coeffs[0]}"
        return format_element(self)


# -- spec-level operations ---------------------------------------------------


def element(spec: FieldSpec, value) -> FFElem:
    """Build an element from an int (prime-field constant) or a coefficient list."""
    if isinstance(value, FFElem):
        if value.spec != spec:
            raise FieldError("element belongs to another field; use embed()")
        return value
    if isinstance(value, int):
        return FFElem(spec, (value % spec.p,) + (0,) * (spec.n - 1))
    coeffs = [c % spec.p for c in value]
    if len(coeffs) > spec.n:
        raise FieldError(f"too many coefficients for {spec}")
    return FFElem(spec, tuple(coeffs) + (0,) * (spec.n - len(coeffs)))


def zero(spec: FieldSpec) -> FFElem:
    return element(spec, 0)


def one(spec: FieldSpec) -> FFElem:
    return element(spec, 1)


def generator_elem(spec: FieldSpec) -> FFElem:
    """The class of x, i.e. the root of the modulus."""
    return element(spec, [0, 1]) if spec.n > 1 else element(spec, (-spec.modulus[0]) % spec.p)


def elements(spec: FieldSpec) -> Iterator[FFElem]:
    """All elements in lexicographic order."""
    for t in itertools.product(range(spec.p), repeat=spec.n):
        yield FFElem(spec, t)


def arith(a: FFElem, b: FFElem, kind: str) -> FFElem:
    if a.spec != b.spec:
        raise FieldError(f"spec mismatch: {a.spec} vs {b.spec}")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown operation {kind!r}")


def power(a: FFElem, e: int) -> FFElem:
    return a**e


def inv(a: FFElem) -> FFElem:
    return a._wrap(a.field.inv(a.code))


def frobenius(a: FFElem, r: int = 1) -> FFElem:
    """a ** (p ** r)."""
    if r < 0:
        raise ValueError("Frobenius iterate must be >= 0")
    r %= a.spec.n
    return a ** (a.spec.p**r)


def multiplicative_generator(spec: FieldSpec) -> FFElem:
    return field_ops(spec).elem(field_ops(spec).generator())


def trace_to_prime(a: FFElem) -> int:
    t = a
    x = a
    for _ in range(a.spec.n - 1):
        x = frobenius(x, 1)
        t = t + x
    if any(t.coeffs[1:]):
        raise AssertionError("trace left the prime field")  # pragma: no cover
    return t.coeffs[0]


def roots_of_unity(spec: FieldSpec, m: int) -> list[FFElem]:
    """{x : x^m = 1}, ordered by discrete log w.r.t. the canonical generator."""
    if m < 1:
        raise ValueError("order must be >= 1")
    F = field_ops(spec)
    d = math.gcd(m, spec.q - 1)
    step = (spec.q - 1) // d
    g = F.generator()
    return [F.elem(F.pow(g, j * step)) for j in range(d)]


def discrete_log(x: FFElem, g: FFElem) -> int:
    """Least e >= 0 with g**e == x."""
    if x.spec != g.spec:
        raise FieldError("spec mismatch")
    if x.is_zero():
        raise ValueError("discrete log of zero")
    F = x.field
    t = F.tables()
    xc, gc = x.code, g.code
    if t is not None and gc != 0:
        M = F.q - 1
        lg, lx = t[3][gc], t[3][xc]
        d = math.gcd(lg, M)
        if lx % d:
            raise ValueError(f"{x!r} is not a power of {g!r}")
        m = M // d
        return (lx // d) * pow(lg // d, -1, m) % m if m > 1 else 0
    acc, e = 1, 0
    while True:
        if acc == xc:
            return e
        acc = F.mul(acc, gc)
        e += 1
        if acc == 1:
            raise ValueError(f"{x!r} is not a power of {g!r}")


def subfield_codes(spec: FieldSpec, d: int) -> list[int]:
    """Codes of the unique subfield of order p^d (d | n)."""
    if spec.n % d:
        raise FieldError(f"no subfield of degree {d} in {spec}")
    F = field_ops(spec)
    step = (spec.q - 1) // (spec.p**d - 1)
    g = F.generator()
    return [0] + [F.pow(g, j * step) for j in range(spec.p**d - 1)]


@functools.lru_cache(maxsize=None)
def canonical_root(source: FieldSpec, target: FieldSpec) -> int:
    """Code of the lex-least root of ``source.modulus`` inside ``target``."""
    if source.p != target.p or target.n % source.n:
        raise FieldError(f"{source} does not embed in {target}")
    F = field_ops(target)
    f = list(source.modulus)  # prime-field codes coincide with their values
    roots = [c for c in subfield_codes(target, source.n) if _poly.evaluate(F, f, c) == 0]
    return min(roots, key=F.lex_key)


def embed(a: FFElem, target: FieldSpec) -> FFElem:
    """Image of ``a`` under the canonical embedding into ``target``.

    The class of x is sent to the lex-least root of the source modulus.  A
    field embeds into itself by the identity.
    """
    if a.spec == target:
        return a
    F = field_ops(target)
    r = canonical_root(a.spec, target)
    return F.elem(_poly.evaluate(F, list(a.coeffs), r))


# -- textual literals ----------------------------------------------------------

_SPEC_RE = re.compile(r"^\s*(\d+)\^(\d+):([\d,\s]+)$")


def format_spec(spec: FieldSpec) -> str:
    return f"{spec.p}^{spec.n}:" + ",".join(str(c) for c in spec.modulus)


def parse_spec(text: str) -> FieldSpec:
    m = _SPEC_RE.match(text)
    if not m:
        raise FieldError(f"bad field literal {text!r}; expected p^n:c0,c1,...")
    p, n = int(m.group(1)), int(m.group(2))
    coeffs = tuple(int(c) for c in m.group(3).split(",") if c.strip())
    spec = make_field(p, n)
    if coeffs != spec.modulus:
        raise FieldError(f"{text!r} is not the canonical modulus {format_spec(spec)}")
    return spec


def format_element(a: FFElem) -> str:
    return "[" + ",".join(str(c) for c in a.coeffs) + "]"


def parse_element(text: str, spec: FieldSpec) -> FFElem:
    text = text.strip()
    if text.startswith("[") and text.endswith("]"):
        body = text[1:-1].strip()
        coeffs = [int(c) for c in body.split(",")] if body else []
        if any(not 0 <= c < spec.p for c in coeffs):
            raise FieldError(f"coefficient out of range in {text!r}")
        return element(spec, coeffs)
    if re.fullmatch(r"-?\d+", text):
        return element(spec, int(text))
    raise FieldError(f"bad element literal {text!r}")
