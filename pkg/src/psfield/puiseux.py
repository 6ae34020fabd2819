"""Finite sums of monomials x^(a/b) with finite-field coefficients, the
automorphism tau (scaling x^(1/p^i) by a coherent root omega_i) and the
coefficientwise Frobenius sigma.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import ff_core
from .cyclotomic import CoherentRootSystem, p_adic_valuation
from .ff_core import FFElem, FieldError, FieldSpec


@dataclass(frozen=True)
class DenominatorBounds:
    """Exponent denominators allowed: p^i * n' with i <= depth, p !| n', n' <= n_max."""

    p: int
    depth: int
    n_max: int = 6

    def split(self, den: int) -> tuple[int, int]:
        i = p_adic_valuation(den, self.p)
        return i, den // self.p**i

    def admits(self, exponent: Fraction) -> bool:
        i, n = self.split(exponent.denominator)
        return i <= self.depth and n <= self.n_max


class DenominatorError(ValueError):
    pass


@dataclass(frozen=True)
class PuiseuxTerm:
    coeff: FFElem
    exponent: Fraction

    def __post_init__(self):
        if self.coeff.is_zero():
            raise ValueError("zero terms are not stored")
        object.__setattr__(self, "exponent", Fraction(self.exponent))


@dataclass(frozen=True)
class TruncatedSeries:
    """Sorted by exponent, distinct exponents, no zero coefficients."""

    spec: FieldSpec
    terms: tuple[PuiseuxTerm, ...] = ()
    bounds: DenominatorBounds | None = field(default=None, compare=False)

    def __post_init__(self):
        exps = [t.exponent for t in self.terms]
        if exps != sorted(set(exps)):
            raise ValueError("terms must have distinct, increasing exponents")
        for t in self.terms:
            if t.coeff.spec != self.spec:
                raise FieldError("coefficient outside the series field")
            if self.bounds is not None and not self.bounds.admits(t.exponent):
                raise DenominatorError(f"exponent {t.exponent} exceeds the denominator bounds")

    def as_dict(self) -> dict[Fraction, tuple[int, ...]]:
        return {t.exponent: t.coeff.coeffs for t in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        return series_arith(self, other, "add")

    def __mul__(self, other):
        return series_arith(self, other, "mul")

    def __str__(self):
        return format_series(self)


def make_series(spec: FieldSpec, pairs, bounds: DenominatorBounds | None = None) -> TruncatedSeries:
    """Series from (coeff, exponent) pairs; like exponents are summed."""
    acc: dict[Fraction, FFElem] = {}
    for c, e in pairs:
        if not isinstance(c, FFElem):
            c = ff_core.element(spec, c)
        c = ff_core.embed(c, spec)
        e = Fraction(e)
        acc[e] = acc[e] + c if e in acc else c
    terms = tuple(PuiseuxTerm(acc[e], e) for e in sorted(acc) if not acc[e].is_zero())
    return TruncatedSeries(spec, terms, bounds)


def monomial(spec: FieldSpec, exponent, coeff=1, bounds=None) -> TruncatedSeries:
    return make_series(spec, [(coeff, exponent)], bounds)


def join_field(a: FieldSpec, b: FieldSpec) -> FieldSpec:
    if a.p != b.p:
        raise FieldError("coefficient fields of different characteristic")
    if a == b:
        return a
    return ff_core.make_field(a.p, math.lcm(a.n, b.n))


def promote(s: TruncatedSeries, target: FieldSpec) -> TruncatedSeries:
    if s.spec == target:
        return s
    terms = tuple(PuiseuxTerm(ff_core.embed(t.coeff, target), t.exponent) for t in s.terms)
    return TruncatedSeries(target, terms, s.bounds)


def _merge_bounds(a, b):
    if a is None or b is None:
        return a or b
    if a.p != b.p:
        raise ValueError("incompatible denominator bounds")
    return DenominatorBounds(a.p, min(a.depth, b.depth), min(a.n_max, b.n_max))


def series_arith(s: TruncatedSeries, t: TruncatedSeries, kind: str) -> TruncatedSeries:
    """s + t or s * t, coefficients promoted into the join field."""
    spec = join_field(s.spec, t.spec)
    s, t = promote(s, spec), promote(t, spec)
    bounds = _merge_bounds(s.bounds, t.bounds)
    if kind == "add":
        pairs = [(x.coeff, x.exponent) for x in s.terms + t.terms]
    elif kind == "mul":
        pairs = [(x.coeff * y.coeff, x.exponent + y.exponent) for x in s.terms for y in t.terms]
    else:
        raise ValueError(f"unknown operation {kind!r}")
    return make_series(spec, pairs, bounds)


# -- tau and sigma ---------------------------------------------------------------


def tau_factor(system: CoherentRootSystem, exponent: Fraction, target: FieldSpec) -> FFElem:
    """The scalar tau multiplies x^exponent by, inside ``target``.

    For a/(p^i n') in lowest terms with p !| n' this is omega_i^(a inv(n') mod p^i).
    """
    exponent = Fraction(exponent)
    p = system.p
    i = p_adic_valuation(exponent.denominator, p)
    if i > system.depth:
        raise DenominatorError(f"denominator {exponent.denominator} is deeper than the root system")
    if i == 0:
        return ff_core.one(target)
    n_prime = exponent.denominator // p**i
    m = p**i
    k = exponent.numerator * pow(n_prime, -1, m) % m
    return system.omega(i, target) ** k


def tau_apply(system: CoherentRootSystem, s, power: int = 1):
    """tau^power on a term or series; coefficients are left alone."""
    if isinstance(s, PuiseuxTerm):
        out = tau_apply(system, TruncatedSeries(s.coeff.spec, (s,)), power)
        return out.terms[0]
    target = join_field(s.spec, system.top)
    s = promote(s, target)
    terms = tuple(
        PuiseuxTerm(t.coeff * tau_factor(system, t.exponent, target) ** power, t.exponent)
        for t in s.terms
    )
    return TruncatedSeries(target, terms, s.bounds)


def sigma_apply(s, r: int):
    """Apply x -> x^(char^r) to every coefficient."""
    if isinstance(s, PuiseuxTerm):
        return PuiseuxTerm(ff_core.frobenius(s.coeff, r), s.exponent)
    terms = tuple(PuiseuxTerm(ff_core.frobenius(t.coeff, r), t.exponent) for t in s.terms)
    return TruncatedSeries(s.spec, terms, s.bounds)


# -- verification ----------------------------------------------------------------


@dataclass
class CommutationReport:
    coefficient_field: str
    sigma_power: int
    generators_checked: int = 0
    series_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self, max_witnesses: int = 10) -> dict:
        return {
            "coefficient_field": self.coefficient_field,
            "sigma_power": self.sigma_power,
            "generators_checked": self.generators_checked,
            "series_checked": self.series_checked,
            "failures": [str(f) for f in self.failures[:max_witnesses]],
        }


def generator_exponents(p: int, depth: int, n_max: int) -> list[Fraction]:
    """x^(1/p^i), x^(1/n') and the mixed x^(1/(p^i n')) up to the bounds."""
    out = []
    for i in range(depth + 1):
        for n in range(1, n_max + 1):
            if n % p == 0:
                continue
            out.append(Fraction(1, p**i * n))
    return out


def _random_series(rng, spec: FieldSpec, bounds: DenominatorBounds, terms: int) -> TruncatedSeries:
    F = ff_core.field_ops(spec)
    pairs = []
    for _ in range(terms):
        i = int(rng.integers(0, bounds.depth + 1))
        n = int(rng.integers(1, bounds.n_max + 1))
        while n % bounds.p == 0:
            n = int(rng.integers(1, bounds.n_max + 1))
        den = bounds.p**i * n
        num = int(rng.integers(-2 * den, 3 * den))
        pairs.append((F.elem(int(rng.integers(0, spec.q))), Fraction(num, den)))
    return make_series(spec, pairs, bounds)


def commutation_field(system: CoherentRootSystem) -> FieldSpec:
    """Quadratic extension of the top level: sigma moves its coefficients
    while fixing every omega_i."""
    top = system.top
    return ff_core.make_field(top.p, 2 * top.n)


def verify_commutation(
    system: CoherentRootSystem,
    depth: int | None = None,
    samples: int = 1000,
    seed: int = 0,
    n_max: int = 6,
    sigma_power: int | None = None,
) -> CommutationReport:
    """Check sigma tau = tau sigma on generators and on random series.

    sigma is the |top|-power Frobenius on a quadratic extension of the top
    level, so it fixes each omega_i and moves generic coefficients
    (``sigma_power`` overrides the Frobenius iterate).  The
    random series also test tau(s t) = tau(s) tau(t) and tau(s + t).
    """
    depth = system.depth if depth is None else depth
    if depth > system.depth:
        raise DenominatorError("depth exceeds the root system")
    C = commutation_field(system)
    r = system.top.n if sigma_power is None else sigma_power
    report = CommutationReport(ff_core.format_spec(C), r)
    F = ff_core.field_ops(C)
    rng = np.random.default_rng(seed)
    bounds = DenominatorBounds(system.p, depth, n_max)

    def commute(s):
        return tau_apply(system, sigma_apply(s, r)) == sigma_apply(tau_apply(system, s), r)

    for e in generator_exponents(system.p, depth, n_max):
        for coeff in (F.one, int(rng.integers(1, C.q))):
            m = monomial(C, e, F.elem(coeff), bounds)
            report.generators_checked += 1
            if not commute(m):
                report.failures.append(("generator", e, coeff))
    for _ in range(samples):
        s = _random_series(rng, C, bounds, int(rng.integers(0, 5)))
        t = _random_series(rng, C, bounds, int(rng.integers(0, 5)))
        report.series_checked += 1
        if not commute(s):
            report.failures.append(("commute", format_series(s)))
        ts, tt = tau_apply(system, s), tau_apply(system, t)
        try:
            st = s * t
        except DenominatorError:
            st = None
        if st is not None and tau_apply(system, st) != ts * tt:
            report.failures.append(("multiplicative", format_series(s), format_series(t)))
        if tau_apply(system, s + t) != ts + tt:
            report.failures.append(("additive", format_series(s), format_series(t)))
    return report


def tau_orbit(system: CoherentRootSystem, exponent, limit: int = 10**4) -> list[TruncatedSeries]:
    """Distinct images of x^exponent under tau, tau^2, ... (starting at x^exponent)."""
    m = monomial(system.top, exponent)
    orbit = [m]
    while len(orbit) < limit:
        m = tau_apply(system, m)
        if m == orbit[0]:
            return orbit
        orbit.append(m)
    raise RuntimeError("orbit did not close")  # pragma: no cover


def kummer_orbit_order(system: CoherentRootSystem, p: int | None = None) -> int:
    """Size of the tau-orbit of x^(1/p); also asserts tau fixes x^k for k in Z."""
    p = system.p if p is None else p
    if p != system.p:
        raise ValueError("p must match the root system")
    if system.depth < 1:
        raise ValueError("depth must be >= 1")
    for k in range(-3, 4):
        x = monomial(system.top, k)
        if tau_apply(system, x) != x:
            raise AssertionError(f"tau moves x^{k}")
    return len(tau_orbit(system, Fraction(1, p)))


def tau_order(system: CoherentRootSystem, i: int) -> int:
    """Order of tau on x^(1/p^i)."""
    return len(tau_orbit(system, Fraction(1, system.p**i)))


# -- literals ---------------------------------------------------------------------

_TERM_RE = re.compile(
    r"^(?:(?P<c>\[[^\]]*\]|-?\d+)\s*\*?\s*)?(?P<x>x(?:\^\(?\s*(?P<a>-?\d+)\s*(?:/\s*(?P<b>\d+))?\s*\)?)?)?$"
)


def format_series(s: TruncatedSeries) -> str:
    if not s.terms:
        return "0"
    parts = []
    for t in s.terms:
        e = t.exponent
        parts.append(f"{ff_core.format_element(t.coeff)}*x^({e.numerator}/{e.denominator})")
    return " + ".join(parts)


def parse_series(text: str, spec: FieldSpec, bounds: DenominatorBounds | None = None) -> TruncatedSeries:
    """Parse ``c0*x^(a/b) + c1*x^(a/b) + ...``; ``x``, ``x^k`` and bare constants also work."""
    text = text.strip()
    if text == "0":
        return TruncatedSeries(spec, (), bounds)
    pairs = []
    for chunk in _split_terms(text):
        m = _TERM_RE.match(chunk.strip())
        if not m or not (m.group("c") or m.group("x")):
            raise ValueError(f"bad term {chunk!r}")
        c = ff_core.parse_element(m.group("c"), spec) if m.group("c") else ff_core.one(spec)
        if m.group("x") is None:
            e = Fraction(0)
        elif m.group("a") is None:
            e = Fraction(1)
        else:
            b = int(m.group("b") or 1)
            if b == 0:
                raise ValueError("zero denominator")
            e = Fraction(int(m.group("a")), b)
        pairs.append((c, e))
    return make_series(spec, pairs, bounds)


def _split_terms(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "+" and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    if any(not c.strip() for c in out):
        raise ValueError(f"empty term in {text!r}")
    return out
