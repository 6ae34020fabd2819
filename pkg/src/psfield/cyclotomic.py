"""Cyclotomic data: unit groups mod p^k, the torsion criterion, p-power
subextensions over F_p, and coherent systems of p-power roots of unity.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import ff_core
from ._poly import prime_factors
from .ff_core import FFElem, FieldError, FieldSpec


@dataclass(frozen=True)
class UnitGroupView:
    """(Z/p^k)^* as a product of cyclic groups.

    ``q_part`` is the order of the torsion factor (p - 1 for odd p, 2 for
    p = 2 once k >= 2) and ``p_part`` the order of the cyclic p-power factor.
    For p = 2, k >= 3 this is Z/2 x Z/2^(k-2), not Z/2^(k-1) x Z/2.
    """

    p: int
    k: int
    q_part: int
    p_part: int

    @property
    def order(self) -> int:
        return self.q_part * self.p_part

    @property
    def factors(self) -> tuple[int, ...]:
        return tuple(f for f in (self.p_part, self.q_part) if f > 1)


def torsion_order(p: int, k: int = 2) -> int:
    if p == 2:
        return 1 if k == 1 else 2
    return p - 1


def unit_group_structure(p: int, k: int) -> UnitGroupView:
    if not ff_core.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("level must be >= 1")
    if p != 2:
        return UnitGroupView(p, k, p - 1, p ** (k - 1))
    if k == 1:
        return UnitGroupView(2, 1, 1, 1)
    return UnitGroupView(2, k, 2, 2 ** max(k - 2, 0))


def _np_powmod(base, e: int, m: int):
    base = np.asarray(base, dtype=np.int64) % m
    result = np.ones_like(base)
    while e:
        if e & 1:
            result = (result * base) % m
        e >>= 1
        if e:
            base = (base * base) % m
    return result


def unit_orders(p: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Every unit mod p^k with its exact multiplicative order.

    The l-primary part of each order is found by raising u^(phi / l^v) to
    successive l-th powers until it reaches 1.
    """
    m = p**k
    if m > 10**7:
        raise ValueError("modulus too large for enumeration")
    units = np.arange(1, m, dtype=np.int64)
    units = units[units % p != 0]
    phi = len(units)
    order = np.ones(phi, dtype=np.int64)
    for ell in prime_factors(phi) if phi > 1 else []:
        v = p_adic_valuation(phi, ell)
        y = _np_powmod(units, phi // ell**v, m)
        for _ in range(v):
            pending = y != 1
            if not pending.any():
                break
            order[pending] *= ell
            y = _np_powmod(y, ell, m)
    return units, order


def order_census(p: int, k: int) -> dict[int, int]:
    """{order: number of units mod p^k of that order}, by enumeration."""
    _, order = unit_orders(p, k)
    vals, counts = np.unique(order, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def _divisors(m: int) -> list[int]:
    divs = [1]
    for ell in prime_factors(m):
        v = p_adic_valuation(m, ell)
        divs = [d * ell**i for d in divs for i in range(v + 1)]
    return sorted(divs)


def predicted_census(factors) -> dict[int, int]:
    """Element-order census of a product of cyclic groups of the given orders."""
    total = math.prod(factors) if factors else 1
    divs = _divisors(total)
    exact: dict[int, int] = {}
    for d in divs:
        n = math.prod(math.gcd(d, f) for f in factors) if factors else 1
        exact[d] = n - sum(exact[e] for e in divs if e < d and d % e == 0)
    return {d: c for d, c in exact.items() if c}


def verify_unit_group(p: int, k: int) -> bool:
    view = unit_group_structure(p, k)
    return order_census(p, k) == predicted_census(view.factors)


def _check_unit(u: int, p: int):
    if math.gcd(u, p) != 1:
        raise ValueError(f"{u} is not a unit mod {p}")


def is_torsion_unit(u: int, p: int, k: int) -> bool:
    """True iff u lies in the torsion factor of (Z/p^k)^*: u^q = 1."""
    _check_unit(u, p)
    return pow(u, torsion_order(p, k), p**k) == 1


def restriction(u: int, p: int, i: int, j: int) -> int:
    """The restriction map (Z/p^i)^* -> (Z/p^j)^*."""
    if i < j:
        raise ValueError(f"cannot restrict from level {i} to higher level {j}")
    if j < 1:
        raise ValueError("levels start at 1")
    _check_unit(u, p)
    return u % p**j


def p_adic_valuation(m: int, p: int) -> int:
    if m == 0:
        raise ValueError("valuation of 0")
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def max_p_subextension_degree(p: int, m: int) -> int:
    """Degree over F_p of the largest p-power-degree subfield of F_{p^m}."""
    if m < 1:
        raise ValueError("degree must be >= 1")
    return p ** p_adic_valuation(m, p)


# -- coherent roots -----------------------------------------------------------


@dataclass(frozen=True)
class CoherentRootSystem:
    """omega_0 = 1, omega_{i+1}^p = omega_i, omega_i of exact order p^i.

    ``tower[i]`` is the smallest extension of the base containing mu_{p^i};
    ``roots[i]`` lives in ``tower[i]``.
    """

    p: int
    tower: tuple[FieldSpec, ...]
    roots: tuple[FFElem, ...]

    @property
    def depth(self) -> int:
        return len(self.roots) - 1

    @property
    def top(self) -> FieldSpec:
        return self.tower[-1]

    def lift(self, x: FFElem, level: int, target: FieldSpec | None = None) -> FFElem:
        """Carry ``x`` from ``tower[level]`` up the tower, then into ``target``."""
        for spec in self.tower[level + 1 :]:
            x = ff_core.embed(x, spec)
        if target is not None:
            x = ff_core.embed(x, target)
        return x

    def omega(self, i: int, target: FieldSpec | None = None) -> FFElem:
        return self.lift(self.roots[i], i, target)


def _min_degree(q: int, modulus: int, start: int = 1) -> int:
    e = start
    while (q**e - 1) % modulus:
        e += start
    return e


def build_coherent_roots(p: int, base: FieldSpec, depth: int) -> CoherentRootSystem:
    if base.p == p:
        raise ValueError("p must differ from the characteristic")
    if (base.q - 1) % p:
        raise ValueError(f"mu_{p} is not contained in F_{base.q}")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    tower = [base]
    roots = [ff_core.one(base)]
    e = 1
    for i in range(1, depth + 1):
        e = _min_degree(base.q, p**i, e)
        spec = ff_core.make_field(base.p, base.n * e)  # raises past the size cap
        F = ff_core.field_ops(spec)
        prev = ff_core.embed(roots[-1], spec) if tower[-1] != spec else roots[-1]
        step = (spec.q - 1) // p**i
        g = F.generator()
        cands = [
            F.pow(g, j * step)
            for j in range(p**i)
            if j % p
        ]
        cands = [c for c in cands if F.pow(c, p) == prev.code]
        if not cands:
            raise AssertionError("no coherent extension found")  # pragma: no cover
        tower.append(spec)
        roots.append(F.elem(min(cands, key=F.lex_key)))
    return CoherentRootSystem(p, tuple(tower), tuple(roots))


def coherence_failures(system: CoherentRootSystem) -> list[str]:
    """Every violated invariant of ``system``, as messages (empty when sound)."""
    out = []
    p = system.p
    if system.roots[0] != ff_core.one(system.tower[0]):
        out.append("omega_0 != 1")
    for i, w in enumerate(system.roots):
        if w.spec != system.tower[i]:
            out.append(f"omega_{i} not in tower level {i}")
        if i and w.field.element_order(w.code) != p**i:
            out.append(f"omega_{i} does not have order {p**i}")
        if i:
            prev = ff_core.embed(system.roots[i - 1], system.tower[i])
            if w**p != prev:
                out.append(f"omega_{i}^p != omega_{i - 1}")
    if system.depth >= 1 and system.roots[1] == ff_core.one(system.tower[1]):
        out.append("omega_1 == 1")
    return out


def tower_degrees(system: CoherentRootSystem) -> list[int]:
    return [s.n for s in system.tower]


def torsion_census(p: int, k: int) -> int:
    """Number of units u mod p^k with u^q = 1, by enumeration."""
    m = p**k
    q = torsion_order(p, k)
    return sum(1 for u in range(1, m) if u % p and pow(u, q, m) == 1)


def restriction_fibres(p: int, i: int, j: int) -> Counter:
    """How many level-i units restrict to each level-j unit."""
    return Counter(u % p**j for u in range(1, p**i) if u % p)
