"""Definable p-tournaments on finite fields containing mu_p.

With omega a primitive p-th root of unity and S a transversal of
F^*/mu_p, the relation R_w(x) holds iff x_1 + w x_2 + ... + w^(p-1) x_p
lies in S.  R(x) is R_{omega^i}(x) for the least i whose form is nonzero.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import ff_core, linalg
from .ff_core import FFElem, FieldSpec
from .parallel import run_partitioned

# largest q^p the exhaustive verifier accepts
SCAN_BUDGET = 10**7


@dataclass(frozen=True)
class TournamentParams:
    spec: FieldSpec
    p: int
    omega: FFElem
    reps: tuple[FFElem, ...]

    @cached_property
    def rep_codes(self) -> frozenset[int]:
        return frozenset(r.code for r in self.reps)

    def omega_powers(self, i: int) -> list[int]:
        """Codes of (omega^i)^j for j = 0..p-1."""
        F = ff_core.field_ops(self.spec)
        w = F.pow(self.omega.code, i)
        return [F.pow(w, j) for j in range(self.p)]


@dataclass
class VerificationReport:
    field: str
    arity: int
    tuples_checked: int = 0
    violations: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(
            self.field,
            self.arity,
            self.tuples_checked + other.tuples_checked,
            self.violations + other.violations,
            self.wall_time + other.wall_time,
        )

    def to_dict(self, max_witnesses: int | None = None) -> dict:
        v = self.violations if max_witnesses is None else self.violations[:max_witnesses]
        return {
            "field": self.field,
            "arity": self.arity,
            "tuples_checked": self.tuples_checked,
            "violation_count": len(self.violations),
            "violations": [list(t) for t in v],
        }


def _require_mu_p(spec: FieldSpec, p: int):
    if p == spec.p:
        raise ValueError("p must differ from the characteristic")
    if (spec.q - 1) % p:
        raise ValueError(f"{p} does not divide {spec.q} - 1: mu_{p} is not in F_{spec.q}")


def canonical_omega(spec: FieldSpec, p: int) -> FFElem:
    """Lex-least element of exact order p."""
    _require_mu_p(spec, p)
    cands = [x for x in ff_core.roots_of_unity(spec, p) if x.code != 1]
    return min(cands, key=lambda x: x.coeffs) if cands else ff_core.one(spec)


def coset_representatives(spec: FieldSpec, p: int) -> tuple[FFElem, ...]:
    """{g^j : 0 <= j < (q-1)/p} for the canonical generator g."""
    _require_mu_p(spec, p)
    F = ff_core.field_ops(spec)
    g = F.generator()
    return tuple(F.elem(F.pow(g, j)) for j in range((spec.q - 1) // p))


def is_transversal(spec: FieldSpec, p: int, reps) -> bool:
    """Every x in F^* is s*z for exactly one s in reps, z in mu_p."""
    F = ff_core.field_ops(spec)
    mu = [z.code for z in ff_core.roots_of_unity(spec, p)]
    seen: dict[int, int] = {}
    for s in reps:
        for z in mu:
            x = F.mul(s.code, z)
            seen[x] = seen.get(x, 0) + 1
    return len(reps) * len(mu) == spec.q - 1 and all(
        seen.get(x, 0) == 1 for x in range(1, spec.q)
    )


def make_params(spec: FieldSpec, p: int, omega: FFElem | None = None, reps=None) -> TournamentParams:
    _require_mu_p(spec, p)
    if omega is None:
        omega = canonical_omega(spec, p)
    elif omega.field.element_order(omega.code) != p:
        raise ValueError(f"{omega!r} does not have exact order {p}")
    if reps is None:
        reps = coset_representatives(spec, p)
    else:
        reps = tuple(reps)
        if not is_transversal(spec, p, reps):
            raise ValueError("reps is not a transversal of F^*/mu_p")
    return TournamentParams(spec, p, omega, reps)


# -- scalar relation ----------------------------------------------------------


def linear_form(params: TournamentParams, omega_power: FFElem, x) -> FFElem:
    """x_1 + w x_2 + ... + w^(p-1) x_p."""
    if len(x) != params.p:
        raise ValueError(f"expected a {params.p}-tuple, got {len(x)} entries")
    acc = ff_core.zero(params.spec)
    w = ff_core.one(params.spec)
    for xi in x:
        acc = acc + w * xi
        w = w * omega_power
    return acc


def r_omega_holds(params: TournamentParams, omega_power: FFElem, x) -> bool:
    # 0 is never in S, which lies inside F^*
    return linear_form(params, omega_power, x).code in params.rep_codes


def _check_distinct(x):
    if len({(e.coeffs if isinstance(e, FFElem) else e) for e in x}) != len(x):
        raise ValueError("tuple entries must be pairwise distinct")


def leading_index(params: TournamentParams, x) -> int:
    """Least i in 1..p-1 whose omega^i-form is nonzero."""
    _check_distinct(x)
    for i in range(1, params.p):
        if not linear_form(params, params.omega**i, x).is_zero():
            return i
    raise AssertionError("distinct tuple with all forms zero")  # contradicts the Vandermonde rank


def tournament_holds(params: TournamentParams, x) -> bool:
    i = leading_index(params, x)
    return r_omega_holds(params, params.omega**i, x)


def rotate(x, k: int):
    """(x_{k+1}, ..., x_p, x_1, ..., x_k): the rotation pi with pi(1) = k + 1."""
    k %= len(x)
    return tuple(x[k:]) + tuple(x[:k])


# -- exhaustive verification ----------------------------------------------------


def _dlog_order(spec: FieldSpec) -> list[int]:
    F = ff_core.field_ops(spec)
    g = F.generator()
    out, x = [0], 1
    for _ in range(spec.q - 1):
        out.append(x)
        x = F.mul(x, g)
    return out


def _tuple_values(F, X, powers):
    """The R-value of every row of X: the leading nonzero form, or -1."""
    p = X.shape[1]
    value = np.full(X.shape[0], -1, dtype=np.int64)
    for i in range(1, p):
        form = np.zeros(X.shape[0], dtype=np.int64)
        for j in range(p):
            form = F.np_add(form, F.np_mul(np.int64(powers[i][j]), X[:, j]))
        value = np.where((value < 0) & (form != 0), form, value)
    return value


def _scan_partition(task):
    spec, p, omega_code, rep_codes, order, first = task
    F = ff_core.field_ops(spec)
    rest = [c for c in order if c != first]
    combos = np.array(list(itertools.permutations(rest, p - 1)), dtype=np.int64).reshape(-1, p - 1)
    X = np.hstack([np.full((len(combos), 1), first, dtype=np.int64), combos])
    powers = [[F.pow(F.pow(omega_code, i), j) for j in range(p)] for i in range(p)]
    reps = np.array(sorted(rep_codes), dtype=np.int64)
    count = np.zeros(len(X), dtype=np.int64)
    for k in range(p):
        value = _tuple_values(F, np.roll(X, -k, axis=1), powers)
        if (value < 0).any():
            raise AssertionError("distinct tuple with all forms zero")
        count += np.isin(value, reps)
    bad = np.nonzero(count != 1)[0]
    return len(X), [tuple(int(c) for c in X[b]) + (int(count[b]),) for b in bad]


def _label(spec: FieldSpec) -> str:
    return f"F_{spec.q}"


def verify_p_tournament(params: TournamentParams, threads: int = 1) -> VerificationReport:
    """Check exactly-one-rotation on every tuple of p distinct elements.

    The scan is partitioned by first coordinate; violations are reported as
    code tuples with the number of satisfied rotations appended.
    """
    spec, p = params.spec, params.p
    if spec.q**p > SCAN_BUDGET:
        raise ValueError(f"q^p = {spec.q**p} exceeds the scan budget {SCAN_BUDGET}")
    t0 = time.perf_counter()
    order = _dlog_order(spec)
    tasks = [
        (spec, p, params.omega.code, tuple(sorted(params.rep_codes)), tuple(order), first)
        for first in order
    ]
    report = VerificationReport(_label(spec), p)
    for n, bad in run_partitioned(_scan_partition, tasks, threads):
        report.tuples_checked += n
        report.violations.extend(bad)
    report.wall_time = time.perf_counter() - t0
    return report


# -- p = 2 variants ---------------------------------------------------------------


def _nonzero_powers(spec: FieldSpec, e: int) -> frozenset[int]:
    """{x^e : x in F^*}, by enumeration."""
    F = ff_core.field_ops(spec)
    return frozenset(F.pow(x, e) for x in range(1, spec.q))


def square_tournament_holds(spec: FieldSpec, x: FFElem, y: FFElem) -> bool:
    """(exists z) z^2 = x - y, for x != y."""
    _require_no_sqrt_minus_one(spec)
    if x == y:
        raise ValueError("the tournament relation is irreflexive; need x != y")
    return (x - y).code in _nonzero_powers(spec, 2)


def _require_no_sqrt_minus_one(spec: FieldSpec):
    if spec.p == 2:
        raise ValueError("characteristic 2 has no square tournament")
    if spec.q % 4 != 3:
        raise ValueError(f"-1 is a square in F_{spec.q}; the construction does not apply")


def _binary_scan(spec: FieldSpec, holds) -> VerificationReport:
    t0 = time.perf_counter()
    report = VerificationReport(_label(spec), 2)
    for x in range(spec.q):
        for y in range(spec.q):
            if x == y:
                continue
            report.tuples_checked += 1
            if holds(x, y) == holds(y, x):
                report.violations.append((x, y))
    report.wall_time = time.perf_counter() - t0
    return report


def verify_square_tournament(spec: FieldSpec) -> VerificationReport:
    _require_no_sqrt_minus_one(spec)
    F = ff_core.field_ops(spec)
    squares = _nonzero_powers(spec, 2)
    return _binary_scan(spec, lambda x, y: F.sub(x, y) in squares)


@dataclass(frozen=True)
class Mu2nTournament:
    """R(x, y) iff x - y lies in the union of c * (F^*)^(2^n), c in S."""

    spec: FieldSpec
    n: int
    reps: tuple[FFElem, ...]

    @cached_property
    def classes(self) -> frozenset[int]:
        F = ff_core.field_ops(self.spec)
        powers = _nonzero_powers(self.spec, 2**self.n)
        return frozenset(F.mul(c.code, x) for c in self.reps for x in powers)

    def holds(self, x: FFElem, y: FFElem) -> bool:
        if x == y:
            raise ValueError("need x != y")
        return (x - y).code in self.classes


@dataclass
class Mu2nResult:
    relation: Mu2nTournament
    decomposition_ok: bool
    power_subgroup_size: int
    report: VerificationReport

    @property
    def ok(self) -> bool:
        return self.decomposition_ok and self.report.ok


def coset_decomposition_ok(spec: FieldSpec, n: int) -> tuple[bool, int]:
    """F^* is the disjoint union of c (F^*)^(2^n) over c in mu_{2^n}."""
    F = ff_core.field_ops(spec)
    powers = _nonzero_powers(spec, 2**n)
    mu = [c.code for c in ff_core.roots_of_unity(spec, 2**n)]
    cover: dict[int, int] = {}
    for c in mu:
        for x in powers:
            y = F.mul(c, x)
            cover[y] = cover.get(y, 0) + 1
    ok = (
        len(mu) * len(powers) == spec.q - 1
        and len(cover) == spec.q - 1
        and all(v == 1 for v in cover.values())
    )
    return ok, len(powers)


def mu2n_tournament(spec: FieldSpec, n: int) -> Mu2nResult:
    if spec.p == 2:
        raise ValueError("characteristic must be odd")
    if n < 1:
        raise ValueError("n must be >= 1 so that -1 lies in mu_{2^n}")
    if (spec.q - 1) % 2**n:
        raise ValueError(f"mu_{2**n} is not contained in F_{spec.q}")
    if (spec.q - 1) % 2 ** (n + 1) == 0:
        raise ValueError(f"F_{spec.q} contains all {2 ** (n + 1)}-th roots of unity")
    mu = ff_core.roots_of_unity(spec, 2**n)
    reps = []
    for c in mu:
        pair = min(c, -c, key=lambda e: e.coeffs)
        if pair not in reps:
            reps.append(pair)
    reps.sort(key=lambda e: e.coeffs)
    rel = Mu2nTournament(spec, n, tuple(reps))
    decomp, size = coset_decomposition_ok(spec, n)
    classes = rel.classes
    F = ff_core.field_ops(spec)
    report = _binary_scan(spec, lambda x, y: F.sub(x, y) in classes)
    return Mu2nResult(rel, decomp, size, report)


# -- counting and linear algebra ---------------------------------------------------


def power_index(spec: FieldSpec, p: int) -> int:
    """[F^* : (F^*)^p], counting the p-th powers of all nonzero elements."""
    F = ff_core.field_ops(spec)
    xs = np.arange(1, spec.q, dtype=np.int64)
    image = np.unique(F.np_pow(xs, p))
    return (spec.q - 1) // len(image)


def vandermonde_kernel_dim(p: int, omega: FFElem):
    """Rank and kernel basis of the (p-1) x p matrix with rows (omega^(i j))_j."""
    F = omega.field
    if F.element_order(omega.code) != p:
        raise ValueError(f"{omega!r} does not have exact order {p}")
    rows = [[F.pow(omega.code, i * j) for j in range(p)] for i in range(1, p)]
    kernel = linalg.nullspace(F, rows)
    basis = []
    for v in kernel:
        lead = next(c for c in v if c)
        inv = F.inv(lead)
        basis.append([F.elem(F.mul(c, inv)) for c in v])
    return linalg.rank(F, rows), basis


def all_forms_zero(params: TournamentParams, x) -> bool:
    return all(
        linear_form(params, params.omega**i, x).is_zero() for i in range(1, params.p)
    )


@dataclass
class ObstructionReport:
    p: int
    cases: list  # (holding rotation, rotation it is sent to)

    @property
    def holds(self) -> bool:
        return all(h != s for h, s in self.cases)


def p_cycle_obstruction(p: int) -> ObstructionReport:
    """A map with a p-cycle a_0 -> a_1 -> ... cannot preserve a p-tournament.

    For each choice h of the single rotation of (a_0, ..., a_{p-1}) on which
    R holds, apply the cycle entrywise and locate the image rotation; R is
    preserved only if the image is again h.
    """
    if not ff_core.is_prime(p):
        raise ValueError(f"{p} is not prime")
    rotations = [rotate(tuple(range(p)), r) for r in range(p)]
    cases = []
    for h in range(p):
        image = tuple((a + 1) % p for a in rotations[h])
        cases.append((h, rotations.index(image)))
    return ObstructionReport(p, cases)
