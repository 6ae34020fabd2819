"""Kummer chains, the quotient map c -> tau(c)/c, Artin-Schreier roots and
the commuting-operator lemma.

The lemma: let P, S, T be commuting endomorphisms of an abelian group A,
A_0 the union of the kernels of P^n, and assume

  (1) P is surjective,
  (2) T vanishes on A_0,
  (3) A_0 & ker S is contained in ker P^N.

Then S(a) = 0 and T(P(a)) = 0 imply T(a) = 0.

On a finite group (1) makes P bijective and A_0 = 0, so the checker also
offers a relaxed form of (1): P(a) has a preimage chain of length N + 1.
That is exactly what the divisibility step of the proof consumes.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import ff_core
from .cyclotomic import max_p_subextension_degree, p_adic_valuation
from .ff_core import FFElem, FieldError, FieldSpec
from .parallel import run_partitioned

# -- Kummer chains ---------------------------------------------------------------


@dataclass(frozen=True)
class KummerChain:
    """All solutions of x^(p^n) = b for n <= depth, inside one top field.

    ``degrees[n]`` is the degree over F_p of the smallest extension of the
    base containing every solution at level n; ``levels[n]`` lists those
    solutions as elements of ``top`` (level 0 is just b).
    """

    base: FieldSpec
    b: FFElem
    p: int
    top: FieldSpec
    degrees: tuple[int, ...]
    levels: tuple[tuple[FFElem, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def b_top(self) -> FFElem:
        return self.levels[0][0]

    def elements(self):
        for level in self.levels[1:]:
            yield from level


def _splitting_degree(base: FieldSpec, b: FFElem, m: int, start: int) -> int:
    """Least multiple e of ``start`` with x^m - b split over F_{q^e}."""
    q = base.q
    e = start
    while True:
        Q = q**e
        if (Q - 1) % m == 0 and (b ** ((Q - 1) // m)).code == 1:
            return e
        e += start
        if base.p ** (base.n * e) > ff_core.MAX_FIELD_SIZE:
            raise FieldError("Kummer level exceeds the field size cap")


def build_kummer_chain(base: FieldSpec, b: FFElem, p: int, depth: int) -> KummerChain:
    if b.spec != base:
        raise FieldError("b must lie in the base field")
    if b.is_zero():
        raise ValueError("b must be nonzero")
    if p == base.p:
        raise ValueError("Kummer chains need p != characteristic")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    es = [1]
    for n in range(1, depth + 1):
        es.append(_splitting_degree(base, b, p**n, es[-1]))
    top = ff_core.make_field(base.p, base.n * es[-1])
    F = ff_core.field_ops(top)
    b_top = ff_core.embed(b, top)
    M = top.q - 1
    g = ff_core.multiplicative_generator(top)
    L = ff_core.discrete_log(b_top, g)
    levels = [(b_top,)]
    for n in range(1, depth + 1):
        m = p**n
        d = math.gcd(m, M)
        if L % d:
            raise AssertionError("level field does not contain the roots")  # pragma: no cover
        k0 = (L // d) * pow(m // d, -1, M // d) % (M // d)
        sols = sorted(
            (F.elem(F.pow(g.code, k0 + t * (M // d))) for t in range(d)),
            key=lambda x: x.coeffs,
        )
        levels.append(tuple(sols))
    return KummerChain(
        base, b, p, top, tuple(base.n * e for e in es), tuple(levels)
    )


def chain_failures(chain: KummerChain) -> list[str]:
    """Violations of the chain invariants, as messages."""
    out = []
    p, q_top = chain.p, chain.top.q
    for n, level in enumerate(chain.levels):
        if n == 0:
            continue
        sub_q = chain.top.p ** chain.degrees[n]
        for x in level:
            if x ** (p**n) != chain.b_top:
                out.append(f"level {n}: {x!r}^(p^{n}) != b")
            if x**sub_q != x:
                out.append(f"level {n}: {x!r} outside its level field")
        if len(level) != p**n:
            out.append(f"level {n}: {len(level)} solutions, expected {p**n}")
        below = {x.coeffs: 0 for x in chain.levels[n - 1]}
        for x in level:
            y = (x**p).coeffs
            if y not in below:
                out.append(f"level {n}: {x!r}^p is not a level-{n - 1} solution")
            else:
                below[y] += 1
        if any(c != p for c in below.values()):
            out.append(f"p-th power map level {n} -> {n - 1} is not {p}-to-1")
    if q_top > ff_core.MAX_FIELD_SIZE:
        out.append("top field exceeds cap")  # pragma: no cover
    return out


def frobenius_power(x: FFElem, r: int) -> FFElem:
    return ff_core.frobenius(x, r)


@dataclass
class PhiImage:
    tau_power: int
    values: dict  # level -> list of (c, tau(c)/c)

    def image(self) -> set:
        return {v.coeffs for pairs in self.values.values() for _, v in pairs}


def phi_map(chain: KummerChain, tau_power: int) -> PhiImage:
    """c -> tau(c)/c on every chain element, tau = x -> x^(p_char^tau_power).

    tau must fix b; every value then lies in mu_{p^n} for the level n of c.
    """
    if frobenius_power(chain.b_top, tau_power) != chain.b_top:
        raise ValueError("tau does not fix b")
    values = {}
    for n, level in enumerate(chain.levels):
        if n == 0:
            continue
        pairs = []
        for c in level:
            v = frobenius_power(c, tau_power) / c
            if v ** (chain.p**n) != ff_core.one(chain.top):
                raise AssertionError("phi value outside mu_{p^n}")
            pairs.append((c, v))
        values[n] = pairs
    return PhiImage(tau_power, values)


def phi_power_compatible(chain: KummerChain, tau_power: int) -> bool:
    """phi(c^p) == phi(c)^p for every chain element of level >= 2."""
    phi = lambda c: frobenius_power(c, tau_power) / c  # noqa: E731
    return all(phi(c**chain.p) == phi(c) ** chain.p for c in chain.elements())


def phi_quotient_compatible(chain: KummerChain, tau_power: int) -> bool:
    """tau(c/c')/(c/c') == phi(c)/phi(c') for c, c' on the same level."""
    phi = lambda c: frobenius_power(c, tau_power) / c  # noqa: E731
    for level in chain.levels[1:]:
        for c in level:
            for d in level:
                u = c / d
                if frobenius_power(u, tau_power) / u != phi(c) / phi(d):
                    return False
    return True


@dataclass
class SigmaFixedness:
    checked: int = 0
    applicable: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def sigma_fixes_phi(chain: KummerChain, tau_power: int) -> SigmaFixedness:
    """sigma(phi(c)) == phi(c) wherever tau fixes zeta = sigma(c)/c.

    sigma is the q-power Frobenius of the base field, q = |base|.
    """
    out = SigmaFixedness()
    r_sigma = chain.base.n
    for c in chain.elements():
        out.checked += 1
        zeta = frobenius_power(c, r_sigma) / c
        if frobenius_power(zeta, tau_power) != zeta:
            continue
        out.applicable += 1
        v = frobenius_power(c, tau_power) / c
        if frobenius_power(v, r_sigma) != v:
            out.failures.append(c)
    return out


@dataclass
class DivisibilityVerdict:
    order: int
    p_group: bool
    divisible: bool
    trivial: bool
    witness: list

    @property
    def lemma_holds(self) -> bool:
        """A p-divisible finite p-group is trivial."""
        return not (self.divisible and self.p_group) or self.trivial


def divisible_p_subgroup_is_trivial(h: FFElem, p: int) -> DivisibilityVerdict:
    """Inspect H = <h>: is x -> x^p onto H, and is H then trivial?

    The witness is the chain h, h^p, h^(p^2), ... up to its first repeat.
    """
    F = h.field
    H, x = [], 1
    while True:
        H.append(x)
        x = F.mul(x, h.code)
        if x == 1:
            break
    image = {F.pow(y, p) for y in H}
    order = len(H)
    chain, y = [], h.code
    while y not in chain:
        chain.append(y)
        y = F.pow(y, p)
    return DivisibilityVerdict(
        order=order,
        p_group=order == p ** p_adic_valuation(order, p) if order > 1 else True,
        divisible=image == set(H),
        trivial=order == 1,
        witness=[F.elem(c) for c in chain],
    )


# -- Artin-Schreier -------------------------------------------------------------------


def artin_schreier_image(spec: FieldSpec) -> np.ndarray:
    """x^p - x for every code x."""
    F = ff_core.field_ops(spec)
    xs = F.all_codes()
    if spec.n > 1 and F.tables() is None:
        return np.array([F.sub(F.pow(int(x), spec.p), int(x)) for x in xs], dtype=np.int64)
    return F.np_sub(F.np_pow(xs, spec.p), xs)


def artin_schreier_solve(spec: FieldSpec, b: FFElem) -> list[FFElem]:
    """{x in F_q : x^p - x = b}, by scanning the field."""
    if b.spec != spec:
        raise FieldError("b must lie in the given field")
    F = ff_core.field_ops(spec)
    image = artin_schreier_image(spec)
    return sorted((F.elem(int(x)) for x in np.nonzero(image == b.code)[0]), key=lambda e: e.coeffs)


def is_prime_field_coset(roots: list[FFElem]) -> bool:
    """roots == {r + c : c in F_p} for any one root r."""
    if not roots:
        return True
    p = roots[0].spec.p
    r = roots[0]
    return {x.coeffs for x in roots} == {(r + c).coeffs for c in range(p)}


# -- operator lemma ---------------------------------------------------------------------


class NonCommutingError(ValueError):
    pass


@dataclass(frozen=True)
class OperatorInstance:
    """A finite abelian group sum Z/orders[i] with endomorphisms P, S, T.

    An endomorphism is an integer matrix M; it sends the exponent vector x
    to y_i = sum_j M[i][j] x_j mod orders[i].
    """

    orders: tuple[int, ...]
    P: tuple[tuple[int, ...], ...]
    S: tuple[tuple[int, ...], ...]
    T: tuple[tuple[int, ...], ...]
    N: int = 1

    @property
    def size(self) -> int:
        return math.prod(self.orders)


def is_well_defined(orders, M) -> bool:
    return all(
        (orders[j] * M[i][j]) % orders[i] == 0
        for i in range(len(orders))
        for j in range(len(orders))
    )


def group_vectors(orders) -> np.ndarray:
    """Exponent vectors of every element, row index = mixed-radix code."""
    size = math.prod(orders)
    idx = np.arange(size, dtype=np.int64)
    out = np.empty((size, len(orders)), dtype=np.int64)
    for i, o in enumerate(orders):
        idx, out[:, i] = np.divmod(idx, o)
    return out


def _codes(orders, Y) -> np.ndarray:
    code = np.zeros(Y.shape[0], dtype=np.int64)
    w = 1
    for i, o in enumerate(orders):
        code += (Y[:, i] % o) * w
        w *= o
    return code


def endomorphism_map(orders, M, X=None) -> np.ndarray:
    """The endomorphism as a lookup array code -> code."""
    if not orders:
        return np.zeros(1, dtype=np.int64)
    if X is None:
        X = group_vectors(orders)
    Y = X @ np.array(M, dtype=np.int64).T
    return _codes(orders, Y)


def compose_matrices(orders, A, B):
    """Matrix of A after B."""
    k = len(orders)
    return tuple(
        tuple(sum(A[i][l] * B[l][j] for l in range(k)) % orders[i] for j in range(k))
        for i in range(k)
    )


@dataclass
class InstanceAnalysis:
    """Everything about an instance that does not depend on a."""

    size: int
    P: np.ndarray
    S: np.ndarray
    T: np.ndarray
    commute: bool
    surjective: bool  # (1)
    a0: np.ndarray  # bool mask of A_0
    t_kills_a0: bool  # (2)
    kernel_bound: bool  # (3)
    nilpotency: int  # least m with ker P^m = A_0
    chain_depth: np.ndarray  # per element b: largest D <= cap with b in image P^D
    ker_pn: np.ndarray  # bool mask of ker P^N


def analyse(inst: OperatorInstance, depth_cap: int | None = None) -> InstanceAnalysis:
    orders = inst.orders
    for M in (inst.P, inst.S, inst.T):
        if orders and not is_well_defined(orders, M):
            raise ValueError("matrix does not respect the cyclic orders")
    X = group_vectors(orders) if orders else None
    P = endomorphism_map(orders, inst.P, X)
    S = endomorphism_map(orders, inst.S, X)
    T = endomorphism_map(orders, inst.T, X)
    size = len(P)
    commute = (
        np.array_equal(P[S], S[P]) and np.array_equal(P[T], T[P]) and np.array_equal(S[T], T[S])
    )
    # A_0 = union of ker P^m; stabilises once the kernel stops growing
    Pm = P.copy()
    a0 = Pm == 0
    m = 1
    while True:
        nxt = P[Pm]
        grown = nxt == 0
        if grown.sum() == a0.sum():
            break
        Pm, a0, m = nxt, grown, m + 1
    PN = np.arange(size, dtype=np.int64)
    for _ in range(inst.N):
        PN = P[PN]
    ker_pn = PN == 0
    ker_s = S == 0
    cap = depth_cap if depth_cap is not None else inst.N + 1
    depth = np.zeros(size, dtype=np.int64)
    image = np.ones(size, dtype=bool)
    Pd = np.arange(size, dtype=np.int64)
    for d in range(1, cap + 1):
        Pd = P[Pd]
        image = np.zeros(size, dtype=bool)
        image[Pd] = True
        depth[image] = d
    return InstanceAnalysis(
        size=size,
        P=P,
        S=S,
        T=T,
        commute=commute,
        surjective=len(np.unique(P)) == size,
        a0=a0,
        t_kills_a0=not T[a0].any(),
        kernel_bound=bool(np.all(ker_pn[a0 & ker_s])),
        nilpotency=m,
        chain_depth=depth,
        ker_pn=ker_pn,
    )


@dataclass
class LemmaVerdict:
    mode: str
    surjective: bool
    t_kills_a0: bool
    kernel_bound: bool
    chain_ok: bool  # relaxed (1): P(a) has a preimage chain of length N + 1
    premise: bool  # S(a) = 0 and T(P(a)) = 0
    conclusion: bool  # T(a) = 0
    chain: list  # C_b = {x : P^n(x) = b, 1 <= n <= depth}
    t_chain_in_a0: bool
    t_chain_in_ker_pn: bool

    @property
    def hypotheses(self) -> bool:
        first = self.surjective if self.mode == "strict" else self.chain_ok
        return first and self.t_kills_a0 and self.kernel_bound

    @property
    def consistent(self) -> bool:
        """Hypotheses and premise together force the conclusion."""
        return not (self.hypotheses and self.premise) or self.conclusion


def operator_lemma_check(
    inst: OperatorInstance, a: int, depth_bound: int | None = None, mode: str = "strict"
) -> LemmaVerdict:
    if mode not in ("strict", "relaxed"):
        raise ValueError(f"unknown mode {mode!r}")
    depth_bound = inst.N + 1 if depth_bound is None else depth_bound
    an = analyse(inst, max(depth_bound, inst.N + 1))
    if not an.commute:
        raise NonCommutingError("P, S, T do not pairwise commute")
    if not 0 <= a < an.size:
        raise ValueError("element out of range")
    b = an.P[a]
    chain = []
    Pd = np.arange(an.size, dtype=np.int64)
    for _ in range(depth_bound):
        Pd = an.P[Pd]
        chain.extend(int(x) for x in np.nonzero(Pd == b)[0])
    chain = sorted(set(chain))
    Tc = an.T[chain] if chain else np.zeros(0, dtype=np.int64)
    return LemmaVerdict(
        mode=mode,
        surjective=an.surjective,
        t_kills_a0=an.t_kills_a0,
        kernel_bound=an.kernel_bound,
        chain_ok=bool(an.chain_depth[b] >= inst.N + 1),
        premise=bool(an.S[a] == 0 and an.T[b] == 0),
        conclusion=bool(an.T[a] == 0),
        chain=chain,
        t_chain_in_a0=bool(an.a0[Tc].all()),
        t_chain_in_ker_pn=bool(an.ker_pn[Tc].all()),
    )


# -- fuzzing ----------------------------------------------------------------------------


def _random_orders(rng, max_size: int):
    if rng.random() < 0.01:
        return ()
    while True:
        k = int(rng.integers(1, 4))
        orders = tuple(int(o) for o in rng.integers(2, 17, size=k))
        if math.prod(orders) <= max_size:
            return orders


def _random_endo(rng, orders):
    k = len(orders)
    return tuple(
        tuple(
            int(rng.integers(0, orders[i])) * (orders[i] // math.gcd(orders[i], orders[j])) % orders[i]
            for j in range(k)
        )
        for i in range(k)
    )


def _identity(orders):
    k = len(orders)
    return tuple(tuple(int(i == j) % orders[i] for j in range(k)) for i in range(k))


def _poly_in(rng, orders, P, min_degree=0, max_degree=3):
    """A random integer polynomial in P, lowest term of degree >= min_degree."""
    k = len(orders)
    acc = tuple((0,) * k for _ in range(k))
    power = _identity(orders)
    for d in range(max_degree + 1):
        if d >= min_degree:
            c = int(rng.integers(0, 5))
            acc = tuple(
                tuple((acc[i][j] + c * power[i][j]) % orders[i] for j in range(k)) for i in range(k)
            )
        power = compose_matrices(orders, P, power)
    return acc


def _commutes(orders, A, B) -> bool:
    return compose_matrices(orders, A, B) == compose_matrices(orders, B, A)


def random_instance(rng, max_size: int) -> OperatorInstance:
    orders = _random_orders(rng, max_size)
    if not orders:
        return OperatorInstance((), (), (), (), 0)
    size = math.prod(orders)
    P = _random_endo(rng, orders)
    if rng.random() < 0.5:
        # rejection-sample an automorphism
        for _ in range(20):
            if len(np.unique(endomorphism_map(orders, P))) == size:
                break
            P = _random_endo(rng, orders)
    nil = max(1, size.bit_length())
    ops = []
    for _ in range(2):
        kind = rng.random()
        M = None
        if kind < 0.3:
            for _ in range(10):
                cand = _random_endo(rng, orders)
                if _commutes(orders, cand, P) and all(_commutes(orders, cand, o) for o in ops):
                    M = cand
                    break
        if M is None:
            # multiples of P^nil vanish on A_0
            low = nil if kind < 0.75 else 0
            M = _poly_in(rng, orders, P, min_degree=low, max_degree=low + 2)
        ops.append(M)
    N = int(rng.integers(0, 4))
    return OperatorInstance(orders, P, ops[0], ops[1], N)


@dataclass
class FuzzRecord:
    index: int
    strict: bool  # all strict hypotheses hold
    size: int
    flags: tuple  # (surjective, t_kills_a0, kernel_bound)
    relaxed_pairs: int  # a with (1'), (2), (3) and the premise
    counterexamples: list  # (mode, a)
    intermediate_failures: int
    witnesses: list  # (broken hypothesis, a)
    instance: OperatorInstance


def _fuzz_one(seed: int, index: int, max_size: int) -> FuzzRecord:
    rng = np.random.default_rng([seed, index])
    inst = random_instance(rng, max_size)
    an = analyse(inst)
    if not an.commute:
        raise AssertionError("generator produced non-commuting operators")  # pragma: no cover
    strict = an.surjective and an.t_kills_a0 and an.kernel_bound
    b = an.P
    premise = (an.S == 0) & (an.T[b] == 0)
    conclusion = an.T == 0
    chain_ok = an.chain_depth[b] >= inst.N + 1
    counter = []
    if strict:
        counter += [("strict", int(a)) for a in np.nonzero(premise & ~conclusion)[0]]
    relaxed = chain_ok & an.t_kills_a0 & an.kernel_bound & premise
    counter += [("relaxed", int(a)) for a in np.nonzero(relaxed & ~conclusion)[0]]
    # intermediate facts of the proof: T(C_b) inside A_0 and inside ker P^N
    inter = 0
    for a in np.nonzero(relaxed)[0][:8]:
        v = operator_lemma_check(inst, int(a), inst.N + 1, "relaxed")
        inter += not (v.t_chain_in_a0 and v.t_chain_in_ker_pn)
    witnesses = []
    failing = np.nonzero(premise & ~conclusion)[0]
    if len(failing):
        flags = {"(1')": None, "(2)": an.t_kills_a0, "(3)": an.kernel_bound}
        for a in failing[:1]:
            flags["(1')"] = bool(chain_ok[a])
            broken = [h for h, ok in flags.items() if not ok]
            if len(broken) == 1:
                witnesses.append((broken[0], int(a)))
    return FuzzRecord(
        index=index,
        strict=strict,
        size=an.size,
        flags=(an.surjective, an.t_kills_a0, an.kernel_bound),
        relaxed_pairs=int(relaxed.sum()),
        counterexamples=counter,
        intermediate_failures=inter,
        witnesses=witnesses,
        instance=inst,
    )


def _fuzz_block(task):
    seed, start, stop, max_size = task
    return [_fuzz_one(seed, i, max_size) for i in range(start, stop)]


@dataclass
class FuzzReport:
    seed: int
    target: int
    max_group_size: int
    instances_drawn: int = 0
    strict_satisfied: int = 0
    relaxed_pairs: int = 0
    hypothesis_tally: dict = field(default_factory=lambda: {"(1)": 0, "(2)": 0, "(3)": 0})
    counterexamples: list = field(default_factory=list)
    intermediate_failures: int = 0
    witnesses: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.counterexamples and self.intermediate_failures == 0

    def to_dict(self, max_witnesses: int = 10) -> dict:
        return {
            "seed": self.seed,
            "target": self.target,
            "max_group_size": self.max_group_size,
            "instances_drawn": self.instances_drawn,
            "strict_satisfied": self.strict_satisfied,
            "relaxed_pairs": self.relaxed_pairs,
            "hypothesis_tally": dict(self.hypothesis_tally),
            "counterexamples": [list(c) for c in self.counterexamples[:max_witnesses]],
            "counterexample_count": len(self.counterexamples),
            "intermediate_failures": self.intermediate_failures,
            "witnesses": {
                h: [_instance_dict(inst) | {"a": a} for inst, a in ws[:max_witnesses]]
                for h, ws in sorted(self.witnesses.items())
            },
        }


def _instance_dict(inst: OperatorInstance) -> dict:
    return {
        "orders": list(inst.orders),
        "P": [list(r) for r in inst.P],
        "S": [list(r) for r in inst.S],
        "T": [list(r) for r in inst.T],
        "N": inst.N,
    }


def operator_lemma_fuzz(
    seed: int,
    trials: int,
    max_group_size: int = 256,
    threads: int = 1,
    block: int = 500,
    max_draws: int | None = None,
) -> FuzzReport:
    """Draw random instances until ``trials`` of them satisfy all of (1)-(3).

    Instance i comes from the RNG stream (seed, i), and blocks are merged in
    index order, so the report does not depend on ``threads``.  Every drawn
    instance is also checked in relaxed mode and searched for witnesses
    that a hypothesis cannot be dropped.
    """
    t0 = time.perf_counter()
    report = FuzzReport(seed, trials, max_group_size)
    max_draws = max_draws if max_draws is not None else 20 * max(trials, 1)
    start = 0
    width = max(1, threads)
    while report.strict_satisfied < trials and start < max_draws:
        tasks = []
        for _ in range(width):
            stop = min(start + block, max_draws)
            if stop > start:
                tasks.append((seed, start, stop, max_group_size))
            start = stop
        for records in run_partitioned(_fuzz_block, tasks, threads):
            for rec in records:
                if report.strict_satisfied >= trials:
                    break
                _absorb(report, rec)
    report.wall_time = time.perf_counter() - t0
    return report


def _absorb(report: FuzzReport, rec: FuzzRecord):
    report.instances_drawn += 1
    report.strict_satisfied += rec.strict
    report.relaxed_pairs += rec.relaxed_pairs
    for name, ok in zip(("(1)", "(2)", "(3)"), rec.flags):
        report.hypothesis_tally[name] += bool(ok)
    report.counterexamples += [(rec.index, mode, a) for mode, a in rec.counterexamples]
    report.intermediate_failures += rec.intermediate_failures
    for hyp, a in rec.witnesses:
        report.witnesses.setdefault(hyp, []).append((rec.instance, a))


# -- the Artin-Schreier instance of the lemma ----------------------------------------


@dataclass
class BridgeVerdict:
    q: int
    top: int
    maps_commute: bool
    ker_p_is_prime_field: bool
    a0_size: int
    minimal_kernel_exponent: int  # least N' with A_0 & ker S inside ker P^N'
    p_subextension_exponent: int  # N with F_{p^(p^N)} the largest p-power subfield of F_q
    tau_checks: list  # per Frobenius power: dict of results
    violations: list = field(default_factory=list)
    necessity: list = field(default_factory=list)

    @property
    def kernel_bound(self) -> int:
        # P^(p^N) = sigma_p^(p^N) - 1 in characteristic p, and it kills the unipotent part of F_q
        return ff_core.prime_power(self.q)[0] ** self.p_subextension_exponent

    @property
    def ok(self) -> bool:
        return (
            self.maps_commute
            and self.ker_p_is_prime_field
            and not self.violations
            and self.minimal_kernel_exponent <= self.kernel_bound
        )


def artin_schreier_operator_bridge(q: int, tower_factor: int | None = None) -> BridgeVerdict:
    """The lemma's data on the additive group of a finite field above F_q.

    A = F_{q^e} (e = ``tower_factor``, default p), P(x) = x^p - x,
    S = sigma - id with sigma the q-power map, T = tau - id for every power
    tau of Frobenius.  For each b in F_q and each Artin-Schreier root a of b
    in A, checks T(b) = 0 and S(a) = 0 imply T(a) = 0 whenever T kills A_0.
    """
    p, m = ff_core.prime_power(q)
    e = p if tower_factor is None else tower_factor
    top = ff_core.make_field(p, m * e)
    F = ff_core.field_ops(top)
    if F.tables() is None and top.n > 1:
        raise FieldError(f"F_{top.q} is too large for the exhaustive bridge")
    xs = F.all_codes()
    P = F.np_sub(F.np_pow(xs, p), xs)
    sigma = F.np_pow(xs, q)
    S = F.np_sub(sigma, xs)
    size = top.q
    ker_p = set(np.nonzero(P == 0)[0].tolist())
    prime_field = set(range(p))  # prime-field codes are the integers 0..p-1
    # A_0 = union of ker P^n
    Pm = P.copy()
    a0 = Pm == 0
    while True:
        nxt = P[Pm]
        if (nxt == 0).sum() == a0.sum():
            break
        Pm, a0 = nxt, nxt == 0
    ker_s = S == 0
    target = a0 & ker_s
    exp_needed, Pk = 0, xs.copy()
    while not (Pk[target] == 0).all():
        Pk = P[Pk]
        exp_needed += 1
    N_field = p_adic_valuation(max_p_subextension_degree(p, m), p)
    commute = np.array_equal(P[S], F.np_sub(P[sigma], P)) and np.array_equal(P[sigma], sigma[P])
    verdict = BridgeVerdict(
        q=q,
        top=size,
        maps_commute=bool(commute),
        ker_p_is_prime_field=ker_p == prime_field,
        a0_size=int(a0.sum()),
        minimal_kernel_exponent=exp_needed,
        p_subextension_exponent=N_field,
        tau_checks=[],
    )
    base_codes = np.nonzero(ker_s)[0]  # F_q inside A
    for j in range(top.n):
        tau = F.np_pow(xs, p**j)
        T = F.np_sub(tau, xs)
        commute_t = np.array_equal(P[tau], tau[P]) and np.array_equal(sigma[tau], tau[sigma])
        kills_a0 = not T[a0].any()
        pairs = bad = 0
        for bcode in base_codes:
            roots = np.nonzero(P == bcode)[0]
            for a in roots:
                if T[bcode] == 0 and S[a] == 0:
                    pairs += 1
                    if T[a] != 0:
                        bad += 1
                        (verdict.violations if kills_a0 else verdict.necessity).append(
                            (j, int(bcode), int(a))
                        )
        verdict.maps_commute &= bool(commute_t)
        verdict.tau_checks.append(
            {"frobenius_power": j, "t_kills_a0": bool(kills_a0), "premise_pairs": pairs, "failures": bad}
        )
    return verdict
