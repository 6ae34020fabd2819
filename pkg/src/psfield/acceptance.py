"""The acceptance matrix: one Check per criterion, shared by ``psfield all``
and the test suite.
"""

from __future__ import annotations

import time
from fractions import Fraction

from . import cyclotomic, ff_core, haar_sim, interpretation, kummer_as, puiseux, tournament
from .report import Check

TOURNAMENT_CASES = ((7, 3), (13, 3), (11, 5), (7, 2), (13, 2))
MU2N_CASES = ((13, 2), (5, 2))
INDEX_Q_MAX = 1 << 12
INDEX_PRIMES = (2, 3, 5, 7, 11, 13)
VANDERMONDE_PRIMES = (2, 3, 5, 7)
# (p, k) ranges of the unit-group census
CENSUS_ODD = tuple((p, k) for p in (3, 5, 7, 11, 13) for k in range(1, 7))
CENSUS_TWO = tuple((2, k) for k in range(3, 9))
HAAR_EXACT = tuple((p, k) for p in (3, 5, 7) for k in range(2, 7))
HAAR_MC = ((3, 4), (5, 3))
HAAR_TRIALS = 10**6
HAAR_SIGMAS = 4.0
AS_FIELDS = (8, 16, 32, 9, 27, 81)
LEMMA_TRIALS = 10**4
LEMMA_MAX_GROUP = 256
# coded extensions compared against the direct field; q^n <= 2^10 is exhaustive
ISO_CASES = (
    (2, 1), (2, 2), (2, 3), (2, 5), (2, 8), (2, 10),
    (3, 2), (3, 4), (3, 6), (4, 3), (4, 5), (5, 4), (7, 3), (8, 3), (9, 3), (16, 2), (31, 2),
    (2, 12), (3, 8), (5, 5), (7, 4), (16, 3), (4, 8), (9, 4),
)
GALOIS_Q = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)
GALOIS_N_MAX = 8
ISO_SAMPLES = 10**5


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def tournament_exhaustive(threads: int = 1) -> Check:
    counts, witnesses, elapsed = {}, [], 0.0
    for q, p in TOURNAMENT_CASES:
        spec = ff_core.make_field(*ff_core.prime_power(q))
        rep, dt = _timed(lambda: tournament.verify_p_tournament(tournament.make_params(spec, p), threads))
        elapsed += dt
        counts[f"F{q}_p{p}_tuples"] = rep.tuples_checked
        counts[f"F{q}_p{p}_violations"] = len(rep.violations)
        witnesses += [[q, p, list(v)] for v in rep.violations]
    ok = not witnesses and elapsed < 5.0
    counts["under_5s"] = elapsed < 5.0
    return Check("1 p-tournament exhaustive", ok, counts, witnesses)


def mu2n_tournaments() -> Check:
    counts, witnesses, ok = {}, [], True
    for q, n in MU2N_CASES:
        res = tournament.mu2n_tournament(ff_core.make_field(q), n)
        counts[f"F{q}_n{n}_pairs"] = res.report.tuples_checked
        counts[f"F{q}_n{n}_violations"] = len(res.report.violations)
        counts[f"F{q}_n{n}_cosets_ok"] = res.decomposition_ok
        ok &= res.ok
        witnesses += [[q, n, list(v)] for v in res.report.violations]
    return Check("2 mu_{2^n} tournament", ok, counts, witnesses)


def index_counting() -> Check:
    witnesses, cases = [], 0
    for q in range(2, INDEX_Q_MAX + 1):
        try:
            p, n = ff_core.prime_power(q)
        except ValueError:
            continue
        spec = ff_core.make_field(p, n)
        for r in INDEX_PRIMES:
            cases += 1
            want = r if (q - 1) % r == 0 else 1
            got = tournament.power_index(spec, r)
            if got != want:
                witnesses.append([q, r, got, want])
    return Check("3 power index", not witnesses, {"cases": cases, "mismatches": len(witnesses)}, witnesses)


def vandermonde() -> Check:
    counts, witnesses = {}, []
    for p in VANDERMONDE_PRIMES:
        q = next(q for q in range(p + 1, 10**4) if ff_core.is_prime(q) and (q - 1) % p == 0)
        spec = ff_core.make_field(q)
        omega = tournament.canonical_omega(spec, p)
        rank, basis = tournament.vandermonde_kernel_dim(p, omega)
        ones = [ff_core.one(spec)] * p
        good = rank == p - 1 and len(basis) == 1 and basis[0] == ones
        counts[f"p{p}_F{q}_rank"] = rank
        if not good:
            witnesses.append([p, q, rank, [str(v) for v in basis]])
    return Check("4 Vandermonde kernel", not witnesses, counts, witnesses)


def unit_structure() -> Check:
    witnesses = []
    for p, k in CENSUS_ODD + CENSUS_TWO:
        if not cyclotomic.verify_unit_group(p, k):
            witnesses.append([p, k])
    return Check(
        "5 unit group structure",
        not witnesses,
        {"cases": len(CENSUS_ODD) + len(CENSUS_TWO), "mismatches": len(witnesses)},
        witnesses,
    )


def haar_measures(seed: int = 7, threads: int = 1) -> Check:
    t0 = time.perf_counter()
    witnesses, counts = [], {}
    for p, k in HAAR_EXACT:
        m = haar_sim.exact_event_measure(p, k, "power-fixes")
        if m != Fraction(1, p ** (k - 1)):
            witnesses.append(["exact", p, k, str(m)])
    counts["exact_cases"] = len(HAAR_EXACT)
    for p, k in HAAR_MC:
        est = haar_sim.estimate_event_measure(p, k, "power-fixes", HAAR_TRIALS, seed, threads)
        counts[f"p{p}_k{k}_hits"] = est.hits
        counts[f"p{p}_k{k}_z"] = round(est.z_score(), 6)
        if not est.within(HAAR_SIGMAS):
            witnesses.append(["mc", p, k, est.hits])
    fast = time.perf_counter() - t0 < 10.0
    counts["under_10s"] = fast
    return Check("6 Haar measures", not witnesses and fast, counts, witnesses)


def artin_schreier() -> Check:
    witnesses, counts = [], {}
    for q in AS_FIELDS:
        spec = ff_core.make_field(*ff_core.prime_power(q))
        solvable = 0
        for b in ff_core.elements(spec):
            roots = kummer_as.artin_schreier_solve(spec, b)
            trace_zero = ff_core.trace_to_prime(b) == 0
            if bool(roots) != trace_zero:
                witnesses.append([q, str(b), "trace"])
            if roots and (len(roots) != spec.p or not kummer_as.is_prime_field_coset(roots)):
                witnesses.append([q, str(b), "coset"])
            solvable += bool(roots)
        counts[f"F{q}_solvable"] = solvable
    return Check("7 Artin-Schreier", not witnesses, counts, witnesses)


def lemma_fuzz(seed: int = 1, threads: int = 1, trials: int = LEMMA_TRIALS) -> Check:
    rep, dt = _timed(lambda: kummer_as.operator_lemma_fuzz(seed, trials, LEMMA_MAX_GROUP, threads))
    witnesses = [list(c) for c in rep.counterexamples]
    found = sum(len(v) for v in rep.witnesses.values())
    ok = rep.ok and rep.strict_satisfied == trials and found >= 1 and dt < 60.0
    counts = {
        "satisfied_instances": rep.strict_satisfied,
        "instances_drawn": rep.instances_drawn,
        "relaxed_pairs": rep.relaxed_pairs,
        "counterexamples": len(rep.counterexamples),
        "intermediate_failures": rep.intermediate_failures,
        "necessity_witnesses": {h: len(v) for h, v in sorted(rep.witnesses.items())},
        "under_60s": dt < 60.0,
    }
    return Check("8 operator lemma fuzz", ok, counts, witnesses)


def interpretation_checks(seed: int = 7) -> Check:
    witnesses, counts = [], {"exhaustive": 0, "sampled": 0}
    for q, n in ISO_CASES:
        ext = interpretation.code_extension(ff_core.make_field(*ff_core.prime_power(q)), n)
        res = interpretation.verify_iso_with_direct(ext, samples=ISO_SAMPLES, seed=seed)
        counts["exhaustive" if res.exhaustive else "sampled"] += 1
        if not res.ok:
            witnesses.append(["iso", q, n, str(res.witness)])
    galois = 0
    for q in GALOIS_Q:
        base = ff_core.make_field(*ff_core.prime_power(q))
        for n in range(1, GALOIS_N_MAX + 1):
            ext = interpretation.code_extension(base, n)
            galois += 1
            if not (interpretation.galois_group_is_cyclic(ext) and interpretation.galois_group_is_abelian(ext)):
                witnesses.append(["galois", q, n])
    counts["galois_cases"] = galois
    return Check("9 interpretation", not witnesses, counts, witnesses)


def puiseux_commutation(seed: int = 7) -> Check:
    F7 = ff_core.make_field(7)
    system = cyclotomic.build_coherent_roots(3, F7, 2)
    rep = puiseux.verify_commutation(system, depth=2, samples=200, seed=seed)
    orbit = puiseux.kummer_orbit_order(system)
    ok = rep.ok and orbit == 3 and system.top.q == 343
    counts = {
        "generators": rep.generators_checked,
        "series": rep.series_checked,
        "orbit_size": orbit,
        "omega_2_field": ff_core.format_spec(system.tower[2]),
    }
    return Check("10 Puiseux commutation", ok, counts, rep.failures)


def thread_independence(seed: int = 7, threads: int = 2) -> Check:
    """Partitioned computations give identical results for 1 and ``threads`` workers."""
    witnesses = []
    a = kummer_as.operator_lemma_fuzz(seed, 300, LEMMA_MAX_GROUP, 1, block=100).to_dict()
    b = kummer_as.operator_lemma_fuzz(seed, 300, LEMMA_MAX_GROUP, threads, block=100).to_dict()
    if a != b:
        witnesses.append("lemma fuzz")
    x = haar_sim.estimate_event_measure(3, 4, "power-fixes", 300_000, seed, 1)
    y = haar_sim.estimate_event_measure(3, 4, "power-fixes", 300_000, seed, threads)
    if x.hits != y.hits:
        witnesses.append("haar estimate")
    spec = ff_core.make_field(13)
    params = tournament.make_params(spec, 3)
    r1 = tournament.verify_p_tournament(params, 1).to_dict()
    r2 = tournament.verify_p_tournament(params, threads).to_dict()
    if r1 != r2:
        witnesses.append("tournament scan")
    return Check("11 thread independence", not witnesses, {"threads_compared": [1, threads]}, witnesses)


def run_all(seed: int = 7, threads: int = 1) -> list[Check]:
    return [
        tournament_exhaustive(threads),
        mu2n_tournaments(),
        index_counting(),
        vandermonde(),
        unit_structure(),
        haar_measures(seed, threads),
        artin_schreier(),
        lemma_fuzz(seed, threads),
        interpretation_checks(seed),
        puiseux_commutation(seed),
        thread_independence(seed, max(2, threads)),
    ]
