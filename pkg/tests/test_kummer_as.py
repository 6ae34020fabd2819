import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from psfield import ff_core as fc
from psfield import kummer_as as ka

F7 = fc.make_field(7)


def E(spec, v):
    return fc.element(spec, v)


# -- Kummer chains -------------------------------------------------------------------


def test_chain_b1_is_mu3():
    ch = ka.build_kummer_chain(F7, E(F7, 1), 3, 1)
    assert ch.top == F7
    assert sorted(x.coeffs[0] for x in ch.levels[1]) == [1, 2, 4]


def test_chain_b3_needs_cubic_extension():
    ch = ka.build_kummer_chain(F7, E(F7, 3), 3, 1)
    assert ch.top.q == 343 and ch.degrees == (1, 3)
    assert len(ch.levels[1]) == 3
    assert all(x**3 == fc.embed(E(F7, 3), ch.top) for x in ch.levels[1])
    assert ka.chain_failures(ch) == []


def test_chain_b6_stays_in_f7():
    ch = ka.build_kummer_chain(F7, E(F7, 6), 3, 1)
    assert ch.top == F7
    assert sorted(x.coeffs[0] for x in ch.levels[1]) == [3, 5, 6]


@pytest.mark.parametrize("q,b,p,depth", [(7, 6, 3, 2), (7, 1, 3, 2), (13, 2, 2, 2), (5, 2, 2, 3), (4, 2, 3, 2), (11, 3, 5, 1)])
def test_chain_invariants(q, b, p, depth):
    base = fc.make_field(*fc.prime_power(q))
    bb = fc.field_ops(base).elem(b)
    ch = ka.build_kummer_chain(base, bb, p, depth)
    assert ka.chain_failures(ch) == []
    for n in range(1, depth + 1):
        # brute-force count of solutions in the level field
        level = fc.make_field(base.p, ch.degrees[n])
        if level.q > 2000:
            assert len(ch.levels[n]) == p**n
            continue
        sols = [x for x in fc.elements(level) if not x.is_zero() and x ** (p**n) == fc.embed(bb, level)]
        assert len(sols) == p**n


def test_chain_errors():
    with pytest.raises(ValueError):
        ka.build_kummer_chain(F7, E(F7, 0), 3, 1)
    with pytest.raises(ValueError):
        ka.build_kummer_chain(F7, E(F7, 3), 7, 1)
    with pytest.raises(fc.FieldError):
        ka.build_kummer_chain(F7, E(F7, 3), 3, 2)  # would need F_{7^9}


def test_phi_identity_is_trivial():
    ch = ka.build_kummer_chain(F7, E(F7, 6), 3, 2)
    assert ka.phi_map(ch, 0).image() == {fc.one(ch.top).coeffs}


def test_phi_values_are_cube_roots_of_unity():
    ch = ka.build_kummer_chain(F7, E(F7, 3), 3, 1)
    image = ka.phi_map(ch, 1).image()
    mu3 = {fc.embed(x, ch.top).coeffs for x in fc.roots_of_unity(F7, 3)}
    assert image <= mu3
    # c^7 / c = c^6 = b^2 for every cube root c of b
    assert image == {fc.embed(E(F7, 2), ch.top).coeffs}


@pytest.mark.parametrize("q,b,p,depth,r", [(7, 3, 3, 1, 1), (7, 6, 3, 2, 1), (7, 6, 3, 2, 2), (13, 2, 2, 2, 1), (4, 2, 3, 2, 2)])
def test_phi_properties(q, b, p, depth, r):
    base = fc.make_field(*fc.prime_power(q))
    ch = ka.build_kummer_chain(base, fc.field_ops(base).elem(b), p, depth)
    r *= base.n  # a power of the q-Frobenius fixes b
    ka.phi_map(ch, r)
    assert ka.phi_power_compatible(ch, r)
    assert ka.phi_quotient_compatible(ch, r)
    sig = ka.sigma_fixes_phi(ch, r)
    assert sig.ok and sig.applicable > 0


def test_phi_rejects_tau_moving_b():
    ch = ka.build_kummer_chain(fc.make_field(2, 2), E(fc.make_field(2, 2), [0, 1]), 3, 1)
    with pytest.raises(ValueError):
        ka.phi_map(ch, 1)


def test_divisibility_examples():
    F343 = fc.make_field(7, 3)
    g = fc.multiplicative_generator(F343)
    v = ka.divisible_p_subgroup_is_trivial(g ** (342 // 9), 3)
    assert v.order == 9 and not v.divisible and v.lemma_holds
    v = ka.divisible_p_subgroup_is_trivial(fc.one(F343), 3)
    assert v.divisible and v.trivial and v.lemma_holds
    v = ka.divisible_p_subgroup_is_trivial(E(F7, 2), 3)
    assert v.order == 3 and not v.divisible
    # order prime to p: divisible but not a p-group
    v = ka.divisible_p_subgroup_is_trivial(E(F7, 6), 3)
    assert v.divisible and not v.p_group and v.lemma_holds


# -- Artin-Schreier ------------------------------------------------------------------


def test_as_examples():
    F9 = fc.make_field(3, 2)
    assert [x.coeffs for x in ka.artin_schreier_solve(F9, fc.zero(F9))] == [(0, 0), (1, 0), (2, 0)]
    assert ka.artin_schreier_solve(F9, fc.one(F9)) == []
    F27 = fc.make_field(3, 3)
    beta = E(F27, [1, 2, 0])
    b = beta - beta**3
    roots = ka.artin_schreier_solve(F27, b)
    assert len(roots) == 3 and (-beta).coeffs in {x.coeffs for x in roots}
    assert ka.is_prime_field_coset(roots)


@pytest.mark.parametrize("q", [8, 16, 32, 9, 27, 81, 25, 49])
def test_as_trace_criterion_exhaustive(q):
    spec = fc.make_field(*fc.prime_power(q))
    for b in fc.elements(spec):
        naive = [x for x in fc.elements(spec) if x**spec.p - x == b]
        roots = ka.artin_schreier_solve(spec, b)
        assert [x.coeffs for x in roots] == sorted(x.coeffs for x in naive)
        assert bool(roots) == (fc.trace_to_prime(b) == 0)
        assert ka.is_prime_field_coset(roots)


def test_bridge_q9():
    v = ka.artin_schreier_operator_bridge(9)
    assert v.ok and v.top == 3**6
    assert v.ker_p_is_prime_field and v.maps_commute
    assert v.p_subextension_exponent == 0 and v.minimal_kernel_exponent == 1
    identity = v.tau_checks[0]
    assert identity["frobenius_power"] == 0 and identity["failures"] == 0
    assert all(t["failures"] == 0 for t in v.tau_checks if t["t_kills_a0"])


@pytest.mark.parametrize("q,e", [(4, 2), (8, 2), (3, 3), (16, 1), (5, 1)])
def test_bridge_other_fields(q, e):
    v = ka.artin_schreier_operator_bridge(q, e)
    assert v.ok
    # the unipotent part of F_q under Frobenius has nilpotency exactly p^N
    assert v.minimal_kernel_exponent == v.kernel_bound


# -- the operator lemma ----------------------------------------------------------------


def naive_apply(orders, M, x):
    return tuple(sum(M[i][j] * x[j] for j in range(len(orders))) % orders[i] for i in range(len(orders)))


def naive_elements(orders):
    # mixed radix with the first coordinate least significant, matching group_vectors
    return [tuple(reversed(t)) for t in itertools.product(*[range(o) for o in reversed(orders)])]


def naive_verdict(inst, a_vec):
    """Lemma flags straight from the definitions, for one element a."""
    A = naive_elements(inst.orders)
    zero = tuple(0 for _ in inst.orders)
    P = lambda x: naive_apply(inst.orders, inst.P, x)  # noqa: E731
    S = lambda x: naive_apply(inst.orders, inst.S, x)  # noqa: E731
    T = lambda x: naive_apply(inst.orders, inst.T, x)  # noqa: E731

    def Pn(x, n):
        for _ in range(n):
            x = P(x)
        return x

    surj = {P(x) for x in A} == set(A)
    a0 = {x for x in A if Pn(x, len(A)) == zero}
    b = P(a_vec)
    return {
        "surjective": surj,
        "t_kills_a0": all(T(x) == zero for x in a0),
        "kernel_bound": all(Pn(x, inst.N) == zero for x in a0 if S(x) == zero),
        "chain_ok": any(Pn(x, inst.N + 1) == b for x in A),
        "premise": S(a_vec) == zero and T(b) == zero,
        "conclusion": T(a_vec) == zero,
    }


def code_of(orders, vec):
    c, w = 0, 1
    for o, v in zip(orders, vec):
        c += v * w
        w *= o
    return c


def test_identity_p_instance():
    orders = (4, 2)
    I = ((1, 0), (0, 1))
    S = ((3, 0), (0, 1))
    T = ((2, 0), (0, 0))
    inst = ka.OperatorInstance(orders, I, S, T, 1)
    for a in range(8):
        v = ka.operator_lemma_check(inst, a)
        assert v.surjective and v.t_kills_a0 and v.kernel_bound
        assert v.consistent


def test_bijective_p_instance_exhaustive():
    orders = (5, 3)
    P = ((2, 0), (0, 2))
    inst = ka.OperatorInstance(orders, P, ((1, 0), (0, 0)), ((0, 0), (0, 1)), 0)
    an = ka.analyse(inst)
    assert an.surjective and an.a0.sum() == 1
    assert all(ka.operator_lemma_check(inst, a).consistent for a in range(15))


def test_necessity_witness_for_hypothesis_2():
    inst = ka.OperatorInstance((2,), ((0,),), ((0,),), ((1,),), 1)
    v = ka.operator_lemma_check(inst, 1, mode="relaxed")
    assert v.chain_ok and v.kernel_bound and not v.t_kills_a0
    assert v.premise and not v.conclusion
    assert not v.hypotheses


def test_chain_set():
    # Z/9 with P = multiplication by 3: a = 1 gives b = 3, C_b = {x : 3x = 3 or 9x = 3}
    inst = ka.OperatorInstance((9,), ((3,),), ((0,),), ((0,),), 1)
    v = ka.operator_lemma_check(inst, 1, depth_bound=2)
    assert v.chain == [1, 4, 7]


def test_non_commuting_rejected():
    inst = ka.OperatorInstance((2, 2), ((1, 1), (0, 1)), ((1, 0), (1, 1)), ((0, 0), (0, 0)), 1)
    with pytest.raises(ka.NonCommutingError):
        ka.operator_lemma_check(inst, 0)


def test_ill_defined_matrix_rejected():
    inst = ka.OperatorInstance((2, 3), ((1, 1), (0, 1)), ((1, 0), (0, 1)), ((0, 0), (0, 0)), 1)
    with pytest.raises(ValueError):
        ka.analyse(inst)


@given(st.integers(0, 10**6))
def test_analysis_matches_naive_definitions(seed):
    rng = np.random.default_rng(seed)
    inst = ka.random_instance(rng, 64)
    if not inst.orders:
        return
    an = ka.analyse(inst)
    for vec in naive_elements(inst.orders)[:16]:
        a = code_of(inst.orders, vec)
        v = ka.operator_lemma_check(inst, a, mode="relaxed")
        want = naive_verdict(inst, vec)
        got = {k: getattr(v, k) for k in want}
        assert got == want
        if v.hypotheses and v.premise:
            assert v.conclusion and v.t_chain_in_a0 and v.t_chain_in_ker_pn
    assert an.commute


def test_fuzz_small_budget():
    rep = ka.operator_lemma_fuzz(seed=1, trials=500)
    assert rep.strict_satisfied == 500
    assert rep.counterexamples == [] and rep.intermediate_failures == 0
    assert rep.witnesses.get("(2)")
    # only hypothesis (2) ever has witnesses: (1') and (3) follow from it on finite groups
    assert set(rep.witnesses) == {"(2)"}
    for inst, a in rep.witnesses["(2)"][:5]:
        v = ka.operator_lemma_check(inst, a, mode="relaxed")
        assert v.premise and not v.conclusion and v.chain_ok and v.kernel_bound and not v.t_kills_a0


def test_fuzz_is_thread_independent_and_seeded():
    a = ka.operator_lemma_fuzz(seed=5, trials=150, threads=1, block=40).to_dict()
    b = ka.operator_lemma_fuzz(seed=5, trials=150, threads=3, block=40).to_dict()
    c = ka.operator_lemma_fuzz(seed=6, trials=150, threads=1, block=40).to_dict()
    assert a == b
    assert a != c


def test_degenerate_zero_group():
    inst = ka.OperatorInstance((), (), (), (), 0)
    v = ka.operator_lemma_check(inst, 0)
    assert v.hypotheses and v.consistent
