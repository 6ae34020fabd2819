import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from psfield import cyclotomic
from psfield import haar_sim as hs


def naive_measure(p, k, pred, units=True):
    m = p**k
    pop = [u for u in range(m) if not units or u % p]
    return Fraction(sum(pred(u, m) for u in pop), len(pop))


def power_fixes(p):
    e = 2 if p == 2 else p - 1
    return lambda u, m: pow(u, e, m) == 1 % m


# -- events ------------------------------------------------------------------------------


def test_event_examples():
    assert hs.event_fixes_level(hs.ProcyclicSample(3, 2, 1))
    assert not hs.event_fixes_level(hs.ProcyclicSample(3, 2, 4))
    assert hs.event_power_fixes(hs.ProcyclicSample(3, 2, 8))
    assert not hs.event_power_fixes(hs.ProcyclicSample(3, 2, 2))
    for p, k in [(3, 3), (5, 2), (2, 4)]:
        assert hs.event_power_fixes(hs.ProcyclicSample(p, k, 1))
    assert hs.event_char_p(0, 3, 2) and not hs.event_char_p(3, 3, 2)


def test_sample_rejects_non_units():
    with pytest.raises(ValueError):
        hs.ProcyclicSample(3, 2, 6)
    with pytest.raises(ValueError):
        hs.ProcyclicSample(3, 0, 1)
    with pytest.raises(ValueError):
        hs.ProcyclicSample(3, 2, 5).project(3)


@pytest.mark.parametrize("p,k", [(3, 2), (3, 4), (5, 3), (7, 2), (2, 5), (11, 2)])
def test_power_fixes_matches_torsion_units(p, k):
    m = p**k
    for u in range(m):
        if u % p:
            assert hs.event_power_fixes(hs.ProcyclicSample(p, k, u)) == cyclotomic.is_torsion_unit(u, p, k)


# -- exact measures --------------------------------------------------------------------------


def test_exact_examples():
    assert hs.exact_event_measure(3, 2, "power-fixes") == Fraction(1, 3)
    assert hs.exact_event_measure(3, 4, "power-fixes") == Fraction(1, 27)
    for p in (3, 5, 7, 11):
        assert hs.exact_event_measure(p, 1, "power-fixes") == 1
    assert hs.exact_event_measure(3, 2, "fixes-level") == Fraction(1, 6)
    assert hs.exact_event_measure(5, 3, "char-p") == Fraction(1, 125)


@pytest.mark.parametrize("p,k", [(2, 1), (2, 3), (2, 6), (3, 3), (3, 5), (5, 2), (5, 4), (7, 3), (13, 2)])
def test_exact_against_naive_count(p, k):
    assert hs.exact_event_measure(p, k, "power-fixes") == naive_measure(p, k, power_fixes(p))
    assert hs.exact_event_measure(p, k, "fixes-level") == Fraction(1, (p - 1) * p ** (k - 1))
    assert hs.exact_event_measure(p, k, "char-p") == Fraction(1, p**k)


def test_exact_closed_form_odd():
    for p in (3, 5, 7):
        for k in range(1, 6):
            if p**k <= 10**5:
                assert hs.exact_event_measure(p, k, "power-fixes") == Fraction(1, p ** (k - 1))


def test_exact_bound_and_bad_input():
    with pytest.raises(ValueError):
        hs.exact_event_measure(3, 15, "power-fixes")
    with pytest.raises(ValueError):
        hs.exact_event_measure(4, 2, "power-fixes")
    with pytest.raises(ValueError):
        hs.exact_event_measure(3, 2, "nonsense")


# -- decay ---------------------------------------------------------------------------------------


def test_decay_examples():
    assert hs.decay_table(3, 4).measures == [1, Fraction(1, 3), Fraction(1, 9), Fraction(1, 27)]
    assert hs.decay_table(5, 3).measures == [1, Fraction(1, 5), Fraction(1, 25)]


def test_decay_p2_enumerated():
    # units mod 2, 4, 8, 16, 32 with square 1: 1, 2, 4, 4, 4
    want = [naive_measure(2, k, power_fixes(2)) for k in range(1, 6)]
    assert want == [1, 1, 1, Fraction(1, 2), Fraction(1, 4)]
    t = hs.decay_table(2, 5)
    assert t.measures == want
    assert t.decay_start == 3 and t.decay_holds()


@pytest.mark.parametrize("p,kmax", [(3, 8), (5, 5), (7, 4), (11, 3), (2, 12)])
def test_decay_holds(p, kmax):
    t = hs.decay_table(p, kmax)
    assert t.decay_holds()
    start = t.decay_start
    assert all(r == Fraction(1, p) for r in t.ratios[start - 1 :])


@pytest.mark.parametrize("event", hs.EVENTS)
@pytest.mark.parametrize("p,k", [(2, 4), (3, 3), (5, 2)])
def test_events_nested(p, k, event):
    assert hs.events_nested(p, k, event)
    assert hs.decay_table(p, k + 1, event).decay_holds()


# -- Monte Carlo ------------------------------------------------------------------------------------


def test_estimate_examples():
    e = hs.estimate_event_measure(3, 4, "power-fixes", 10**6, 7)
    assert e.exact == Fraction(1, 27) and e.within(4)
    e = hs.estimate_event_measure(3, 2, "fixes-level", 10**6, 7)
    assert e.within(4)
    assert e.estimate == e.hits / e.trials
    assert math.isclose(e.stderr, math.sqrt(e.estimate * (1 - e.estimate) / e.trials))


def test_estimate_rejects_zero_trials():
    with pytest.raises(ValueError):
        hs.estimate_event_measure(3, 2, "power-fixes", 0, 1)


def test_estimate_deterministic_and_thread_independent():
    a = hs.estimate_event_measure(5, 3, "power-fixes", 200_000, 11, threads=1)
    b = hs.estimate_event_measure(5, 3, "power-fixes", 200_000, 11, threads=3)
    c = hs.estimate_event_measure(5, 3, "power-fixes", 200_000, 11, threads=1)
    d = hs.estimate_event_measure(5, 3, "power-fixes", 200_000, 12, threads=1)
    assert a.to_dict() == b.to_dict() == c.to_dict()
    assert d.hits != a.hits


def test_sample_unit_small_cases():
    rng = np.random.default_rng(0)
    seen = {hs.sample_unit(3, 1, rng).u for _ in range(200)}
    assert seen == {1, 2}


@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 4), st.integers(0, 2**32))
def test_sample_units_are_units(p, k, seed):
    xs = hs.sample_units(p, k, 500, np.random.default_rng(seed))
    assert len(xs) == 500 and np.all(xs % p != 0) and np.all((0 <= xs) & (xs < p**k))


def test_uniformity_chi_square():
    assert hs.uniformity_chi_square(3, 2, 10**6, 7).ok
    assert hs.uniformity_chi_square(5, 3, 10**6, 7).ok


def test_uniformity_small_frequencies():
    # each unit mod 9 within 3 standard errors of 1/6
    xs = hs.sample_units(3, 2, 10**5, np.random.default_rng(1))
    se = math.sqrt((1 / 6) * (5 / 6) / 10**5)
    for u in (1, 2, 4, 5, 7, 8):
        assert abs(np.mean(xs == u) - 1 / 6) <= 3 * se


def test_projection_is_uniform():
    rng = np.random.default_rng(2)
    s = hs.sample_unit(3, 3, rng)
    assert s.project(2).u == s.u % 9
    xs = hs.sample_units(3, 3, 60_000, rng) % 9
    counts = np.bincount(xs, minlength=9)[[1, 2, 4, 5, 7, 8]]
    exp = 10_000
    stat = float(((counts - exp) ** 2 / exp).sum())
    assert stat < 20.5  # chi-square 0.999 quantile, 5 df
