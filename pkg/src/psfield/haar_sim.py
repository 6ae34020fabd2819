"""Haar-measure computations on truncated cyclotomic characters.

A random automorphism acts on mu_{p^k} through a unit u mod p^k, and Haar
measure on Z_p^* pushes forward to the uniform measure on (Z/p^k)^*.  The
events below are exact at each level; their measures tend to 0 with k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import chi2

from .cyclotomic import _np_powmod
from .parallel import run_partitioned

ENUM_LIMIT = 10**7
BLOCK = 1 << 16  # trials per RNG block; fixed so results ignore the thread count
EVENTS = ("fixes-level", "power-fixes", "char-p")


@dataclass(frozen=True)
class ProcyclicSample:
    p: int
    k: int
    u: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("level must be >= 1")
        if math.gcd(self.u, self.p) != 1:
            raise ValueError(f"{self.u} is not a unit mod {self.p}")

    def project(self, j: int) -> "ProcyclicSample":
        if not 1 <= j <= self.k:
            raise ValueError("can only project to a lower level")
        return ProcyclicSample(self.p, j, self.u % self.p**j)


def _check(p: int, k: int):
    if k < 1:
        raise ValueError("level must be >= 1")
    if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not prime")


def sample_unit(p: int, k: int, rng) -> ProcyclicSample:
    """Uniform unit mod p^k by rejection from uniform residues."""
    _check(p, k)
    m = p**k
    while True:
        u = int(rng.integers(0, m))
        if u % p:
            return ProcyclicSample(p, k, u)


def sample_units(p: int, k: int, n: int, rng) -> np.ndarray:
    """n uniform units mod p^k (vectorised rejection sampling)."""
    m = p**k
    out = np.empty(0, dtype=np.int64)
    while len(out) < n:
        want = n - len(out)
        draw = rng.integers(0, m, size=want + want // (p - 1) + 16, dtype=np.int64)
        out = np.concatenate([out, draw[draw % p != 0]])
    return out[:n]


def power_exponent(p: int) -> int:
    """p - 1 for odd p; 2 for p = 2 (the torsion of Z_2^* is {+-1})."""
    return 2 if p == 2 else p - 1


def event_fixes_level(s: ProcyclicSample) -> bool:
    return s.u % s.p**s.k == 1 % s.p**s.k


def event_power_fixes(s: ProcyclicSample) -> bool:
    return pow(s.u, power_exponent(s.p), s.p**s.k) == 1 % s.p**s.k


def event_char_p(residue: int, p: int, k: int) -> bool:
    """Image in Z/p^k (a uniform residue, not a unit) is 0."""
    return residue % p**k == 0


def _indicator(event: str, p: int, k: int, x: np.ndarray) -> np.ndarray:
    m = p**k
    if event == "fixes-level":
        return x % m == 1 % m
    if event == "power-fixes":
        return _np_powmod(x, power_exponent(p), m) == 1 % m
    if event == "char-p":
        return x % m == 0
    raise ValueError(f"unknown event {event!r}; expected one of {EVENTS}")


def _population(event: str, p: int, k: int) -> np.ndarray:
    m = p**k
    xs = np.arange(m, dtype=np.int64)
    return xs if event == "char-p" else xs[xs % p != 0]


def exact_event_measure(p: int, k: int, event: str) -> Fraction:
    """Measure of the event at level k, by enumeration."""
    _check(p, k)
    if p**k > ENUM_LIMIT:
        raise ValueError(f"p^k = {p**k} exceeds the enumeration bound {ENUM_LIMIT}")
    pop = _population(event, p, k)
    return Fraction(int(_indicator(event, p, k, pop).sum()), len(pop))


@dataclass(frozen=True)
class MeasureEstimate:
    event: str
    p: int
    k: int
    trials: int
    hits: int
    seed: int
    exact: Fraction | None = None

    @property
    def estimate(self) -> float:
        return self.hits / self.trials

    @property
    def stderr(self) -> float:
        e = self.estimate
        return math.sqrt(e * (1 - e) / self.trials)

    def z_score(self) -> float | None:
        if self.exact is None:
            return None
        if self.stderr == 0:
            return 0.0 if self.estimate == float(self.exact) else math.inf
        return (self.estimate - float(self.exact)) / self.stderr

    def within(self, sigmas: float = 4.0) -> bool:
        z = self.z_score()
        return z is not None and abs(z) <= sigmas

    def to_dict(self) -> dict:
        return {
            "event": self.event,
            "p": self.p,
            "level": self.k,
            "trials": self.trials,
            "hits": self.hits,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "exact": str(self.exact) if self.exact is not None else None,
            "z": self.z_score(),
            "seed": self.seed,
        }


def _block_rng(seed: int, block: int):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def _draw(event: str, p: int, k: int, n: int, rng) -> np.ndarray:
    if event == "char-p":
        return rng.integers(0, p**k, size=n, dtype=np.int64)
    return sample_units(p, k, n, rng)


def _estimate_blocks(task) -> int:
    event, p, k, seed, blocks, trials = task
    hits = 0
    for b in blocks:
        n = min(BLOCK, trials - b * BLOCK)
        hits += int(_indicator(event, p, k, _draw(event, p, k, n, _block_rng(seed, b))).sum())
    return hits


def estimate_event_measure(
    p: int, k: int, event: str, trials: int, seed: int, threads: int = 1, exact: bool = True
) -> MeasureEstimate:
    """Monte Carlo estimate; block b of BLOCK trials uses stream (seed, b)."""
    _check(p, k)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if event not in EVENTS:
        raise ValueError(f"unknown event {event!r}; expected one of {EVENTS}")
    nblocks = -(-trials // BLOCK)
    workers = max(1, min(threads, nblocks))
    tasks = [(event, p, k, seed, list(range(w, nblocks, workers)), trials) for w in range(workers)]
    hits = sum(run_partitioned(_estimate_blocks, tasks, threads))
    ex = exact_event_measure(p, k, event) if exact and p**k <= ENUM_LIMIT else None
    return MeasureEstimate(event, p, k, trials, hits, seed, ex)


@dataclass
class DecayTable:
    p: int
    event: str
    measures: list[Fraction]

    @property
    def ratios(self) -> list[Fraction | None]:
        return [b / a if a else None for a, b in zip(self.measures, self.measures[1:])]

    @property
    def decay_start(self) -> int:
        """First level k whose step k -> k+1 must divide by p."""
        if self.event == "power-fixes":
            return 3 if self.p == 2 else 1
        return 1

    def decay_holds(self) -> bool:
        """Non-increasing everywhere; for power-fixes, ratio exactly 1/p from decay_start."""
        ms = self.measures
        if any(b > a for a, b in zip(ms, ms[1:])):
            return False
        if self.event == "power-fixes":
            start = self.decay_start
            return all(r == Fraction(1, self.p) for r in self.ratios[start - 1 :])
        return True

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "event": self.event,
            "measures": [str(m) for m in self.measures],
            "decay_holds": self.decay_holds(),
        }


def decay_table(p: int, k_max: int, event: str = "power-fixes") -> DecayTable:
    if p**k_max > ENUM_LIMIT:
        raise ValueError(f"p^k_max = {p**k_max} exceeds the enumeration bound")
    return DecayTable(p, event, [exact_event_measure(p, k, event) for k in range(1, k_max + 1)])


def events_nested(p: int, k: int, event: str) -> bool:
    """Level-(k+1) event implies the level-k event on the restriction."""
    m = p ** (k + 1)
    if m > ENUM_LIMIT:
        raise ValueError("modulus too large for enumeration")
    pop = _population(event, p, k + 1)
    upper = _indicator(event, p, k + 1, pop)
    lower = _indicator(event, p, k, pop % p**k)
    return bool(np.all(lower[upper]))


@dataclass(frozen=True)
class ChiSquare:
    statistic: float
    df: int
    critical: float

    @property
    def ok(self) -> bool:
        return self.statistic <= self.critical


def uniformity_chi_square(p: int, k: int, draws: int, seed: int, level: float = 0.999) -> ChiSquare:
    """Chi-square test of sample_units against the uniform law on the units."""
    m = p**k
    counts = np.zeros(m, dtype=np.int64)
    done, b = 0, 0
    while done < draws:
        n = min(BLOCK, draws - done)
        counts += np.bincount(sample_units(p, k, n, _block_rng(seed, b)), minlength=m)
        done += n
        b += 1
    units = np.arange(m)[np.arange(m) % p != 0]
    obs = counts[units]
    expected = draws / len(units)
    stat = float(((obs - expected) ** 2 / expected).sum())
    df = len(units) - 1
    return ChiSquare(stat, df, float(chi2.ppf(level, df)) if df else 0.0)

