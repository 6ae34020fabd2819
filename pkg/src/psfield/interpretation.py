"""Coding the degree-n extension of F = F_q inside F^n.

An element of F_{q^n} = F(a) is its coordinate vector in the basis
1, a, ..., a^(n-1).  Multiplication is coded by the companion matrix of
the minimal polynomial X^n + a_1 X^(n-1) + ... + a_n, and the Galois
action by the single expansion sigma(a) = b_0 + b_1 a + ... + b_{n-1} a^(n-1).
Together these are the 2n parameters of the interpretation.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

import numpy as np

from . import _poly, ff_core, linalg
from .ff_core import FieldError, FieldSpec

# coding needs only F_q arithmetic; enumeration-based checks use ff_core's cap
CODE_CAP = 1 << 32
EXHAUSTIVE_PAIRS_CAP = 1 << 10


class NotAutomorphismError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class CodedExtension:
    base: FieldSpec
    n: int
    min_poly: tuple[int, ...]  # codes over base, constant term first, monic
    companion: tuple[tuple[int, ...], ...]
    galois_coeffs: tuple[int, ...]

    @property
    def F(self):
        return ff_core.field_ops(self.base)

    @property
    def a_params(self) -> tuple[int, ...]:
        """(a_1, ..., a_n) with min_poly = X^n + a_1 X^(n-1) + ... + a_n."""
        return tuple(reversed(self.min_poly[:-1]))

    @property
    def parameters(self) -> tuple[int, ...]:
        return self.a_params + self.galois_coeffs


def canonical_min_poly(base: FieldSpec, n: int) -> tuple[int, ...]:
    """Lex-least monic irreducible of degree n over ``base``."""
    F = ff_core.field_ops(base)
    order = list(F.lex_codes())
    if n == 1:
        return (0, F.one)
    # a zero constant term means X divides the candidate
    for c0 in order[1:]:
        for rest in itertools.product(order, repeat=n - 1):
            f = [c0, *rest, F.one]
            if _poly.is_irreducible(F, f):
                return tuple(f)
    raise AssertionError("no irreducible found")  # pragma: no cover


def companion_matrix(F, min_poly) -> list[list[int]]:
    n = len(min_poly) - 1
    C = [[0] * n for _ in range(n)]
    for j in range(n - 1):
        C[j + 1][j] = F.one
    for i in range(n):
        C[i][n - 1] = F.neg(min_poly[i])
    return C


def _frobenius_expansion(F, min_poly) -> tuple[int, ...]:
    n = len(min_poly) - 1
    r = _poly.powmod(F, [0, F.one] if n > 1 else [F.neg(min_poly[0])], F.q, list(min_poly))
    return tuple(r) + (0,) * (n - len(r))


def code_extension(base: FieldSpec, n: int, galois_coeffs=None) -> CodedExtension:
    if n < 1:
        raise ValueError("degree must be >= 1")
    if base.q**n > CODE_CAP:
        raise FieldError(f"{base.q}^{n} exceeds the coding cap")
    F = ff_core.field_ops(base)
    f = canonical_min_poly(base, n)
    C = companion_matrix(F, f)
    if galois_coeffs is None:
        b = _frobenius_expansion(F, f)
    else:
        b = tuple(galois_coeffs)
        if len(b) != n:
            raise ValueError(f"need {n} Galois coefficients")
    ext = CodedExtension(base, n, f, tuple(map(tuple, C)), b)
    if galois_coeffs is not None and not _is_root(ext, list(b)):
        raise ValueError("Galois coefficients do not expand a root of the minimal polynomial")
    return ext


def _is_root(ext: CodedExtension, v) -> bool:
    F = ext.F
    acc = [0] * ext.n
    power = unit(ext)
    for c in ext.min_poly:
        acc = coded_add(ext, acc, [F.mul(c, x) for x in power])
        power = coded_mul(ext, power, v)
    return not any(acc)


# -- coded arithmetic ------------------------------------------------------------


def unit(ext: CodedExtension) -> list[int]:
    return [ext.F.one] + [0] * (ext.n - 1)


def alpha(ext: CodedExtension) -> list[int]:
    if ext.n == 1:
        return [ext.F.neg(ext.min_poly[0])]
    return [0, ext.F.one] + [0] * (ext.n - 2)


def _check_len(ext, *vs):
    for v in vs:
        if len(v) != ext.n:
            raise ValueError(f"expected a vector of length {ext.n}, got {len(v)}")


def coded_add(ext: CodedExtension, u, v) -> list[int]:
    _check_len(ext, u, v)
    return [ext.F.add(a, b) for a, b in zip(u, v)]


def coded_mul(ext: CodedExtension, u, v) -> list[int]:
    """u(C) v = sum_i u_i C^i v."""
    _check_len(ext, u, v)
    F = ext.F
    acc = [0] * ext.n
    w = list(v)
    for i, ui in enumerate(u):
        if ui:
            acc = [F.add(a, F.mul(ui, x)) for a, x in zip(acc, w)]
        if i < ext.n - 1:
            w = linalg.matvec(F, ext.companion, w)
    return acc


def coded_pow(ext: CodedExtension, u, e: int) -> list[int]:
    result = unit(ext)
    while e:
        if e & 1:
            result = coded_mul(ext, result, u)
        e >>= 1
        if e:
            u = coded_mul(ext, u, u)
    return result


def sigma_matrix(ext: CodedExtension) -> list[list[int]]:
    """Matrix of sigma: column j is b(a)^j."""
    cols = [unit(ext)]
    b = list(ext.galois_coeffs)
    for _ in range(ext.n - 1):
        cols.append(coded_mul(ext, cols[-1], b))
    return [[cols[j][i] for j in range(ext.n)] for i in range(ext.n)]


def galois_matrix(ext: CodedExtension, r: int) -> list[list[int]]:
    """The r-th power of sigma, by composing the sigma matrix."""
    if not 0 <= r < ext.n:
        raise ValueError(f"Galois power {r} out of range 0..{ext.n - 1}")
    return linalg.matpow(ext.F, sigma_matrix(ext), r)


def apply(ext: CodedExtension, M, v) -> list[int]:
    return linalg.matvec(ext.F, M, v)


def cayley_hamilton_holds(ext: CodedExtension) -> bool:
    F, n = ext.F, ext.n
    acc = [[0] * n for _ in range(n)]
    power = linalg.identity(F, n)
    for c in ext.min_poly:
        acc = [[F.add(a, F.mul(c, x)) for a, x in zip(ra, rp)] for ra, rp in zip(acc, power)]
        power = linalg.matmul(F, power, [list(r) for r in ext.companion])
    return not any(any(r) for r in acc)


def fixed_space_dim(ext: CodedExtension, r: int) -> int:
    M = linalg.sub(ext.F, galois_matrix(ext, r), linalg.identity(ext.F, ext.n))
    return ext.n - linalg.rank(ext.F, M)


def automorphism_order(ext: CodedExtension, M) -> int:
    I = linalg.identity(ext.F, ext.n)
    P, k = M, 1
    while P != I:
        P = linalg.matmul(ext.F, P, M)
        k += 1
        if k > ext.n:
            raise ValueError("matrix is not of finite order dividing n")
    return k


def galois_group_is_cyclic(ext: CodedExtension) -> bool:
    """All powers distinct, sigma^n = 1 and G_r G_s = G_{r+s mod n}."""
    F, n = ext.F, ext.n
    mats = [galois_matrix(ext, r) for r in range(n)]
    if len({tuple(map(tuple, M)) for M in mats}) != n:
        return False
    if linalg.matmul(F, mats[-1], sigma_matrix(ext)) != linalg.identity(F, n):
        return False
    return all(
        linalg.matmul(F, mats[r], mats[s]) == mats[(r + s) % n]
        for r in range(n)
        for s in range(n)
    )


def galois_group_is_abelian(ext: CodedExtension) -> bool:
    F, n = ext.F, ext.n
    mats = [galois_matrix(ext, r) for r in range(n)]
    return all(
        linalg.matmul(F, A, B) == linalg.matmul(F, B, A)
        for A, B in itertools.combinations(mats, 2)
    )


# -- bulk checks against a directly built field --------------------------------------


@dataclass
class CheckResult:
    ok: bool
    checked: int
    exhaustive: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


def _base_matvec_batch(F, M, V):
    """Rows of V (B x n base codes) mapped by the matrix M."""
    if F.n == 1:
        # float matmul is exact here (entries < p, n <= 64) and much faster
        prod = V.astype(np.float64) @ np.array(M, dtype=np.float64).T
        return np.rint(prod).astype(np.int64) % F.p
    n = len(M)
    out = np.zeros_like(V)
    for i in range(n):
        acc = np.zeros(V.shape[0], dtype=np.int64)
        for j in range(n):
            if M[i][j]:
                acc = F.np_add(acc, F.np_mul(np.int64(M[i][j]), V[:, j]))
        out[:, i] = acc
    return out


def coded_mul_batch(ext: CodedExtension, U, V):
    F = ext.F
    acc = np.zeros_like(V)
    W = V
    for i in range(ext.n):
        acc = F.np_add(acc, F.np_mul(U[:, i : i + 1], W))
        if i < ext.n - 1:
            W = _base_matvec_batch(F, ext.companion, W)
    return acc


def _vectors(F, n, idx):
    """Coordinate vectors of the given indices (mixed radix q)."""
    idx = np.asarray(idx, dtype=np.int64)
    out = np.empty((len(idx), n), dtype=np.int64)
    for i in range(n):
        idx, out[:, i] = np.divmod(idx, F.q)
    return out


class DirectIso:
    """Coded vectors -> F_{q^n} built directly, sending a to a root of min_poly."""

    def __init__(self, ext: CodedExtension):
        self.ext = ext
        base = ext.base
        self.direct = ff_core.make_field(base.p, base.n * ext.n)
        D = self.D = ff_core.field_ops(self.direct)
        self.emb = np.array(
            [ff_core.embed(ext.F.elem(c), self.direct).code for c in range(base.q)],
            dtype=np.int64,
        )
        f = [int(self.emb[c]) for c in ext.min_poly]
        roots = [x for x in D.lex_codes() if _poly.evaluate(D, f, x) == 0]
        self.root = roots[0]  # lex-least
        self.root_powers = [D.pow(self.root, i) for i in range(ext.n)]

    def map(self, U):
        D = self.D
        acc = np.zeros(U.shape[0], dtype=np.int64)
        for i, rp in enumerate(self.root_powers):
            acc = D.np_add(acc, D.np_mul(self.emb[U[:, i]], np.int64(rp)))
        return acc

    def mul(self, a, b):
        if self.D.tables() is not None or self.D.n == 1:
            return self.D.np_mul(a, b)
        return np.array([self.D.mul(int(x), int(y)) for x, y in zip(a, b)], dtype=np.int64)


def verify_iso_with_direct(
    ext: CodedExtension, samples: int = 10**5, seed: int = 0, chunk: int = 1 << 16
) -> CheckResult:
    """Coded multiplication agrees with multiplication in F_{q^n} built directly.

    Exhaustive over all pairs when q^n <= 2^10, else ``samples`` seeded
    random pairs.
    """
    iso = DirectIso(ext)
    F = ext.F
    N = F.q**ext.n
    # injectivity of the coordinate map
    images = iso.map(_vectors(F, ext.n, np.arange(N)))
    if len(np.unique(images)) != N:
        return CheckResult(False, 0, False, "coordinate map is not injective")
    exhaustive = N <= EXHAUSTIVE_PAIRS_CAP
    total = N * N if exhaustive else samples
    rng = np.random.default_rng(seed)
    checked = 0
    for start in range(0, total, chunk):
        size = min(chunk, total - start)
        if exhaustive:
            i, j = np.divmod(np.arange(start, start + size, dtype=np.int64), N)
        else:
            i, j = rng.integers(0, N, size), rng.integers(0, N, size)
        U, V = _vectors(F, ext.n, i), _vectors(F, ext.n, j)
        lhs = iso.map(coded_mul_batch(ext, U, V))
        rhs = iso.mul(images[i], images[j])
        bad = np.nonzero(lhs != rhs)[0]
        if len(bad):
            b = bad[0]
            return CheckResult(False, checked + b, exhaustive, (U[b].tolist(), V[b].tolist()))
        checked += size
    return CheckResult(True, checked, exhaustive)


# -- Lemma-1 style commutation ----------------------------------------------------------


def _sample_vectors(ext: CodedExtension, count: int, seed: int):
    N = ext.F.q**ext.n
    if N <= count:
        return [list(v) for v in _vectors(ext.F, ext.n, np.arange(N)).tolist()]
    rng = random.Random(seed)
    return [[rng.randrange(ext.F.q) for _ in range(ext.n)] for _ in range(count)]


def multiplicativity_witness(ext: CodedExtension, M, samples: int = 400, seed: int = 0):
    """A pair (u, v) with M(uv) != M(u) M(v), or None."""
    basis = [[ext.F.one if i == j else 0 for i in range(ext.n)] for j in range(ext.n)]
    pairs = [(u, v) for u in basis for v in basis]
    vs = _sample_vectors(ext, 2 * samples, seed)
    pairs += list(zip(vs[::2], vs[1::2]))
    for u, v in pairs:
        if apply(ext, M, coded_mul(ext, u, v)) != coded_mul(ext, apply(ext, M, u), apply(ext, M, v)):
            return u, v
    if linalg.rank(ext.F, M) != ext.n:
        return "singular"
    return None


def verify_commute(ext: CodedExtension, mu, samples: int = 2000, seed: int = 0) -> CheckResult:
    """sigma(mu(x)) == mu(sigma(x)), the right side computed through the b-expansion.

    mu(sigma(x)) = sum_i x_i b(mu(a))^i with b(y) = b_0 + b_1 y + ... +
    b_{n-1} y^(n-1); this uses only mu(a) and that mu fixes the base
    coordinates and the 2n parameters.
    """
    w = multiplicativity_witness(ext, mu, seed=seed)
    if w is not None:
        raise NotAutomorphismError("matrix is not a field automorphism", w)
    sigma = sigma_matrix(ext)
    mu_alpha = apply(ext, mu, alpha(ext))
    b_of_mu_alpha = [0] * ext.n
    y = unit(ext)
    for bk in ext.galois_coeffs:
        b_of_mu_alpha = coded_add(ext, b_of_mu_alpha, [ext.F.mul(bk, c) for c in y])
        y = coded_mul(ext, y, mu_alpha)
    xs = _sample_vectors(ext, samples, seed + 1)
    for x in xs:
        lhs = apply(ext, sigma, apply(ext, mu, x))
        rhs = [0] * ext.n
        y = unit(ext)
        for xi in x:
            rhs = coded_add(ext, rhs, [ext.F.mul(xi, c) for c in y])
            y = coded_mul(ext, y, b_of_mu_alpha)
        if lhs != rhs:
            return CheckResult(False, len(xs), len(xs) == ext.F.q**ext.n, x)
    return CheckResult(True, len(xs), len(xs) == ext.F.q**ext.n)


def expected_order(n: int, r: int) -> int:
    return n // math.gcd(n, r)
