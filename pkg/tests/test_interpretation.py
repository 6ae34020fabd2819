import pytest
from hypothesis import given
from hypothesis import strategies as st

from psfield import ff_core as fc
from psfield import interpretation as it
from psfield import linalg

F3 = fc.make_field(3)


def polymul_mod(p, f, u, v):
    """Schoolbook product of u and v reduced mod the monic f, over Z/p."""
    n = len(f) - 1
    prod = [0] * (2 * n - 1)
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            prod[i + j] = (prod[i + j] + a * b) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n + 1):
                prod[k - n + i] = (prod[k - n + i] - c * f[i]) % p
    return prod[:n]


@pytest.fixture(scope="module")
def f9():
    return it.code_extension(F3, 2)


def test_code_extension_examples(f9):
    assert f9.min_poly == (1, 0, 1)
    assert [list(r) for r in f9.companion] == [[0, 2], [1, 0]]
    assert f9.galois_coeffs == (0, 2)
    assert len(f9.parameters) == 4
    e1 = it.code_extension(fc.make_field(2), 1)
    assert e1.n == 1 and it.coded_mul(e1, [1], [1]) == [1]


def test_coded_mul_examples(f9):
    assert it.coded_mul(f9, [0, 1], [0, 1]) == [2, 0]
    assert it.coded_mul(f9, [1, 1], [1, 2]) == [2, 0]
    for v in ([0, 0], [2, 1], [1, 2]):
        assert it.coded_mul(f9, [1, 0], v) == v
    with pytest.raises(ValueError):
        it.coded_mul(f9, [1], [1, 0])


def test_galois_matrix_examples(f9):
    G1 = it.galois_matrix(f9, 1)
    assert G1 == [[1, 0], [0, 2]]
    assert it.galois_matrix(f9, 0) == [[1, 0], [0, 1]]
    assert linalg.matmul(f9.F, G1, G1) == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        it.galois_matrix(f9, 2)


@pytest.mark.parametrize("p,n", [(2, 3), (2, 5), (3, 3), (5, 2), (7, 3)])
def test_coded_mul_matches_schoolbook(p, n):
    ext = it.code_extension(fc.make_field(p), n)
    import random

    rng = random.Random(p * 100 + n)
    for _ in range(200):
        u = [rng.randrange(p) for _ in range(n)]
        v = [rng.randrange(p) for _ in range(n)]
        assert it.coded_mul(ext, u, v) == polymul_mod(p, list(ext.min_poly), u, v)


@pytest.mark.parametrize(
    "q,n,exhaustive",
    [(3, 2, True), (4, 2, True), (2, 1, True), (2, 4, True), (5, 4, True), (3, 7, False), (16, 3, False), (4, 8, False)],
)
def test_iso_with_direct(q, n, exhaustive):
    ext = it.code_extension(fc.make_field(*fc.prime_power(q)), n)
    res = it.verify_iso_with_direct(ext, samples=20000)
    assert res.ok and res.exhaustive == exhaustive
    if exhaustive:
        assert res.checked == (q**n) ** 2


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16])
def test_galois_group_properties(q):
    base = fc.make_field(*fc.prime_power(q))
    for n in range(1, 9):
        ext = it.code_extension(base, n)
        assert it.cayley_hamilton_holds(ext)
        assert it.galois_group_is_cyclic(ext)
        assert it.galois_group_is_abelian(ext)
        if n > 1:
            assert it.fixed_space_dim(ext, 1) == 1
            for r in range(n):
                assert it.automorphism_order(ext, it.galois_matrix(ext, r)) == it.expected_order(n, r)


def test_commute_examples():
    ext = it.code_extension(F3, 4)
    assert it.verify_commute(ext, it.galois_matrix(ext, 2)).ok
    assert it.verify_commute(ext, it.galois_matrix(ext, 0)).ok


def test_swap_is_rejected(f9):
    swap = [[0, 1], [1, 0]]
    with pytest.raises(it.NotAutomorphismError) as info:
        it.verify_commute(f9, swap)
    u, v = info.value.witness
    assert it.apply(f9, swap, it.coded_mul(f9, u, v)) != it.coded_mul(
        f9, it.apply(f9, swap, u), it.apply(f9, swap, v)
    )


def test_alternative_galois_coefficients():
    ext = it.code_extension(F3, 4)
    # alpha^27 is another root; sigma^3 also generates the group
    b3 = it.coded_pow(ext, it.alpha(ext), 27)
    alt = it.code_extension(F3, 4, galois_coeffs=b3)
    assert it.galois_group_is_cyclic(alt)
    assert it.sigma_matrix(alt) == it.galois_matrix(ext, 3)
    # alpha^9 is a root too, but sigma^2 only generates a subgroup of order 2
    b2 = it.coded_pow(ext, it.alpha(ext), 9)
    sub = it.code_extension(F3, 4, galois_coeffs=b2)
    assert not it.galois_group_is_cyclic(sub)
    assert it.automorphism_order(ext, it.sigma_matrix(sub)) == 2
    with pytest.raises(ValueError):
        it.code_extension(F3, 4, galois_coeffs=[1, 1, 0, 0])


def test_cap():
    with pytest.raises(fc.FieldError):
        it.code_extension(fc.make_field(2), 40)


exts = st.sampled_from([it.code_extension(fc.make_field(*fc.prime_power(q)), n) for q, n in [(3, 2), (2, 5), (4, 3), (5, 3)]])


@given(exts, st.data())
def test_ring_axioms(ext, data):
    vec = st.lists(st.integers(0, ext.F.q - 1), min_size=ext.n, max_size=ext.n)
    u, v, w = data.draw(vec), data.draw(vec), data.draw(vec)
    m = lambda a, b: it.coded_mul(ext, a, b)  # noqa: E731
    assert m(u, v) == m(v, u)
    assert m(m(u, v), w) == m(u, m(v, w))
    assert m(u, it.coded_add(ext, v, w)) == it.coded_add(ext, m(u, v), m(u, w))
    sigma = it.sigma_matrix(ext)
    assert it.apply(ext, sigma, m(u, v)) == m(it.apply(ext, sigma, u), it.apply(ext, sigma, v))
