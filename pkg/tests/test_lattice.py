import math

import mpmath
import pytest

from glv4.errors import PreconditionFailed, RankDeficient
from glv4.fields import is_probable_prime
from glv4.lattice import (
    GaussianInt,
    babai_decompose,
    bound_constants,
    cornacchia_z,
    cornacchia_zi,
    glv2_optimal_k,
    glv2_reduce,
    kernel_basis_raw,
    lll_reduce,
    rect_norm,
)


def next_prime(n):
    n += 1
    while not is_probable_prime(n):
        n += 1
    return n


def brute_sum_of_squares(n):
    a = 0
    while a * a <= n:
        b2 = n - a * a
        b = math.isqrt(b2)
        if b * b == b2:
            return a, b
        a += 1
    return None


def test_cornacchia_z_hand_trace():
    # n = 13, mu = 5 (5^2 = -1 mod 13): remainders 13, 5, 3 -> nu = 3 + 2i
    nu = cornacchia_z(13, 5, debug=True)
    assert (nu.re, abs(nu.im)) == (3, 2)
    assert nu.norm() == 13


def test_cornacchia_z_small_brute(rng):
    count = 0
    p = 5
    while count < 40:
        p += 4
        if p >= 10**6 or not is_probable_prime(p) or p % 4 != 1:
            continue
        mu = pow(min(x for x in range(2, p) if pow(x, (p - 1) // 2, p) == p - 1),
                 (p - 1) // 4, p)
        nu = cornacchia_z(p, mu if 1 < mu < p else p - mu, debug=True)
        a, b = brute_sum_of_squares(p)
        assert {abs(nu.re), abs(nu.im)} == {a, b}
        count += 1


def test_cornacchia_z_rejects_bad_mu():
    with pytest.raises(PreconditionFailed):
        cornacchia_z(13, 4)


def test_gaussian_divmod_invariants(rng):
    from glv4.lattice import _gaussian_divmod

    for _ in range(200):
        a = GaussianInt(rng.randrange(-10**9, 10**9), rng.randrange(-10**9, 10**9))
        b = GaussianInt(rng.randrange(-10**4, 10**4), rng.randrange(-10**4, 10**4))
        if b.is_zero():
            continue
        q, r = _gaussian_divmod(a, b)
        assert b * q + r == a
        # minimal among the four rounding vertices, so below |b|^2
        assert r.norm() < b.norm()


def test_egea_toy_and_bounds(p1_instance):
    inst = p1_instance
    n, lam, mu = inst.n, inst.lam, inst.mu
    nu = cornacchia_z(n, mu, debug=True)
    basis = cornacchia_zi(nu, lam, 1, 1, n, debug=True)
    assert basis.dim == 4
    assert abs(basis.det()) == n
    for v in basis.vectors:
        assert basis.f_eval(v) == 0
    w = mpmath.sqrt(3)
    bound = 51.5 * w * mpmath.root(n, 4)
    assert basis.max_rect_norm() < bound
    # lower bound: rectangle norm of any nonzero kernel vector >= n^(1/4)/B
    B = bound_constants(1, 1).B
    lower = mpmath.root(n, 4) / B
    for v in basis.vectors:
        assert rect_norm(v) >= lower


def test_kernel_basis_and_lll(rng):
    for _ in range(20):
        n = next_prime(rng.randrange(10**10, 10**12))
        lam = rng.randrange(2, n)
        mu = rng.randrange(2, n)
        raw = kernel_basis_raw(n, lam, mu)
        assert abs(raw.det()) == n
        red = lll_reduce(raw)
        assert abs(red.det()) == n
        for v in red.vectors:
            assert red.f_eval(v) == 0


def test_lll_rank_deficient():
    from glv4.lattice import DecompBasis

    bad = DecompBasis(dim=2, vectors=((1, 2), (2, 4)), n=5, lam=2)
    with pytest.raises(RankDeficient):
        lll_reduce(bad)


def test_babai_congruence_and_cvp(rng):
    n, lam = 1000003, 100
    # find an eigenvalue-like lam with lam^2 = -1 is not needed in 2D
    basis = glv2_reduce(n, lam)
    for _ in range(100):
        k = rng.randrange(n)
        d = babai_decompose(k, basis, polish=True)
        assert basis.f_eval(d.parts) == k
        # polished output is never worse than plain rounding
        plain = babai_decompose(k, basis)
        assert d.rect_norm <= plain.rect_norm


def test_glv2_optimal_constant_small(rng):
    # covering-radius constant for r = s = 1 (disc -3): k = 2/3
    bound = glv2_optimal_k(1, 1)
    assert abs(float(bound) - 2 / 3) < 1e-12
    count = 0
    p = 7
    while count < 15:
        p = next_prime(p + 1)
        if p % 3 != 1:
            continue
        # lam of order 3 mod p: root of x^2 + x + 1
        rt = None
        for x in range(2, p):
            if (x * x + x + 1) % p == 0:
                rt = x
                break
        basis = glv2_reduce(p, rt)
        worst = 0
        for k in range(p):
            d = babai_decompose(k, basis, polish=True)
            worst = max(worst, d.rect_norm)
        assert worst <= float(bound) * mpmath.sqrt(p) + 1e-9
        count += 1


def test_bound_constants_published_digits():
    c = bound_constants(1, 1)
    assert abs(c.B**4 - 40) < 1e-24
    assert mpmath.nstr(c.u, 7) == "0.3554157"
    assert mpmath.nstr(c.theta, 6) == "2.45861"
    assert mpmath.nstr(c.A, 6) == "16.6902"
    assert abs(2 * c.u**3 - 3 * c.u**2 - 2 * c.u + 1) < 1e-12
    # r = 0, s = 1: 4 + 4 + 8 + 0 + 0 + 2*2 + 2*2 = 24
    c01 = bound_constants(0, 1)
    assert abs(c01.B**4 - 24) < 1e-24


def test_bound_constants_domain():
    with pytest.raises(PreconditionFailed):
        bound_constants(2, 1)


def test_decomposition_lower_bound_zi(p1_instance):
    # in the Z[i]^2 view, max(|z1|, |z2|) >= sqrt(|nu|) / sqrt(1+|r|+s)
    inst = p1_instance
    nu = cornacchia_z(inst.n, inst.mu)
    basis = cornacchia_zi(nu, inst.lam, 1, 1, inst.n)
    lower = mpmath.sqrt(mpmath.sqrt(inst.n)) / mpmath.sqrt(3)
    for v in basis.vectors:
        z1 = mpmath.hypot(v[0], v[2])
        z2 = mpmath.hypot(v[1], v[3])
        assert max(z1, z2) >= lower
