import pytest

from glv4.fields import (
    OpCounter,
    PrimeField,
    QuadExt,
    is_probable_prime,
    legendre,
    paused,
    sqrt_mod,
)


def test_primality_and_legendre():
    assert is_probable_prime(2**127 - 58309)
    assert not is_probable_prime(2**127 - 58307)
    p = 10007
    squares = {pow(x, 2, p) for x in range(1, p)}
    for a in (2, 3, 5, 1234, 9999):
        assert legendre(a, p) == (1 if a % p in squares else -1)
    assert legendre(p, p) == 0


def test_sqrt_mod_roundtrip(rng):
    p = 2**61 - 1
    for _ in range(50):
        x = rng.randrange(1, p)
        r = sqrt_mod(x * x % p, p)
        assert r is not None and r * r % p == x * x % p
    # non-residue has no root
    nr = PrimeField(p).non_residue()
    assert sqrt_mod(nr, p) is None


def test_counter_tallies_base_field():
    fp = PrimeField(10007)
    c = fp.counter
    a, b = fp.elem(123), fp.elem(456)
    c.reset()
    _ = a * b
    assert c.M == 1 and c.S == 0
    _ = a.square()
    assert c.S == 1
    _ = a + b
    _ = a - b
    _ = -a
    _ = a.double()
    _ = a.triple()
    _ = a.halve()
    assert c.A == 6
    _ = a.inverse()
    assert c.I == 1
    with paused(c):
        _ = a * b
    assert c.M == 1


def test_extension_arithmetic_and_counts(rng):
    p = 2**127 - 58309  # p = 3 mod 4, so t^2 = -1
    ext = QuadExt(PrimeField(p))
    c = ext.counter
    x, y = ext.rand(rng), ext.rand(rng)
    assert (x * y) * x.inverse() * y.inverse() == ext.one()
    assert x.square() == x * x
    assert x.conj() * x == ext.embed(ext.base.elem(x.norm_int()))
    c.reset()
    _ = x * y
    assert (c.m, c.M, c.A) == (1, 3, 5)  # Karatsuba
    c.reset()
    _ = x.square()
    assert (c.s, c.M, c.A) == (1, 2, 3)  # (re+im)(re-im), 2*re*im
    c.reset()
    _ = x + y
    assert (c.a, c.A) == (1, 2)
    c.reset()
    _ = x.inverse()
    assert (c.i, c.I, c.M, c.S, c.A) == (1, 1, 2, 2, 2)


def test_frobenius_is_pth_power(rng):
    p = 2**61 - 1
    ext = QuadExt(PrimeField(p))
    x = ext.rand(rng)
    assert x.frobenius() == x.pow_raw(p)
    assert x.frobenius().frobenius() == x


def test_extension_sqrt(rng):
    p = 2**61 - 1
    ext = QuadExt(PrimeField(p))
    for _ in range(20):
        x = ext.rand(rng)
        sq = x.square()
        assert ext.is_square(sq)
        r = ext.sqrt(sq)
        assert r.square() == sq


def test_counter_snapshot_since():
    c = OpCounter()
    c.bump(m=2, A=5)
    snap = c.snapshot()
    c.bump(m=1, s=4, i=1)
    d = c.since(snap)
    assert d == {"m": 1, "s": 4, "a": 0, "i": 1, "M": 0, "S": 0, "A": 0, "I": 0}


def test_bad_modulus_rejected():
    with pytest.raises(ValueError):
        PrimeField(91)
