"""Modular arithmetic for F_p and F_p^2 with instrumented operation counting.

Counting conventions
--------------------
Every field operation bumps exactly one tally of its own category:
uppercase (M, S, A, I) for F_p, lowercase (m, s, a, i) for F_p^2.
The add category covers additions, subtractions, negations and
multiplications by tiny constants (doubling, tripling, halving), which
on a packed representation are shift/add sequences of comparable cost.
An F_p^2 multiplication is executed as 3 F_p multiplications
(Karatsuba) and also bumps the uppercase tallies accordingly, so both
levels stay consistent.

This is a research artifact: nothing here is constant-time and no
side-channel hardening is attempted.
"""

from __future__ import annotations

import random

from .errors import ContextMismatch, DivisionByZero

_MR_ROUNDS = 40


def is_probable_prime(n: int, rng: random.Random | None = None) -> bool:
    """Miller-Rabin primality test."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    rng = rng or random.Random(0xC0FFEE ^ n)
    for _ in range(_MR_ROUNDS):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) in {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def sqrt_mod(a: int, p: int) -> int | None:
    """Square root of a modulo an odd prime p, or None (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q = p - 1
    e = 0
    while q % 2 == 0:
        q //= 2
        e += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    c = pow(z, q, p)
    x = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = e
    while t != 1:
        t2 = t
        i = 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        x = x * b % p
        t = t * b * b % p
        c = b * b % p
        m = i
    return x


class OpCounter:
    """Tallies of field operations, F_p uppercase and F_p^2 lowercase."""

    __slots__ = ("m", "s", "a", "i", "M", "S", "A", "I", "enabled")

    def __init__(self):
        self.m = self.s = self.a = self.i = 0
        self.M = self.S = self.A = self.I = 0
        self.enabled = True

    def snapshot(self) -> tuple:
        return (self.m, self.s, self.a, self.i, self.M, self.S, self.A, self.I)

    def since(self, snap: tuple) -> dict:
        now = self.snapshot()
        keys = ("m", "s", "a", "i", "M", "S", "A", "I")
        return {k: now[j] - snap[j] for j, k in enumerate(keys)}

    def reset(self):
        self.m = self.s = self.a = self.i = 0
        self.M = self.S = self.A = self.I = 0

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("m", "s", "a", "i", "M", "S", "A", "I")}

    def bump(self, m=0, s=0, a=0, i=0, M=0, S=0, A=0, I=0):
        if not self.enabled:
            return
        self.m += m
        self.s += s
        self.a += a
        self.i += i
        self.M += M
        self.S += S
        self.A += A
        self.I += I


class paused:
    """Context manager suspending all counting on a counter."""

    def __init__(self, counter: OpCounter):
        self.counter = counter

    def __enter__(self):
        self.prev = self.counter.enabled
        self.counter.enabled = False
        return self.counter

    def __exit__(self, *exc):
        self.counter.enabled = self.prev
        return False


class PrimeField:
    """Context for F_p. Immutable after construction; counter excepted."""

    def __init__(self, p: int, check_prime: bool = True):
        if check_prime and not is_probable_prime(p):
            raise ValueError(f"modulus is not prime: {p}")
        self.p = p
        self.half = (p + 1) // 2  # multiplicative inverse of 2
        self.counter = OpCounter()

    def __repr__(self):
        return f"PrimeField(0x{self.p:x})"

    def elem(self, v: int) -> "FieldElement":
        return FieldElement(self, v % self.p)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def frac(self, num: int, den: int) -> "FieldElement":
        """Exact rational num/den reduced into F_p (uncounted, setup only)."""
        d = den % self.p
        if d == 0:
            raise DivisionByZero("denominator divisible by p")
        return FieldElement(self, num * pow(d, -1, self.p) % self.p)

    def sqrt(self, x: "FieldElement") -> "FieldElement | None":
        r = sqrt_mod(x.value, self.p)
        return None if r is None else FieldElement(self, r)

    def rand(self, rng: random.Random) -> "FieldElement":
        return FieldElement(self, rng.randrange(self.p))

    def non_residue(self) -> int:
        """Smallest positive quadratic non-residue."""
        b = 2
        while legendre(b, self.p) != -1:
            b += 1
        return b


class FieldElement:
    """Element of F_p; value held reduced into [0, p)."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: PrimeField, value: int):
        self.ctx = ctx
        self.value = value

    def __repr__(self):
        return f"Fp(0x{self.value:x})"

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.ctx.p == other.ctx.p
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.ctx.p, self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def _check(self, other):
        if self.ctx is not other.ctx and self.ctx.p != other.ctx.p:
            raise ContextMismatch("operands from different prime fields")

    def __add__(self, other):
        self._check(other)
        self.ctx.counter.bump(A=1)
        return FieldElement(self.ctx, (self.value + other.value) % self.ctx.p)

    def __sub__(self, other):
        self._check(other)
        self.ctx.counter.bump(A=1)
        return FieldElement(self.ctx, (self.value - other.value) % self.ctx.p)

    def __neg__(self):
        self.ctx.counter.bump(A=1)
        return FieldElement(self.ctx, -self.value % self.ctx.p)

    def __mul__(self, other):
        self._check(other)
        self.ctx.counter.bump(M=1)
        return FieldElement(self.ctx, self.value * other.value % self.ctx.p)

    def square(self):
        self.ctx.counter.bump(S=1)
        return FieldElement(self.ctx, self.value * self.value % self.ctx.p)

    def double(self):
        self.ctx.counter.bump(A=1)
        return FieldElement(self.ctx, 2 * self.value % self.ctx.p)

    def triple(self):
        self.ctx.counter.bump(A=1)
        return FieldElement(self.ctx, 3 * self.value % self.ctx.p)

    def halve(self):
        self.ctx.counter.bump(A=1)
        return FieldElement(self.ctx, self.value * self.ctx.half % self.ctx.p)

    def inverse(self):
        if self.value == 0:
            raise DivisionByZero("inverse of zero in F_p")
        self.ctx.counter.bump(I=1)
        return FieldElement(self.ctx, pow(self.value, -1, self.ctx.p))

    def pow_raw(self, e: int) -> "FieldElement":
        """Plain exponentiation, uncounted (setup/verification use)."""
        return FieldElement(self.ctx, pow(self.value, e, self.ctx.p))


class QuadExt:
    """Context for F_p^2 = F_p[t]/(t^2 - beta), beta a non-residue.

    For p = 3 (mod 4) the default beta is -1 and elements read re + im*i.
    The counter object is shared with the base field so a single scope
    captures both levels.
    """

    def __init__(self, base: PrimeField, beta: int | None = None):
        self.base = base
        p = base.p
        if beta is None:
            beta = -1 if p % 4 == 3 else base.non_residue()
        beta %= p
        if legendre(beta, p) != -1:
            raise ValueError("beta must be a quadratic non-residue")
        self.p = p
        self.beta = beta
        self.order = p * p
        self.counter = base.counter
        self.half = base.half

    def __repr__(self):
        return f"QuadExt(0x{self.p:x}, beta={self.beta})"

    def elem(self, re: int, im: int = 0) -> "QuadExtElement":
        return QuadExtElement(self, re % self.p, im % self.p)

    def zero(self) -> "QuadExtElement":
        return QuadExtElement(self, 0, 0)

    def one(self) -> "QuadExtElement":
        return QuadExtElement(self, 1, 0)

    def embed(self, x: FieldElement) -> "QuadExtElement":
        return QuadExtElement(self, x.value, 0)

    def frac(self, num: int, den: int) -> "QuadExtElement":
        return self.embed(self.base.frac(num, den))

    def rand(self, rng: random.Random) -> "QuadExtElement":
        return QuadExtElement(self, rng.randrange(self.p), rng.randrange(self.p))

    def is_square(self, x: "QuadExtElement") -> bool:
        return x.is_zero() or x.pow_raw((self.order - 1) // 2).re == 1

    def sqrt(self, x: "QuadExtElement") -> "QuadExtElement | None":
        """Square root in F_p^2 via Tonelli-Shanks on the extension group."""
        if x.is_zero():
            return self.zero()
        if not self.is_square(x):
            return None
        with paused(self.counter):
            q = self.order - 1
            e = 0
            while q % 2 == 0:
                q //= 2
                e += 1
            rng = random.Random(0x5EED)
            while True:
                z = self.rand(rng)
                if not z.is_zero() and not self.is_square(z):
                    break
            c = z.pow_raw(q)
            r = x.pow_raw((q + 1) // 2)
            t = x.pow_raw(q)
            m = e
            one = self.one()
            while t != one:
                t2 = t
                i = 0
                while t2 != one:
                    t2 = t2 * t2
                    i += 1
                b = c.pow_raw(1 << (m - i - 1))
                r = r * b
                c = b * b
                t = t * c
                m = i
        return r


class QuadExtElement:
    """Element re + im*t of F_p^2 with t^2 = beta."""

    __slots__ = ("ctx", "re", "im")

    def __init__(self, ctx: QuadExt, re: int, im: int):
        self.ctx = ctx
        self.re = re
        self.im = im

    def __repr__(self):
        return f"Fp2(0x{self.re:x}, 0x{self.im:x})"

    def __eq__(self, other):
        return (
            isinstance(other, QuadExtElement)
            and self.ctx.p == other.ctx.p
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self):
        return hash((self.ctx.p, self.re, self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def _check(self, other):
        if self.ctx is not other.ctx and (
            self.ctx.p != other.ctx.p or self.ctx.beta != other.ctx.beta
        ):
            raise ContextMismatch("operands from different quadratic extensions")

    def __add__(self, other):
        self._check(other)
        ctx = self.ctx
        ctx.counter.bump(a=1, A=2)
        return QuadExtElement(
            ctx, (self.re + other.re) % ctx.p, (self.im + other.im) % ctx.p
        )

    def __sub__(self, other):
        self._check(other)
        ctx = self.ctx
        ctx.counter.bump(a=1, A=2)
        return QuadExtElement(
            ctx, (self.re - other.re) % ctx.p, (self.im - other.im) % ctx.p
        )

    def __neg__(self):
        ctx = self.ctx
        ctx.counter.bump(a=1, A=2)
        return QuadExtElement(ctx, -self.re % ctx.p, -self.im % ctx.p)

    def __mul__(self, other):
        # Karatsuba: 3M + 5A per m.
        self._check(other)
        ctx = self.ctx
        p = ctx.p
        a, b, c, d = self.re, self.im, other.re, other.im
        ac = a * c % p
        bd = b * d % p
        t = (a + b) * (c + d) % p
        ctx.counter.bump(m=1, M=3, A=5)
        return QuadExtElement(
            ctx, (ac + ctx.beta * bd) % p, (t - ac - bd) % p
        )

    def square(self):
        ctx = self.ctx
        p = ctx.p
        a, b = self.re, self.im
        if ctx.beta == p - 1:
            # (a+bi)^2 = (a+b)(a-b) + 2ab i: 2M + 3A
            re = (a + b) * (a - b) % p
            im = 2 * a * b % p
            ctx.counter.bump(s=1, M=2, A=3)
        else:
            re = (a * a + ctx.beta * b * b) % p
            im = 2 * a * b % p
            ctx.counter.bump(s=1, M=3, A=2)
        return QuadExtElement(ctx, re, im)

    def double(self):
        ctx = self.ctx
        ctx.counter.bump(a=1, A=2)
        return QuadExtElement(ctx, 2 * self.re % ctx.p, 2 * self.im % ctx.p)

    def triple(self):
        ctx = self.ctx
        ctx.counter.bump(a=1, A=2)
        return QuadExtElement(ctx, 3 * self.re % ctx.p, 3 * self.im % ctx.p)

    def halve(self):
        ctx = self.ctx
        ctx.counter.bump(a=1, A=2)
        return QuadExtElement(
            ctx, self.re * ctx.half % ctx.p, self.im * ctx.half % ctx.p
        )

    def conj(self):
        ctx = self.ctx
        ctx.counter.bump(a=1, A=1)
        return QuadExtElement(ctx, self.re, -self.im % ctx.p)

    def frobenius(self):
        """x -> x^p. Since beta is a non-residue this is conjugation."""
        return self.conj()

    def norm_int(self) -> int:
        """Norm re^2 - beta*im^2 as a plain integer (uncounted)."""
        p = self.ctx.p
        return (self.re * self.re - self.ctx.beta * self.im * self.im) % p

    def inverse(self):
        ctx = self.ctx
        p = ctx.p
        nrm = self.norm_int()
        if nrm == 0:
            raise DivisionByZero("inverse of zero-norm element in F_p^2")
        ninv = pow(nrm, -1, p)
        ctx.counter.bump(i=1, I=1, M=2, S=2, A=2)
        return QuadExtElement(ctx, self.re * ninv % p, -self.im * ninv % p)

    def pow_raw(self, e: int) -> "QuadExtElement":
        """Plain square-and-multiply, uncounted (setup/verification use)."""
        ctx = self.ctx
        with paused(ctx.counter):
            acc = ctx.one()
            base = self
            if e < 0:
                base = base.inverse()
                e = -e
            while e:
                if e & 1:
                    acc = acc * base
                base = base.square()
                e >>= 1
        return acc
