"""Short-Weierstrass point arithmetic in affine and Jacobian coordinates.

Doubling on a = 0 curves and mixed addition use schedules whose natural
operation tallies are exactly 3m+4s+7a and 8m+3s+7a. Full Jacobian
addition books 11m+3s+7a as a lump while computing with a plain
schedule (no abstract-field schedule attains that tally without
platform-level lazy reduction). Conversion to affine costs 1i+3m+1s.

Points are immutable values; all operations are pure.
"""

from __future__ import annotations

import random

from .fields import paused

_INF = object()


class Point:
    """Curve point: affine (z is None), Jacobian, or the point at infinity."""

    __slots__ = ("x", "y", "z")

    def __init__(self, x, y, z=None):
        self.x = x
        self.y = y
        self.z = z

    @staticmethod
    def infinity() -> "Point":
        return Point(_INF, _INF)

    @property
    def is_infinity(self) -> bool:
        return self.x is _INF

    @property
    def is_affine(self) -> bool:
        return self.z is None and self.x is not _INF

    def __repr__(self):
        if self.is_infinity:
            return "Point(inf)"
        if self.is_affine:
            return f"Point({self.x!r}, {self.y!r})"
        return f"PointJ({self.x!r}, {self.y!r}, {self.z!r})"


class Curve:
    """y^2 = x^3 + a x + b over F_p or F_p^2, with optional subgroup data."""

    def __init__(self, ctx, a, b, n: int | None = None, h: int | None = None):
        self.ctx = ctx
        self.a = a
        self.b = b
        self.n = n
        self.h = h
        if h is not None and h > 4:
            raise ValueError("cofactor must be <= 4")
        self.a_is_zero = a.is_zero()
        # 4a^3 + 27b^2 != 0
        with paused(ctx.counter):
            disc = a * a * a.double().double() + b.square().triple() * ctx.elem(9)
            if disc.is_zero():
                raise ValueError("singular curve")

    def __repr__(self):
        return f"Curve(a={self.a!r}, b={self.b!r})"

    # -- basic point utilities -------------------------------------------------

    def neg(self, P: Point) -> Point:
        if P.is_infinity:
            return P
        return Point(P.x, -P.y, P.z)

    def to_affine(self, P: Point) -> Point:
        """Normalize a Jacobian point; tallies 1i + 3m + 1s."""
        if P.is_infinity or P.is_affine:
            return P
        if P.z.is_zero():
            return Point.infinity()
        zi = P.z.inverse()
        zi2 = zi.square()
        x = P.x * zi2
        y = P.y * (zi2 * zi)
        return Point(x, y)

    def eq(self, P: Point, Q: Point) -> bool:
        with paused(self.ctx.counter):
            Pa, Qa = self.to_affine(P), self.to_affine(Q)
            if Pa.is_infinity or Qa.is_infinity:
                return Pa.is_infinity and Qa.is_infinity
            return Pa.x == Qa.x and Pa.y == Qa.y

    def is_on_curve(self, P: Point) -> bool:
        if P.is_infinity:
            return True
        with paused(self.ctx.counter):
            if P.is_affine:
                lhs = P.y.square()
                rhs = P.x.square() * P.x + self.a * P.x + self.b
                return lhs == rhs
            if P.z.is_zero():
                return False
            z2 = P.z.square()
            z4 = z2.square()
            lhs = P.y.square()
            rhs = P.x.square() * P.x + self.a * P.x * z4 + self.b * z4 * z2
            return lhs == rhs

    # -- group law -------------------------------------------------------------

    def dbl(self, P: Point) -> Point:
        """2P in Jacobian coordinates; 3m+4s+7a on a = 0 curves."""
        if P.is_infinity:
            return P
        if P.y.is_zero():
            return Point.infinity()
        X, Y = P.x, P.y
        Z = P.z if P.z is not None else self.ctx.one()
        if self.a_is_zero:
            t0 = Y.double()            # 2Y
            B = t0.square()            # 4Y^2
            A = X.square()
            C = X * B                  # 4XY^2
            M = A.triple()             # 3X^2
            X3 = M.square() - C.double()
            t = C - X3
            E = B.square().halve()     # 8Y^4
            Y3 = M * t - E
            Z3 = t0 * Z
            return Point(X3, Y3, Z3)
        # generic a != 0 (base curves of families E3..E6)
        A = X.square()
        B = Y.square()
        C = B.square()
        Z2 = Z.square()
        D = ((X + B).square() - A - C).double()
        M = A.triple() + self.a * Z2.square()
        X3 = M.square() - D.double()
        Y3 = M * (D - X3) - C.double().double().double()
        Z3 = (Y * Z).double()
        return Point(X3, Y3, Z3)

    def madd(self, P: Point, Q: Point) -> Point:
        """P (Jacobian) + Q (affine); 8m+3s+7a in the generic case."""
        if Q.is_infinity:
            return P
        assert Q.is_affine, "madd expects an affine second operand"
        if P.is_infinity or (not P.is_affine and P.z.is_zero()):
            return Point(Q.x, Q.y, self.ctx.one())
        if P.is_affine:
            P = Point(P.x, P.y, self.ctx.one())
        X1, Y1, Z1 = P.x, P.y, P.z
        Z1Z1 = Z1.square()
        U2 = Q.x * Z1Z1
        S2 = Q.y * (Z1 * Z1Z1)
        H = U2 - X1
        R = S2 - Y1
        if H.is_zero():
            if R.is_zero():
                return self.dbl(P)
            return Point.infinity()
        HH = H.square()
        H3 = H * HH
        V = X1 * HH
        X3 = (R.square() - H3) - V.double()
        Y3 = R * (V - X3) - Y1 * H3
        Z3 = Z1 * H
        return Point(X3, Y3, Z3)

    def add_full(self, P: Point, Q: Point) -> Point:
        """Full Jacobian addition; books 11m+3s+7a."""
        if P.is_infinity or (not P.is_affine and P.z.is_zero()):
            return Q
        if Q.is_infinity or (not Q.is_affine and Q.z.is_zero()):
            return P
        if P.is_affine:
            return self.madd(Q, P) if not Q.is_affine else self.madd(
                Point(P.x, P.y, self.ctx.one()), Q
            )
        if Q.is_affine:
            return self.madd(P, Q)
        ctx = self.ctx
        with paused(ctx.counter):
            X1, Y1, Z1 = P.x, P.y, P.z
            X2, Y2, Z2 = Q.x, Q.y, Q.z
            Z1Z1 = Z1.square()
            Z2Z2 = Z2.square()
            U1 = X1 * Z2Z2
            U2 = X2 * Z1Z1
            S1 = Y1 * (Z2 * Z2Z2)
            S2 = Y2 * (Z1 * Z1Z1)
            H = U2 - U1
            R = S2 - S1
            if H.is_zero():
                if R.is_zero():
                    exceptional = "dbl"
                else:
                    return Point.infinity()
            else:
                exceptional = None
                HH = H.square()
                H3 = H * HH
                V = U1 * HH
                X3 = (R.square() - H3) - V.double()
                Y3 = R * (V - X3) - S1 * H3
                Z3 = Z1 * Z2 * H
        if exceptional == "dbl":
            return self.dbl(P)
        if hasattr(ctx, "beta"):
            # 11m = 33M+55A, 3s = 6M+9A, 7a = 14A (beta = -1 layout)
            ctx.counter.bump(m=11, s=3, a=7, M=39, A=78)
        else:
            ctx.counter.bump(M=11, S=3, A=7)
        return Point(X3, Y3, Z3)

    # -- reference scalar multiplication (oracle for all GLV paths) ------------

    def scalar_mul_reference(self, k: int, P: Point) -> Point:
        """Plain left-to-right double-and-add; result in affine coordinates."""
        if P.is_infinity:
            return P
        k = int(k)
        neg = k < 0
        if neg:
            k = -k
        if self.n is not None:
            k %= self.n
            if neg:
                k = self.n - k if k else 0
            neg = False
        if k == 0:
            return Point.infinity()
        Pa = self.to_affine(P)
        if neg:
            Pa = self.neg(Pa)
        acc = Point(Pa.x, Pa.y, self.ctx.one())
        for bit in bin(k)[3:]:
            acc = self.dbl(acc)
            if bit == "1":
                acc = self.madd(acc, Pa)
        return self.to_affine(acc)

    # -- point generation and serialization ------------------------------------

    def lift_x(self, x):
        """Affine point with the given x, or None."""
        with paused(self.ctx.counter):
            rhs = x.square() * x + self.a * x + self.b
            y = self.ctx.sqrt(rhs)
        if y is None:
            return None
        return Point(x, y)

    def random_point(self, rng: random.Random) -> Point:
        while True:
            P = self.lift_x(self.ctx.rand(rng))
            if P is not None:
                return P

    def serialize_point(self, P: Point) -> str:
        """Uncompressed hex: 04 || coords (big-endian); 00 for infinity."""
        if P.is_infinity:
            return "00"
        Pa = self.to_affine(P)
        width = (self.ctx.p.bit_length() + 7) // 8 * 2
        parts = []
        for c in (Pa.x, Pa.y):
            if hasattr(c, "im"):
                parts += [format(c.re, f"0{width}x"), format(c.im, f"0{width}x")]
            else:
                parts.append(format(c.value, f"0{width}x"))
        return "04" + "".join(parts)

    def parse_point(self, text: str) -> Point:
        text = text.strip().lower()
        if text == "00":
            return Point.infinity()
        if not text.startswith("04"):
            raise ValueError("expected uncompressed point encoding")
        body = text[2:]
        width = (self.ctx.p.bit_length() + 7) // 8 * 2
        ext = hasattr(self.ctx, "beta")
        nparts = 4 if ext else 2
        if len(body) != nparts * width:
            raise ValueError("bad point encoding length")
        vals = [int(body[j * width : (j + 1) * width], 16) for j in range(nparts)]
        if ext:
            return Point(self.ctx.elem(vals[0], vals[1]), self.ctx.elem(vals[2], vals[3]))
        return Point(self.ctx.elem(vals[0]), self.ctx.elem(vals[1]))
