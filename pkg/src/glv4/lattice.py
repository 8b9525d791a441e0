"""Scalar-decomposition lattices for 2- and 4-dimensional endomorphism splits.

Contents: extended-Euclid 2D reduction, the explicit 4D kernel basis,
Cornacchia's gcd in Z (producing a Gaussian prime above n), its
extension to Z[i] with smallest-modulus remainders (producing a short
4D kernel basis directly), an exact-arithmetic LLL baseline, Babai
round-off decomposition, and the numeric bound constants.

The kernel lattice of interest is
    ker F = { x in Z^4 : x1 + x2*lam + x3*mu + x4*lam*mu = 0 (mod n) }
(or its 2D analogue x1 + x2*lam = 0 mod n), a full-rank sublattice of
index n. All arithmetic on basis vectors and Babai coefficients is
exact (integers and fractions); floats appear only in the reported
bound constants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import PreconditionFailed, RankDeficient, SingularBasis

__all__ = [
    "GaussianInt",
    "DecompBasis",
    "Decomposition",
    "BoundConstants",
    "rect_norm",
    "glv2_reduce",
    "glv2_optimal_k",
    "cornacchia_z",
    "cornacchia_zi",
    "kernel_basis_raw",
    "lll_reduce",
    "babai_decompose",
    "bound_constants",
]


def rect_norm(v) -> int:
    """max_i |v_i| of an integer vector."""
    return max(abs(int(c)) for c in v)


@dataclass(frozen=True)
class GaussianInt:
    """Element a + bi of Z[i]."""

    re: int
    im: int

    def __add__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianInt":
        return GaussianInt(-self.re, -self.im)

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def mul_i(self) -> "GaussianInt":
        return GaussianInt(-self.im, self.re)

    def __repr__(self):
        return f"GaussianInt({self.re}, {self.im})"


def _gaussian_divmod(a: GaussianInt, b: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    """Quotient with smallest-modulus remainder, and that remainder.

    The exact quotient a/b lies in some unit lattice square; the chosen
    q is the vertex minimising |a - q*b|, with equal-norm ties broken
    by lexicographic (re, im) order of the remainder. This makes the
    division deterministic, which the complex rounding alone is not
    when a/b has a half-integer coordinate.
    """
    d = b.norm()
    if d == 0:
        raise ZeroDivisionError("gaussian division by zero")
    num = a * b.conj()
    fr = num.re // d
    fi = num.im // d
    best = None
    for dr in (0, 1):
        for di in (0, 1):
            q = GaussianInt(fr + dr, fi + di)
            rem = a - q * b
            key = (rem.norm(), rem.re, rem.im)
            if best is None or key < best[0]:
                best = (key, q, rem)
    return best[1], best[2]


@dataclass(frozen=True)
class DecompBasis:
    """Basis of the kernel lattice, 2D or 4D."""

    dim: int
    vectors: tuple
    n: int
    lam: int
    mu: int | None = None

    def f_eval(self, v) -> int:
        """x1 + x2*lam (+ x3*mu + x4*lam*mu) mod n."""
        if self.dim == 2:
            t = v[0] + v[1] * self.lam
        else:
            t = (
                v[0]
                + v[1] * self.lam
                + v[2] * self.mu
                + v[3] * self.lam * self.mu
            )
        return t % self.n

    def in_kernel(self) -> bool:
        return all(self.f_eval(v) == 0 for v in self.vectors)

    def det(self) -> int:
        """Determinant of the basis matrix (exact integer)."""
        m = [[Fraction(c) for c in row] for row in self.vectors]
        det = Fraction(1)
        for col in range(self.dim):
            piv = next((r for r in range(col, self.dim) if m[r][col]), None)
            if piv is None:
                return 0
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                det = -det
            det *= m[col][col]
            for r in range(col + 1, self.dim):
                f = m[r][col] / m[col][col]
                for c in range(col, self.dim):
                    m[r][c] -= f * m[col][c]
        assert det.denominator == 1
        return int(det)

    def max_rect_norm(self) -> int:
        return max(rect_norm(v) for v in self.vectors)


@dataclass(frozen=True)
class Decomposition:
    """A scalar split k = k1 + k2*lam (+ k3*mu + k4*lam*mu) mod n."""

    k: int
    parts: tuple
    rect_norm: int


# ----------------------------------------------------------------------------
# 2-GLV reduction
# ----------------------------------------------------------------------------


def glv2_optimal_k(r: int, s: int):
    """Smallest constant K with a kernel basis of rectangle norms < K*sqrt(n).

    K = (sqrt(s)/2)(1 + 1/|D|) for odd r and (sqrt(s)/2)sqrt(1 + 4/|D|)
    for even r, with D = r^2 - 4s < 0.
    """
    delta = r * r - 4 * s
    if delta >= 0:
        raise PreconditionFailed("characteristic polynomial must be CM (r^2 < 4s)")
    d = abs(delta)
    with mpmath.workdps(30):
        if r % 2:
            return mpmath.sqrt(s) / 2 * (1 + mpmath.mpf(1) / d)
        return mpmath.sqrt(s) / 2 * mpmath.sqrt(1 + mpmath.mpf(4) / d)


def _rect2(v) -> int:
    return max(abs(v[0]), abs(v[1]))


def glv2_reduce(n: int, lam: int) -> DecompBasis:
    """Short 2D basis of {(i, j) : i + lam*j = 0 mod n} via extended Euclid.

    The Euclidean sequence is stopped around sqrt(n) and the nearby
    candidate vectors (r_j, -t_j) are polished by small integer
    combinations, which in practice attains the optimal constant.
    """
    if not 1 <= lam < n:
        raise PreconditionFailed("lam must lie in [1, n-1]")
    r0, r1 = n, lam
    t0, t1 = 0, 1
    rows = [(r0, -t0), (r1, -t1)]
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
        rows.append((r1, -t1))
    # consecutive rows span the full kernel (determinant +-n); start from
    # the pair around the sqrt(n) crossover and Lagrange-Gauss reduce it
    m = min(
        range(len(rows) - 1),
        key=lambda j: max(_rect2(rows[j]), _rect2(rows[j + 1])),
    )
    u, w = rows[m], rows[m + 1]
    while True:
        if u[0] * u[0] + u[1] * u[1] < w[0] * w[0] + w[1] * w[1]:
            u, w = w, u
        d = w[0] * w[0] + w[1] * w[1]
        q = round(Fraction(u[0] * w[0] + u[1] * w[1], d))
        v = (u[0] - q * w[0], u[1] - q * w[1])
        if v[0] * v[0] + v[1] * v[1] >= u[0] * u[0] + u[1] * u[1]:
            break
        u = v
    # the Euclidean-reduced pair need not minimise the rectangle norm;
    # a bounded search over unimodular combinations does
    best = None
    for a1 in range(-3, 4):
        for b1 in range(-3, 4):
            v1 = (a1 * u[0] + b1 * w[0], a1 * u[1] + b1 * w[1])
            for a2 in range(-3, 4):
                for b2 in range(-3, 4):
                    if abs(a1 * b2 - a2 * b1) != 1:
                        continue
                    v2 = (a2 * u[0] + b2 * w[0], a2 * u[1] + b2 * w[1])
                    key = (max(_rect2(v1), _rect2(v2)), _rect2(v1), v1, v2)
                    if best is None or key < best:
                        best = key
    return DecompBasis(dim=2, vectors=(best[2], best[3]), n=n, lam=lam % n)


# ----------------------------------------------------------------------------
# Cornacchia in Z
# ----------------------------------------------------------------------------


def cornacchia_z(n: int, mu: int, debug: bool = False) -> GaussianInt:
    """Gaussian prime nu = a + bi with a^2 + b^2 = n, given mu^2 = -1 mod n.

    Truncated extended Euclid on (n, mu): stop at the first remainder
    below sqrt(n); that remainder and its cofactor form nu. Since every
    remainder satisfies r_j = mu*t_j (mod n), the output also satisfies
    a - mu*(-b) = 0 (mod n), i.e. nu annihilates any point P with
    Psi(P) = mu*P.
    """
    if not 1 < mu < n or (mu * mu + 1) % n != 0:
        raise PreconditionFailed("mu^2 must be -1 modulo n")
    r0, r1, r2 = n, mu, n
    t0, t1, t2 = 0, 1, 0
    if debug:
        s0, s1 = 1, 0
    while r2 * r2 >= n:
        q = r0 // r1
        r2 = r0 - q * r1
        r0, r1 = r1, r2
        t2 = t0 - q * t1
        t0, t1 = t1, t2
        if debug:
            s0, s1 = s1, s0 - q * s1
            assert n * s1 + mu * t1 == r1
            assert n * s0 + mu * t0 == r0
            assert t1 * r0 - t0 * r1 in (n, -n)
    nu = GaussianInt(r1, -t1)
    assert nu.norm() == n
    return nu


# ----------------------------------------------------------------------------
# Cornacchia in Z[i] (extended Gaussian Euclidean algorithm)
# ----------------------------------------------------------------------------


def _split(z1: GaussianInt, z2: GaussianInt) -> tuple:
    """(z1, z2) in Z[i]^2 -> (x1, x2, x3, x4) with z1 = x1+ix3, z2 = x2+ix4."""
    return (z1.re, z2.re, z1.im, z2.im)


def cornacchia_zi(
    nu: GaussianInt, lam: int, r: int, s: int, n: int, debug: bool = False
) -> DecompBasis:
    """Short 4D kernel basis from the Gaussian Euclidean algorithm.

    Runs extended Euclid over Z[i] on (lam, nu) — or (lam + n, nu) when
    lam^2 < 2n — choosing at each step the remainder of smallest
    modulus, and stops once norm(r2)^2 * (1+|r|+s)^2 drops below n.
    The last two rows (r_j, -s_j), viewed in Z[i]^2 and split into real
    and imaginary parts, give two kernel vectors; multiplying both by i
    completes a basis of ker F.
    """
    if nu.norm() != n:
        raise PreconditionFailed("norm(nu) must equal n")
    g0 = GaussianInt(lam if lam * lam >= 2 * n else lam + n, 0)
    g1 = nu
    c0 = GaussianInt(1, 0)
    c1 = GaussianInt(0, 0)
    g2 = GaussianInt(n, 0)
    w = 1 + abs(r) + s
    sign = -1  # (-1)^(j+1) at the state (g0, g1) = (r_j, r_{j+1})
    while g2.norm() ** 2 * w * w >= n:
        q, g2 = _gaussian_divmod(g0, g1)
        if debug:
            for dr in (0, 1):
                for di in (0, 1):
                    alt = g0 - GaussianInt(
                        (g0 * g1.conj()).re // g1.norm() + dr,
                        (g0 * g1.conj()).im // g1.norm() + di,
                    ) * g1
                    assert g2.norm() <= alt.norm()
        g0, g1 = g1, g2
        c0, c1 = c1, c0 - q * c1
        sign = -sign
        if debug:
            lhs = c1 * g0 - c0 * g1
            assert lhs == (nu if sign > 0 else -nu)
    v1 = _split(g0, -c0)
    v2 = _split(g1, -c1)
    v3 = _split(g0.mul_i(), (-c0).mul_i())
    v4 = _split(g1.mul_i(), (-c1).mul_i())
    return DecompBasis(dim=4, vectors=(v1, v2, v3, v4), n=n, lam=lam % n, mu=nu_eigenvalue(nu, n))


def nu_eigenvalue(nu: GaussianInt, n: int) -> int:
    """The residue mu with mu^2 = -1 mod n picked out by nu (nu | mu - i)."""
    # nu = a+bi annihilates, so a + b*mu' = 0 mod n for the eigenvalue mu'
    # of the order-4 endomorphism: mu' = -a * b^{-1} mod n.
    if nu.im % n == 0:
        raise PreconditionFailed("nu must not be rational")
    return (-nu.re * pow(nu.im, -1, n)) % n


# ----------------------------------------------------------------------------
# Explicit kernel basis, LLL baseline, Babai rounding
# ----------------------------------------------------------------------------


def kernel_basis_raw(n: int, lam: int, mu: int) -> DecompBasis:
    """The triangular kernel basis (n,0,0,0), (-lam,1,0,0), (-mu,0,1,0),
    (lam*mu, -mu, -lam, 1); determinant n by inspection."""
    vectors = (
        (n, 0, 0, 0),
        (-lam, 1, 0, 0),
        (-mu, 0, 1, 0),
        (lam * mu, -mu, -lam, 1),
    )
    return DecompBasis(dim=4, vectors=vectors, n=n, lam=lam % n, mu=mu % n)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def lll_reduce(basis: DecompBasis, delta: Fraction = Fraction(3, 4)) -> DecompBasis:
    """LLL reduction with exact rational Gram-Schmidt (Lovasz delta = 3/4)."""
    b = [list(v) for v in basis.vectors]
    dim = basis.dim

    def gram_schmidt():
        ortho, mu = [], [[Fraction(0)] * dim for _ in range(dim)]
        for i in range(dim):
            w = [Fraction(c) for c in b[i]]
            for j in range(i):
                denom = _dot(ortho[j], ortho[j])
                if denom == 0:
                    raise RankDeficient("basis is not full rank")
                mu[i][j] = Fraction(_dot(b[i], ortho[j]), 1) / denom
                w = [wc - mu[i][j] * oc for wc, oc in zip(w, ortho[j])]
            ortho.append(w)
        return ortho, mu

    ortho, mu = gram_schmidt()
    if _dot(ortho[-1], ortho[-1]) == 0:
        raise RankDeficient("basis is not full rank")
    k = 1
    while k < dim:
        for j in range(k - 1, -1, -1):
            if abs(mu[k][j]) > Fraction(1, 2):
                q = (mu[k][j] + Fraction(1, 2)).__floor__()
                b[k] = [bc - q * oc for bc, oc in zip(b[k], b[j])]
                ortho, mu = gram_schmidt()
        if _dot(ortho[k], ortho[k]) >= (delta - mu[k][k - 1] ** 2) * _dot(
            ortho[k - 1], ortho[k - 1]
        ):
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            ortho, mu = gram_schmidt()
            k = max(k - 1, 1)
    return DecompBasis(
        dim=dim,
        vectors=tuple(tuple(v) for v in b),
        n=basis.n,
        lam=basis.lam,
        mu=basis.mu,
    )


def babai_decompose(k: int, basis: DecompBasis, polish: bool = False) -> Decomposition:
    """Round-off decomposition: write (k,0,..) = sum beta_j v_j over Q,
    round each beta_j to the nearest integer, output the offset.

    With polish=True the rounding is refined to the exact closest
    lattice vector (rectangle norm) over the +-1 neighbourhood of the
    rounded coefficients, which in 2D attains the covering-radius
    constant instead of the triangle-inequality one.
    """
    dim = basis.dim
    target = [k] + [0] * (dim - 1)
    # solve basis^T * beta = target exactly
    m = [[Fraction(basis.vectors[j][i]) for j in range(dim)] for i in range(dim)]
    rhs = [Fraction(t) for t in target]
    for col in range(dim):
        piv = next((r for r in range(col, dim) if m[r][col]), None)
        if piv is None:
            raise SingularBasis("basis matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / m[col][col]
        m[col] = [c * inv for c in m[col]]
        rhs[col] *= inv
        for r in range(dim):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * c for a, c in zip(m[r], m[col])]
                rhs[r] -= f * rhs[col]
    rounded = [(beta + Fraction(1, 2)).__floor__() for beta in rhs]

    def offset(coeffs):
        return tuple(
            target[i] - sum(coeffs[j] * basis.vectors[j][i] for j in range(dim))
            for i in range(dim)
        )

    parts = offset(rounded)
    if polish:
        for deltas in itertools.product((-1, 0, 1), repeat=dim):
            cand = offset([b + d for b, d in zip(rounded, deltas)])
            if rect_norm(cand) < rect_norm(parts):
                parts = cand
    if dim == 2:
        parts = parts + (0, 0)
    return Decomposition(k=k, parts=parts, rect_norm=rect_norm(parts))


# ----------------------------------------------------------------------------
# Bound constants
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundConstants:
    """Numeric constants of the decomposition bounds for a family (r, s)."""

    r: int
    s: int
    B: object
    thm1_bound: object
    thm3_bound: object
    alg_bound: object
    u: object
    theta: object
    Theta: object
    A: object


def bound_constants(r: int, s: int) -> BoundConstants:
    """All bound constants for the family with polynomial x^2 + r x + s.

    B^4 = 4 + 4s^2 + 8s + 8|r| + 8|r|s + 2(r^2 + 2s) + 2|r^2 - 2s|;
    the decomposition bounds are 16 B^3 n^(1/4) (generic reduced basis)
    and 103 sqrt(1+|r|+s) n^(1/4) (Euclidean path, basis vectors below
    51.5 sqrt(1+|r|+s) n^(1/4)). u, theta, Theta, A are the auxiliary
    constants of the Euclidean-path analysis.
    """
    if r * r - 4 * s >= 0:
        raise PreconditionFailed("need r^2 - 4s < 0")
    with mpmath.workdps(30):
        b4 = (
            4
            + 4 * s * s
            + 8 * s
            + 8 * abs(r)
            + 8 * abs(r) * s
            + 2 * (r * r + 2 * s)
            + 2 * abs(r * r - 2 * s)
        )
        B = mpmath.root(b4, 4)
        w = mpmath.sqrt(1 + abs(r) + s)
        u = mpmath.findroot(lambda x: 2 * x**3 - 3 * x**2 - 2 * x + 1, 0.35)
        theta = 2 * mpmath.acot(u)
        Theta = mpmath.atan(2) - mpmath.pi / 3
        return BoundConstants(
            r=r,
            s=s,
            B=B,
            thm1_bound=16 * B**3,
            thm3_bound=103 * w,
            alg_bound=mpmath.mpf("51.5") * w,
            u=u,
            theta=theta,
            Theta=Theta,
            A=1 / mpmath.sin(Theta),
        )
