"""Interleaved multi-scalar multiplication with wNAF recoding.

Evaluation modes for k*P on a twist instance:

    non-glv: one wNAF stream over the full scalar (~bitlen(n) doublings)
    glv2:    k = k1 + k2*lam, streams over P and Phi(P)  (~bitlen/2)
    glv4:    k = k1 + k2*lam + k3*mu + k4*lam*mu, streams over
             P, Phi(P), Psi(P), Psi(Phi(P))              (~bitlen/4)

All streams share one doubling chain (interleaving); each stream owns a
table of odd multiples {1, 3, ..., 2^(w-1)-1} of its point, kept in
affine form via one batched inversion (Montgomery trick). The tables of
the endomorphism images are derived by applying the endomorphism to the
base-table entries (j*Phi(Q) = Phi(j*Q)), which costs a couple of field
multiplications per entry instead of a fresh addition chain.

The simulated multi-core mode accounts a per-core critical path: each
core runs one stream with its own doubling chain, and the reported
critical tallies are precomputation + the most expensive core + the
final combining additions and affine conversion.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curve import Curve, Point
from .errors import DimensionMismatch
from .fields import paused
from .lattice import babai_decompose, cornacchia_z, cornacchia_zi, glv2_reduce

DEFAULT_WIDTH = 5


@dataclass(frozen=True)
class WnafDigits:
    """Signed-digit recoding, least significant digit first."""

    digits: tuple
    width: int

    def __len__(self):
        return len(self.digits)

    @property
    def nonzeros(self) -> int:
        return sum(1 for d in self.digits if d)


def wnaf_encode(k: int, w: int = DEFAULT_WIDTH) -> WnafDigits:
    """Width-w non-adjacent form: odd digits in (-2^(w-1), 2^(w-1))."""
    if k < 0:
        raise ValueError("wnaf_encode expects a nonnegative scalar")
    if not 2 <= w <= 8:
        raise ValueError("width out of range")
    digits = []
    full, half = 1 << w, 1 << (w - 1)
    while k:
        if k & 1:
            d = k % full
            if d >= half:
                d -= full
            k -= d
        else:
            d = 0
        digits.append(d)
        k >>= 1
    return WnafDigits(digits=tuple(digits), width=w)


@dataclass(frozen=True)
class PrecompTable:
    """Affine odd multiples {Q, 3Q, ..., (2^(w-1)-1)Q} of a base point."""

    base: Point
    entries: tuple
    width: int

    def lookup(self, digit: int) -> Point:
        """Table point for an odd signed digit (negation counts one a)."""
        e = self.entries[(abs(digit) - 1) // 2]
        if digit < 0:
            return Point(e.x, -e.y)
        return e

    @property
    def precomputed_count(self) -> int:
        """Entries beyond the base point itself (7 for width 5)."""
        return len(self.entries) - 1


def _batch_to_affine(curve: Curve, points: list) -> list:
    """Normalize Jacobian points with a single shared inversion."""
    zs = [P.z for P in points if not P.is_infinity and not P.is_affine]
    if not zs:
        return [curve.to_affine(P) for P in points]
    prefix = [zs[0]]
    for z in zs[1:]:
        prefix.append(prefix[-1] * z)
    inv = prefix[-1].inverse()
    invs = [None] * len(zs)
    for j in range(len(zs) - 1, 0, -1):
        invs[j] = inv * prefix[j - 1]
        inv = inv * zs[j]
    invs[0] = inv
    out = []
    j = 0
    for P in points:
        if P.is_infinity or P.is_affine:
            out.append(P)
            continue
        zi = invs[j]
        j += 1
        zi2 = zi.square()
        out.append(Point(P.x * zi2, P.y * (zi2 * zi)))
    return out


def build_table(curve: Curve, Q: Point, w: int = DEFAULT_WIDTH) -> PrecompTable:
    """Odd multiples of Q via a Jacobian chain and one batched inversion."""
    Qa = curve.to_affine(Q)
    size = 1 << (w - 2)
    if size == 1:
        return PrecompTable(base=Qa, entries=(Qa,), width=w)
    two = curve.dbl(Point(Qa.x, Qa.y, curve.ctx.one()))
    chain = [Point(Qa.x, Qa.y, curve.ctx.one())]
    for _ in range(size - 1):
        chain.append(curve.add_full(chain[-1], two))
    affine = _batch_to_affine(curve, chain)
    return PrecompTable(base=Qa, entries=tuple(affine), width=w)


def map_table(table: PrecompTable, point_map) -> PrecompTable:
    """Table of the image point, derived entrywise from an endomorphism."""
    entries = tuple(point_map(e) for e in table.entries)
    return PrecompTable(base=entries[0], entries=entries, width=table.width)


@dataclass
class MsmStats:
    """Operation breakdown of one multiplication."""

    mode: str
    cores: int
    dbl: int = 0
    madd: int = 0
    add: int = 0
    precomp: dict | None = None
    main: dict | None = None
    affine: dict | None = None
    total: dict | None = None
    critical: dict | None = None
    parts: tuple | None = None


def _counted_phi(inst):
    """Phi on affine points with live operation counting (O(1) maps only)."""
    e = inst.endo
    if inst.family_id == "E2":
        gamma = e.x_num[1]
        return lambda P: Point(gamma * P.x, P.y)

    def generic(P):
        return inst.phi(P)

    return generic


def _counted_psi(inst):
    cx, cy = inst.psi_constants

    def psi(P):
        return Point(cx * P.x.frobenius(), cy * P.y.frobenius())

    return psi


def _interleave(
    curve: Curve,
    digit_rows: list,
    tables: list,
    stats: MsmStats,
    columns: int | None = None,
) -> Point:
    """Shared-doubling-chain evaluation of sum_i s_i P_i.

    With a fixed `columns` the loop length is data-independent (the
    uniform-execution convention behind the per-mode doubling counts):
    the accumulator starts as the Jacobian identity (1 : 1 : 0), on
    which the doubling formulas are closed, so every column past the
    first performs a genuine counted doubling.
    """
    length = max((len(r) for r in digit_rows), default=0)
    if columns is None:
        columns = length
    columns = max(columns, length)
    if columns == 0:
        return Point.infinity()
    acc = Point(curve.ctx.one(), curve.ctx.one(), curve.ctx.elem(0))
    for col in range(columns - 1, -1, -1):
        if col != columns - 1:
            acc = curve.dbl(acc)
            stats.dbl += 1
        for row, table in zip(digit_rows, tables):
            if col < len(row.digits) and row.digits[col]:
                acc = curve.madd(acc, table.lookup(row.digits[col]))
                stats.madd += 1
    return acc


def _signed_wnaf(k: int, w: int) -> WnafDigits:
    enc = wnaf_encode(abs(k), w)
    if k < 0:
        return WnafDigits(digits=tuple(-d for d in enc.digits), width=w)
    return enc


def msm_interleaved(
    curve: Curve, scalars: list, points: list, w: int = DEFAULT_WIDTH
) -> Point:
    """sum_i scalars[i] * points[i] with interleaved wNAF streams."""
    if len(scalars) != len(points) or len(points) not in (1, 2, 4):
        raise DimensionMismatch("need 1, 2 or 4 scalar/point pairs")
    rows = [_signed_wnaf(int(k), w) for k in scalars]
    tables = [build_table(curve, P, w) for P in points]
    stats = MsmStats(mode="msm", cores=1)
    return curve.to_affine(_interleave(curve, rows, tables, stats))


def _decomposition(inst, k: int, mode: str):
    if mode == "non-glv":
        return (k,)
    if mode == "glv2":
        basis = getattr(inst, "_basis2", None)
        if basis is None:
            basis = glv2_reduce(inst.n, inst.lam)
            inst._basis2 = basis
        d = babai_decompose(k, basis, polish=True)
        return d.parts[:2]
    if mode == "glv4":
        basis = getattr(inst, "_basis4", None)
        if basis is None:
            nu = cornacchia_z(inst.n, inst.mu)
            fam = inst.base.family
            basis = cornacchia_zi(nu, inst.lam, fam.r, fam.s, inst.n)
            inst._basis4 = basis
        return babai_decompose(k, basis).parts
    raise ValueError(f"unknown mode: {mode}")


def glv_multiply(
    k: int, inst, mode: str = "glv4", cores: int = 1, w: int = DEFAULT_WIDTH
) -> tuple[Point, MsmStats]:
    """k*P on the instance generator with full operation accounting."""
    if cores not in (1, 4):
        raise ValueError("cores must be 1 or 4")
    curve = inst.curve
    counter = curve.ctx.counter
    stats = MsmStats(mode=mode, cores=cores)
    k %= inst.n
    if k == 0:
        stats.parts = ()
        stats.total = dict.fromkeys("msaiMSAI", 0)
        return Point.infinity(), stats
    with paused(counter):
        parts = _decomposition(inst, k, mode)
    stats.parts = tuple(int(x) for x in parts)
    rows = [_signed_wnaf(int(x), w) for x in parts]
    # uniform loop length per mode: ceil(bitlen(n)/dim) doublings
    columns = -(-inst.n.bit_length() // len(rows)) + 1

    snap = counter.snapshot()
    base_table = build_table(curve, inst.P, w)
    tables = [base_table]
    if mode in ("glv2", "glv4"):
        phi = _counted_phi(inst)
        tables.append(map_table(base_table, phi))
    if mode == "glv4":
        psi = _counted_psi(inst)
        tables.append(map_table(base_table, psi))
        tables.append(map_table(tables[1], psi))
    stats.precomp = counter.since(snap)

    snap = counter.snapshot()
    if cores == 1 or len(rows) == 1:
        acc = _interleave(curve, rows, tables, stats, columns=columns)
        stats.main = counter.since(snap)
        combine_cost = {}
        core_costs = [stats.main]
    else:
        # one stream per core, own doubling chain each; combine at the end
        partials, core_costs = [], []
        for row, table in zip(rows, tables):
            csnap = counter.snapshot()
            partials.append(
                _interleave(curve, [row], [table], stats, columns=columns)
            )
            core_costs.append(counter.since(csnap))
        csnap = counter.snapshot()
        acc = partials[0]
        for Q in partials[1:]:
            acc = curve.add_full(acc, Q)
            stats.add += 1
        combine_cost = counter.since(csnap)
        stats.main = counter.since(snap)

    snap = counter.snapshot()
    result = curve.to_affine(acc)
    stats.affine = counter.since(snap)

    keys = ("m", "s", "a", "i", "M", "S", "A", "I")
    stats.total = {
        key: stats.precomp[key] + stats.main[key] + stats.affine[key] for key in keys
    }
    worst = max(core_costs, key=lambda c: (c["m"], c["s"], c["a"]))
    stats.critical = {
        key: stats.precomp[key]
        + worst[key]
        + combine_cost.get(key, 0)
        + stats.affine[key]
        for key in keys
    }
    return result, stats
