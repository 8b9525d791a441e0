"""Command-line front end.

Subcommands: catalog, instantiate, decompose, mul, verify-bounds,
cost-report, constants. All reports are emitted as JSON lines on
standard output; --pretty adds human-readable tables. The PRNG seed is
taken from GLV4_SEED when set, and is always echoed in reports. Exit
code 0 means zero bound violations and all congruence checks passed.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field

import mpmath

from .catalog import (
    FAMILIES,
    catalog_get,
    eigenvalue_solve,
    find_group_order,
    load_instance,
    make_twist,
    save_instance,
)
from .curve import Curve, Point
from .errors import MissingComparisonCurve
from .fields import PrimeField, is_probable_prime, paused
from .lattice import (
    babai_decompose,
    bound_constants,
    cornacchia_z,
    cornacchia_zi,
    glv2_reduce,
    kernel_basis_raw,
    lll_reduce,
    rect_norm,
)
from .multiscalar import (
    MsmStats,
    _interleave,
    _signed_wnaf,
    build_table,
    glv_multiply,
    map_table,
)

DEFAULT_SEED = 0x61F5EED
COMPARISON_PRIME = 2**256 - 11733  # y^2 = x^3 + 2 over F_p, 2-GLV baseline


@dataclass(frozen=True)
class CostModelWeights:
    """Everything in multiples of one F_{p^2} multiplication m."""

    s_per_m: float = 0.70
    a_per_m: float = 0.2
    i_per_m: float = 50.0
    M_per_m: float = 0.75

    def cost(self, tally: dict) -> float:
        """Weighted m-equivalent of an F_{p^2} operation tally."""
        return (
            tally["m"]
            + self.s_per_m * tally["s"]
            + self.a_per_m * tally["a"]
            + self.i_per_m * tally["i"]
        )

    def cost_base(self, tally: dict) -> float:
        """Weighted m-equivalent of a base-field tally (1M = M_per_m m)."""
        return self.M_per_m * (
            tally["M"]
            + self.s_per_m * tally["S"]
            + self.a_per_m * tally["A"]
            + self.i_per_m * tally["I"]
        )


@dataclass
class CampaignReport:
    """Aggregate of a bound-verification campaign."""

    samples: int
    seed: int
    method: str
    violations: int = 0
    congruence_failures: int = 0
    max_ratio: float = 0.0  # max_i |k_i| / n^(1/4)
    theoretical_constant: float = 0.0
    basis_max_rect: int = 0
    basis_bound: int = 0
    basis_ms: float = 0.0
    weighted_costs: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "method": self.method,
            "violations": self.violations,
            "congruence_failures": self.congruence_failures,
            "max_ratio": self.max_ratio,
            "theoretical_constant": self.theoretical_constant,
            "basis_max_rect": str(self.basis_max_rect),
            "basis_bound": str(self.basis_bound),
            "basis_ms": self.basis_ms,
            "weighted_costs": self.weighted_costs,
        }


def _emit(record: dict, pretty: bool = False) -> None:
    print(json.dumps(record))
    if pretty:
        width = max(len(k) for k in record)
        for k, v in record.items():
            print(f"  {k:<{width}} : {v}", file=sys.stderr)


def _seed(args) -> int:
    env = os.environ.get("GLV4_SEED")
    if env is not None:
        return int(env, 0)
    return getattr(args, "seed", None) or DEFAULT_SEED


def _weights(args) -> CostModelWeights:
    return CostModelWeights(
        s_per_m=args.weight_s,
        a_per_m=args.weight_a,
        i_per_m=args.weight_i,
        M_per_m=args.weight_M,
    )


def _basis4(inst, method: str):
    if method == "cornacchia":
        nu = cornacchia_z(inst.n, inst.mu)
        fam = inst.base.family
        return cornacchia_zi(nu, inst.lam, fam.r, fam.s, inst.n)
    if method == "lll":
        return lll_reduce(kernel_basis_raw(inst.n, inst.lam, inst.mu))
    raise ValueError(f"unknown method: {method}")


# ----------------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------------


def cmd_catalog(args) -> int:
    for fam in FAMILIES.values():
        _emit(
            {
                "family": fam.id,
                "char_poly": f"x^2 + {fam.r}x + {fam.s}".replace("+ -", "- "),
                "cm_disc": fam.disc,
                "curve_a": str(fam.curve_a),
                "curve_b": str(fam.curve_b),
            },
            args.pretty,
        )
    return 0


def cmd_instantiate(args) -> int:
    p = int(args.prime, 0)
    t0 = time.perf_counter()
    inst = make_twist(catalog_get(args.family, p))
    elapsed = time.perf_counter() - t0
    if args.out:
        save_instance(inst, args.out)
    _emit(
        {
            "family": inst.family_id,
            "p": hex(p),
            "u": f"{inst.u.re:#x},{inst.u.im:#x}",
            "n": hex(inst.n),
            "n_bits": inst.n.bit_length(),
            "h": inst.h,
            "lambda": hex(inst.lam),
            "mu": hex(inst.mu),
            "seconds": round(elapsed, 3),
            "out": args.out,
        },
        args.pretty,
    )
    return 0


def cmd_decompose(args) -> int:
    inst = load_instance(args.curve)
    basis = _basis4(inst, args.method)
    k = int(args.scalar, 0) % inst.n
    d = babai_decompose(k, basis)
    congruent = basis.f_eval(d.parts) == k % inst.n
    n4 = float(mpmath.root(inst.n, 4))
    _emit(
        {
            "scalar": hex(k),
            "method": args.method,
            "parts": [str(x) for x in d.parts],
            "max_abs": str(d.rect_norm),
            "ratio_to_n14": d.rect_norm / n4,
            "congruent": congruent,
        },
        args.pretty,
    )
    return 0 if congruent else 1


def cmd_mul(args) -> int:
    inst = load_instance(args.curve)
    weights = _weights(args)
    k = int(args.scalar, 0) % inst.n
    R, stats = glv_multiply(k, inst, mode=args.mode, cores=args.cores)
    ok = True
    if args.check:
        ref = inst.curve.scalar_mul_reference(k, inst.P)
        ok = inst.curve.eq(R, ref)
    record = {
        "scalar": hex(k),
        "mode": args.mode,
        "cores": args.cores,
        "result": inst.curve.serialize_point(R),
        "weighted_cost": round(weights.cost(stats.total), 2),
    }
    if args.check:
        record["matches_reference"] = ok
    if args.report_ops:
        record["tallies"] = stats.total
        record["dbl"] = stats.dbl
        record["madd"] = stats.madd
        if args.cores > 1:
            record["critical_cost"] = round(weights.cost(stats.critical), 2)
    _emit(record, args.pretty)
    return 0 if ok else 1


def cmd_verify_bounds(args) -> int:
    inst = load_instance(args.curve)
    seed = _seed(args)
    rng = random.Random(seed)
    fam = inst.base.family
    w = 1 + abs(fam.r) + fam.s
    consts = bound_constants(fam.r, fam.s)
    if args.method == "cornacchia":
        const = float(103 * mpmath.sqrt(w))
        basis_const = float(51.5 * mpmath.sqrt(w))
    else:
        const = float(16 * consts.B**3)
        basis_const = None

    t0 = time.perf_counter()
    basis = _basis4(inst, args.method)
    basis_ms = (time.perf_counter() - t0) * 1000.0

    n4 = mpmath.root(inst.n, 4)
    bound = int(mpmath.floor(const * n4)) + 1
    report = CampaignReport(
        samples=args.samples,
        seed=seed,
        method=args.method,
        theoretical_constant=const,
        basis_max_rect=basis.max_rect_norm(),
        basis_bound=int(mpmath.floor((basis_const or const) * n4)) + 1,
        basis_ms=round(basis_ms, 3),
    )
    if basis_const is not None and report.basis_max_rect >= report.basis_bound:
        report.violations += 1
    max_ratio = 0.0
    for _ in range(args.samples):
        k = rng.randrange(inst.n)
        d = babai_decompose(k, basis)
        if basis.f_eval(d.parts) != k:
            report.congruence_failures += 1
        if d.rect_norm >= bound:
            report.violations += 1
        max_ratio = max(max_ratio, float(d.rect_norm / n4))
    report.max_ratio = max_ratio
    _emit(report.as_dict(), args.pretty)
    return 0 if report.violations == 0 and report.congruence_failures == 0 else 1


def _comparison_glv2(weights: CostModelWeights, rng: random.Random) -> dict:
    """Base-field 2-GLV baseline on y^2 = x^3 + 2 over F_{p2}."""
    p = COMPARISON_PRIME
    if not is_probable_prime(p):
        raise MissingComparisonCurve("comparison prime is not prime")
    fp = PrimeField(p)
    curve = Curve(fp, fp.elem(0), fp.elem(2))
    N = find_group_order(curve, p, -3, rng)
    for h in (1, 2, 3, 4):
        if N % h == 0 and is_probable_prime(N // h):
            n = N // h
            break
    else:
        raise MissingComparisonCurve("no large prime subgroup on the baseline")
    # cube root of unity gamma: phi(x, y) = (gamma x, y) has order 3
    with paused(fp.counter):
        gamma = fp.elem(1)
        g = 2
        while gamma.value == 1:
            gamma = fp.elem(pow(g, (p - 1) // 3, p))
            g += 1
        while True:
            Q = curve.random_point(rng)
            P = curve.scalar_mul_reference(h, Q)
            if not P.is_infinity:
                break
        lam = eigenvalue_solve((1, 1), n, P, lambda Q: Point(gamma * Q.x, Q.y), curve)
        basis = glv2_reduce(n, lam)

    def run(k: int, cores: int) -> dict:
        parts = babai_decompose(k, basis, polish=True).parts
        rows = [_signed_wnaf(int(x), 5) for x in parts]
        columns = -(-n.bit_length() // 2) + 1
        counter = fp.counter
        stats = MsmStats(mode="glv2-base", cores=cores)
        snap = counter.snapshot()
        table = build_table(curve, P, 5)
        tables = [table, map_table(table, lambda Q: Point(gamma * Q.x, Q.y))]
        precomp = counter.since(snap)
        core_costs = []
        if cores == 1:
            snap = counter.snapshot()
            acc = _interleave(curve, rows, tables, stats, columns=columns)
            core_costs.append(counter.since(snap))
        else:
            partials = []
            for row, tab in zip(rows, tables):
                snap = counter.snapshot()
                partials.append(_interleave(curve, [row], [tab], stats, columns=columns))
                core_costs.append(counter.since(snap))
            snap = counter.snapshot()
            acc = curve.add_full(partials[0], partials[1])
            combine = counter.since(snap)
        snap = counter.snapshot()
        R = curve.to_affine(acc)
        affine = counter.since(snap)
        assert curve.eq(R, curve.scalar_mul_reference(k, P))
        keys = ("M", "S", "A", "I")
        worst = max(core_costs, key=lambda c: c["M"])
        crit = {key: precomp[key] + worst[key] + affine[key] for key in keys}
        if cores > 1:
            for key in keys:
                crit[key] += combine[key]
        total = dict.fromkeys(keys, 0)
        for part in (precomp, affine, *core_costs):
            for key in keys:
                total[key] += part[key]
        if cores > 1:
            for key in keys:
                total[key] += combine[key]
        return {"total": total, "critical": crit}

    one = run(rng.randrange(1, n), 1)
    two = run(rng.randrange(1, n), 2)
    return {
        "p": hex(p),
        "n_bits": n.bit_length(),
        "one_core_m": round(weights.cost_base(one["total"]), 1),
        "two_core_m": round(weights.cost_base(two["critical"]), 1),
    }


def cmd_cost_report(args) -> int:
    inst = load_instance(args.curve)
    weights = _weights(args)
    seed = _seed(args)
    rng = random.Random(seed)
    costs, dbls, madds = {}, {}, {}
    for mode in ("non-glv", "glv2", "glv4"):
        acc, d, md = 0.0, 0, 0.0
        for _ in range(args.samples):
            k = rng.randrange(1, inst.n)
            _, stats = glv_multiply(k, inst, mode=mode)
            acc += weights.cost(stats.total)
            d = stats.dbl
            md += stats.madd
        costs[mode] = acc / args.samples
        dbls[mode] = d
        madds[mode] = md / args.samples
    k = rng.randrange(1, inst.n)
    _, stats4 = glv_multiply(k, inst, mode="glv4", cores=4)
    four_core = weights.cost(stats4.critical)
    record = {
        "seed": seed,
        "samples": args.samples,
        "weighted_cost_m": {k: round(v, 1) for k, v in costs.items()},
        "dbl": dbls,
        "madd_mean": {k: round(v, 2) for k, v in madds.items()},
        "four_core_glv4_m": round(four_core, 1),
        "ratio_glv4_nonglv": round(costs["glv4"] / costs["non-glv"], 4),
        "ordering_ok": costs["non-glv"] > costs["glv2"] > costs["glv4"],
    }
    if args.with_comparison:
        try:
            cmp_rec = _comparison_glv2(weights, rng)
            record["base_field_glv2"] = cmp_rec
            record["ratio_glv4_vs_base_glv2"] = round(
                costs["glv4"] / cmp_rec["one_core_m"], 4
            )
            record["ratio_4core_vs_base_2core"] = round(
                four_core / cmp_rec["two_core_m"], 4
            )
        except MissingComparisonCurve as exc:
            record["base_field_glv2"] = None
            record["comparison_note"] = f"partial report: {exc}"
    _emit(record, args.pretty)
    return 0 if record["ordering_ok"] else 1


def cmd_constants(args) -> int:
    consts = bound_constants(args.r, args.s)
    fmt = lambda x: mpmath.nstr(x, 10)  # noqa: E731
    _emit(
        {
            "r": args.r,
            "s": args.s,
            "B": fmt(consts.B),
            "thm1_bound_coeff": fmt(consts.thm1_bound),
            "thm3_bound_coeff": fmt(consts.thm3_bound),
            "alg_bound_coeff": fmt(consts.alg_bound),
            "u": fmt(consts.u),
            "theta": fmt(consts.theta),
            "Theta": fmt(consts.Theta),
            "A": fmt(consts.A),
        },
        args.pretty,
    )
    return 0


# ----------------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="glv4", description="4-dimensional GLV scalar multiplication toolkit"
    )
    ap.add_argument("--pretty", action="store_true", help="human table to stderr")
    ap.add_argument("--seed", type=lambda v: int(v, 0), default=None)
    ap.add_argument("--weight-s", type=float, default=0.70)
    ap.add_argument("--weight-a", type=float, default=0.2)
    ap.add_argument("--weight-i", type=float, default=50.0)
    ap.add_argument("--weight-M", type=float, default=0.75)
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog").set_defaults(func=cmd_catalog)

    sp = sub.add_parser("instantiate")
    sp.add_argument("--family", required=True, choices=sorted(FAMILIES))
    sp.add_argument("--prime", required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_instantiate)

    sp = sub.add_parser("decompose")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--scalar", required=True)
    sp.add_argument("--method", choices=("cornacchia", "lll"), default="cornacchia")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("mul")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--scalar", required=True)
    sp.add_argument("--mode", choices=("non-glv", "glv2", "glv4"), default="glv4")
    sp.add_argument("--cores", type=int, choices=(1, 4), default=1)
    sp.add_argument("--report-ops", action="store_true")
    sp.add_argument("--check", action="store_true")
    sp.set_defaults(func=cmd_mul)

    sp = sub.add_parser("verify-bounds")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--method", choices=("cornacchia", "lll"), default="cornacchia")
    sp.set_defaults(func=cmd_verify_bounds)

    sp = sub.add_parser("cost-report")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--with-comparison", action="store_true")
    sp.set_defaults(func=cmd_cost_report)

    sp = sub.add_parser("constants")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.set_defaults(func=cmd_constants)
    return ap


def main(argv: list | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
