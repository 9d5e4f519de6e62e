"""Command-line front end.

Subcommands map one-to-one onto the library's report generators:

    summability              certify sum sigma_n/sigma_m per n
    p-summability            the dimension-weighted variant
    growth                   the three equivalent growth conditions
    ideal-check              randomized multiplier-inequality trials
    renorm                   renormalized-norm contract verification
    counterexample NAME      b1 b2 b4 b5 b7 cantor torus
    classify-standard-schwartz

Exit status: 0 when every asserted contract passed, 1 on a violation (the
failing witness goes to stderr), 2 on configuration or parse errors.
``--expect-fail`` flips the 0/1 meaning, for reproducing results whose
entire point is a violated inequality.  The environment variable
SCALEKIT_SEED, when set, overrides the seed.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import counterexamples as cx
from . import grammar, reports
from .blocks import (
    DimensionSequence,
    growth_condition_check,
    read_dimension_file,
    standard_schwartz_classify,
    two_sided_ideal_check,
)
from .grammar import ParseError
from .indexsets import IndexSet
from .logvalue import LogValue
from .renorm import (
    BlockSocleInstance,
    PairAlgebraInstance,
    PointwiseInstance,
    TrivialMulInstance,
    verify_renorm_contract,
)
from .scales import Scale, ScaleFamily
from .schwartz import (
    FinSuppVector,
    fourier_seminorm_demo,
    ideal_inequality_check,
    read_sparse_vector,
)
from .summability import p_summability_check, summability_check

__all__ = ["main", "run"]


@dataclass
class RunConfig:
    subcommand: str
    args: argparse.Namespace
    fmt: str
    seed: int
    expect_fail: bool

    def echo(self) -> dict:
        skip = {"format", "expect_fail", "func"}
        out = {"seed": self.seed}
        for key, value in vars(self.args).items():
            if key in skip or key == "subcommand" or value is None:
                continue
            out[key] = value if isinstance(value, (int, float, bool)) else str(value)
        return out


@dataclass
class Outcome:
    passed: bool
    report: dict
    rows: Optional[list] = None
    title: str = "report"
    witness: Optional[str] = None


def _parse_dims(args, default_expr: Optional[str] = None) -> DimensionSequence:
    if getattr(args, "dims_file", None):
        return read_dimension_file(args.dims_file)
    expr_text = getattr(args, "dims", None) or default_expr
    if expr_text is None:
        raise ParseError("give --dims or --dims-file")
    expr = grammar.parse(expr_text)
    K = getattr(args, "K", None) or 8
    domain = IndexSet.integers(K)
    try:
        values = [int(round(expr.eval(k).to_float())) for k in range(1, K + 1)]
        if all(
            abs(expr.eval(k).to_float() - v) < 1e-9 and 1 <= v
            for k, v in zip(range(1, K + 1), values)
        ) and max(values) <= 100_000:
            return DimensionSequence(domain, values=tuple(values), expr=expr)
    except (OverflowError, ArithmeticError):
        pass
    return DimensionSequence.from_expr(expr, K)


def _family_from_expr(text: str, K: int, count: int) -> ScaleFamily:
    expr = grammar.parse(text)
    return ScaleFamily.from_family_expr(expr, IndexSet.integers(K), count, text)


# ----------------------------------------------------------------------
# subcommand handlers
# ----------------------------------------------------------------------

def _cmd_summability(cfg: RunConfig) -> Outcome:
    a = cfg.args
    family = _family_from_expr(a.family, a.K, a.max_m + 1)
    ns = [int(x) for x in a.ns.split(",")] if a.ns else None
    rep = summability_check(family, max_m=a.max_m, K=a.K, ns=ns)
    rows = [r.to_dict() for r in rep.rows]
    bad = [r for r in rep.rows if r.verdict != "certified"]
    witness = (
        f"n={bad[0].n} verdict={bad[0].verdict} (no tail certificate)"
        if bad
        else None
    )
    return Outcome(rep.all_certified, rep.to_dict(), rows, "summability", witness)


def _cmd_p_summability(cfg: RunConfig) -> Outcome:
    a = cfg.args
    dims = _parse_dims(a)
    family = ScaleFamily.from_family_expr(
        grammar.parse(a.family), dims.domain, a.max_m + 1, a.family
    )
    rep = p_summability_check(family, dims, max_m=a.max_m, K=a.K)
    rows = [r.to_dict() for r in rep.rows]
    bad = [r for r in rep.rows if r.verdict != "certified"]
    witness = f"n={bad[0].n} verdict={bad[0].verdict}" if bad else None
    return Outcome(rep.all_certified, rep.to_dict(), rows, "p-summability", witness)


def _cmd_growth(cfg: RunConfig) -> Outcome:
    a = cfg.args
    dims = _parse_dims(a)
    rep = growth_condition_check(dims, K=a.K, d_max=a.d_max)
    if not rep.consistent:
        return Outcome(
            False,
            rep.to_dict(),
            None,
            "growth",
            "internal error: the three equivalent conditions disagree",
        )
    witness = None
    if not rep.satisfied:
        witness = (
            "growth condition refuted by trend; running max still rising "
            f"(tail increase {rep.cond_p.attempts[-1][2]:.3g} in log domain)"
        )
    rows = [
        {"condition": "p vs ell_min", **rep.cond_p.to_dict()},
        {"condition": "theta*p vs ell_min", **rep.cond_theta_p.to_dict()},
        {"condition": "ell_max vs ell_min", **rep.cond_max.to_dict()},
    ]
    for row in rows:
        row.pop("attempts", None)
    return Outcome(rep.satisfied, rep.to_dict(), rows, "growth", witness)


def _cmd_ideal_check(cfg: RunConfig) -> Outcome:
    a = cfg.args
    if a.kind == "pointwise":
        family = _family_from_expr(a.family, a.K, a.levels)
        rep = ideal_inequality_check(
            family, trials=a.trials, K=a.K, seed=cfg.seed
        )
    else:
        rng_dims = [2, 3, 4, 2, 5, 3, 4, 2][: max(2, min(8, a.K))]
        dims = DimensionSequence.from_ints(rng_dims)
        family = ScaleFamily.from_family_expr(
            grammar.parse(a.family), dims.domain, a.levels, a.family
        )
        rep = two_sided_ideal_check(family, dims, trials=a.trials, seed=cfg.seed)
    witness = None if rep.passed else f"worst log ratio {max(sum([rep.to_dict().get('worst_ratio_log', rep.to_dict().get('worst_left_log', []))], [])):.3g}"
    return Outcome(rep.passed, rep.to_dict(), None, "ideal-check", witness)


def _cmd_renorm(cfg: RunConfig) -> Outcome:
    a = cfg.args
    K = a.K
    if a.kind == "block":
        dims = DimensionSequence.from_ints([2, 3, 2, 4, 3, 2][: max(2, min(6, K))])
        ell = ScaleFamily.from_powers(
            Scale(dims.domain, grammar.parse("k"), "k"), a.levels
        )
        inst = BlockSocleInstance(ell, dims)
    elif a.kind == "paired":
        sigma = Scale(IndexSet.integers(K), grammar.parse(a.scale), a.scale)
        inst = PairAlgebraInstance(sigma, levels=a.levels)
    else:
        family = _family_from_expr(a.family, K, a.levels)
        inst = (
            TrivialMulInstance(family)
            if a.kind == "trivial"
            else PointwiseInstance(family)
        )
    rep = verify_renorm_contract(inst, trials=a.trials, seed=cfg.seed)
    worst = max(rep.worst.values()) if rep.worst else float("-inf")
    witness = None if rep.passed else f"worst log ratio {worst:.3g}"
    rows = [{"inequality": k, "worst_log_ratio": v} for k, v in sorted(rep.worst.items())]
    return Outcome(rep.passed, rep.to_dict(), rows, f"renorm ({inst.kind})", witness)


def _cmd_classify(cfg: RunConfig) -> Outcome:
    a = cfg.args
    dims = _parse_dims(a)
    rep = standard_schwartz_classify(dims, K=a.K, d_max=a.d_max)
    witness = None if rep.standard else "no standard-scale witness on this prefix"
    return Outcome(rep.standard, rep.to_dict(), None, "classify", witness)


def _cmd_counterexample(cfg: RunConfig) -> Outcome:
    a = cfg.args
    name = a.name
    if name == "b1":
        dims = _parse_dims(a, default_expr="exp(k^k)")
        rep = cx.socle_ideal_blowup(dims, n=a.n, m=a.m, K_max=a.K or 8)
        rows = rep.to_dict()["rows"]
        passed = not rep.blowup_reproduced
        witness = (
            f"multiplier ratio exceeds bound at K={rep.rows[-1][0]}: "
            f"log ratio {rep.rows[-1][3]:.6g} >= log bound {rep.rows[-1][4]:.6g}"
            if rep.blowup_reproduced
            else None
        )
        return Outcome(passed, rep.to_dict(), rows, "blow-up", witness)
    if name == "b2":
        sigma = Scale(IndexSet.integers(a.K or 1000), grammar.parse(a.scale), a.scale)
        rep = cx.pair_algebra_report(sigma)
        rows = rep.to_dict()["rows"][:16]
        witness = (
            f"failure ratio equals the scale itself and is unbounded "
            f"(last log ratio {rep.rows[-1][4]:.6g})"
            if rep.not_an_ideal
            else None
        )
        return Outcome(not rep.not_an_ideal, rep.to_dict(), rows, "pair algebra", witness)
    if name == "b4":
        rep = cx.power_series_embedding_report(
            X_size=a.X, trials=a.trials, seed=cfg.seed
        )
        witness = None if rep.passed else "homomorphism defect above tolerance"
        return Outcome(rep.passed, rep.to_dict(), None, "power-series embedding", witness)
    if name == "b5":
        K = a.K or 500
        domain = IndexSet.integers(K)
        family = ScaleFamily.from_family_expr(
            grammar.parse("pow(1+k, n)"), domain, max(a.d + 1, 2), "(1+k)^n"
        )
        chi = FinSuppVector({k: 1.0 / (1.0 + k) for k in domain.indices})
        f = (
            read_sparse_vector(a.vector_file)
            if a.vector_file
            else FinSuppVector({1: 1.0})
        )
        rep = cx.rapid_decay_escape(f, chi, family, d=a.d)
        witness = (
            f"weighted image is unbounded (trend tail {rep.trend_logs[-1]:.4g})"
            if rep.escapes
            else None
        )
        return Outcome(not rep.escapes, rep.to_dict(), None, "escape", witness)
    if name == "b7":
        rep = cx.enumeration_reordering(i_max=a.i_max, d_max=a.d_max)
        rows = [
            {"d": d, "verdict": v} for d, v in rep.power_refutations
        ]
        witness = (
            "gamma2 <= gamma1+1 yet no power of gamma2 dominates gamma1"
            if rep.reproduced
            else None
        )
        return Outcome(not rep.reproduced, rep.to_dict(), rows, "reordering", witness)
    if name == "cantor":
        rep = cx.cantor_scale_report(p_max=a.pmax)
        rows = rep.to_dict()["summability_rows"]
        witness = None if rep.standard else "dyadic enumeration checks failed"
        return Outcome(rep.standard, rep.to_dict(), rows, "dyadic scale", witness)
    if name == "torus":
        phi_hat = (
            read_sparse_vector(a.vector_file)
            if a.vector_file
            else FinSuppVector({1: 1.0, 2: 1.0})
        )
        rep = fourier_seminorm_demo(phi_hat, order=a.order, grid=a.grid)
        witness = None if rep.holds else "coefficient seminorm exceeded the sampled derivative sup"
        return Outcome(rep.holds, rep.to_dict(), None, "circle seminorms", witness)
    raise ParseError(f"unknown counterexample {name!r}")


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="scalekit",
        description="numerical verification toolkit for scales, summability, "
        "and matrix-block ideal norms",
    )
    ap.add_argument("--format", choices=("json", "csv", "md"), default="json")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument(
        "--expect-fail",
        action="store_true",
        help="flip the exit-code meaning (for reproducing negative results)",
    )
    sub = ap.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("summability")
    s.add_argument("--family", required=True, help="expression in k and n")
    s.add_argument("--max-m", dest="max_m", type=int, default=12)
    s.add_argument("--K", type=int, default=100_000)
    s.add_argument("--ns", help="comma-separated n values")
    s.set_defaults(func=_cmd_summability)

    s = sub.add_parser("p-summability")
    s.add_argument("--family", required=True)
    s.add_argument("--dims")
    s.add_argument("--dims-file", dest="dims_file")
    s.add_argument("--max-m", dest="max_m", type=int, default=12)
    s.add_argument("--K", type=int, default=10_000)
    s.set_defaults(func=_cmd_p_summability)

    s = sub.add_parser("growth")
    s.add_argument("--dims")
    s.add_argument("--dims-file", dest="dims_file")
    s.add_argument("--K", type=int, default=8)
    s.add_argument("--d-max", dest="d_max", type=int, default=8)
    s.set_defaults(func=_cmd_growth)

    s = sub.add_parser("ideal-check")
    s.add_argument("--kind", choices=("pointwise", "block"), default="pointwise")
    s.add_argument("--family", default="pow(k,n)")
    s.add_argument("--levels", type=int, default=3)
    s.add_argument("--K", type=int, default=50)
    s.add_argument("--trials", type=int, default=1000)
    s.set_defaults(func=_cmd_ideal_check)

    s = sub.add_parser("renorm")
    s.add_argument(
        "--kind",
        choices=("pointwise", "paired", "block", "trivial"),
        default="pointwise",
    )
    s.add_argument("--family", default="pow(k,n)")
    s.add_argument("--scale", default="k")
    s.add_argument("--levels", type=int, default=3)
    s.add_argument("--K", type=int, default=40)
    s.add_argument("--trials", type=int, default=500)
    s.set_defaults(func=_cmd_renorm)

    s = sub.add_parser("classify-standard-schwartz")
    s.add_argument("--dims")
    s.add_argument("--dims-file", dest="dims_file")
    s.add_argument("--K", type=int, default=100)
    s.add_argument("--d-max", dest="d_max", type=int, default=8)
    s.set_defaults(func=_cmd_classify)

    s = sub.add_parser("counterexample")
    s.add_argument("name", choices=("b1", "b2", "b4", "b5", "b7", "cantor", "torus"))
    s.add_argument("--dims")
    s.add_argument("--dims-file", dest="dims_file")
    s.add_argument("--scale", default="k")
    s.add_argument("--vector-file", dest="vector_file")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--K", type=int)
    s.add_argument("--X", type=int, default=200)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--i-max", dest="i_max", type=int, default=5)
    s.add_argument("--d-max", dest="d_max", type=int, default=8)
    s.add_argument("--pmax", type=int, default=10)
    s.add_argument("--order", type=int, default=2)
    s.add_argument("--grid", type=int, default=64)
    s.set_defaults(func=_cmd_counterexample)

    return ap


def run(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    seed = args.seed
    env_seed = os.environ.get("SCALEKIT_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            print(f"SCALEKIT_SEED={env_seed!r} is not an integer", file=sys.stderr)
            return 2
    cfg = RunConfig(args.subcommand, args, args.format, seed, args.expect_fail)
    try:
        outcome: Outcome = args.func(cfg)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    doc = reports.envelope(
        cfg.subcommand
        + (f" {args.name}" if cfg.subcommand == "counterexample" else ""),
        cfg.echo(),
        outcome.passed,
        outcome.report,
    )
    sys.stdout.write(reports.render(doc, cfg.fmt, outcome.rows, outcome.title))
    failed = not outcome.passed
    if failed and outcome.witness:
        print(f"contract violated: {outcome.witness}", file=sys.stderr)
    if cfg.expect_fail:
        return 0 if failed else 1
    return 1 if failed else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
