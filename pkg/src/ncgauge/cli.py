"""Command-line entry point.

Subcommands
    check      axiom suite, A_J properties, gauge Lie algebra
    localize   fiber decomposition, norm-sup samples, bundle bookkeeping
    fluctuate  inner fluctuations for a perturbation spec
    toric-scan norm grid over a sphere base with stratum labels

Exit codes: 0 all checks passed, 1 some check failed, 2 bad input.
JSON reports follow schema/report.schema.json; csv output renders the
check records (or, for toric-scan, the norm profile rows).
"""

from __future__ import annotations

import argparse
import sys

from .gauge import (
    MembershipViolated,
    Perturbation,
    from_unitary,
    doubled_fluctuation,
    fluctuate,
    gauge_field,
    gauge_lie_algebra,
    gauge_matrix,
    gauge_transform_field,
    random_perturbation,
)
from .linalg import TOL_DERIVED, adjoint, op_norm
from .localize import (
    fiber_gauge_action,
    group_bundle_dims,
    localize,
    norm_is_sup,
    omega_bundle,
)
from .models import BadModelSpec, _parse_kv, load_model
from .parsing import ParseError, parse_sphere
from .reporting import SCOPE_CONTINUITY, SCOPE_EXACT, CheckRecord, Report, rows_to_csv
from .spectral import OneForm, RealSpectralTriple, check_axioms, verify_aj_properties
from .staralg import random_unitary
from .torus import BadParameters, ModeMismatch, NotOnTorus, rational_mode
from .toric import norm_profile, stratum_scan

_PROFILE_COLUMNS = {
    "s3": ["chi", "r", "s", "x", "norm", "stratum", "fiber_dim"],
    "s4": ["chi", "psi", "r", "s", "x", "norm", "stratum", "fiber_dim"],
}

_RECORD_COLUMNS = ["name", "residual", "tolerance", "passed", "scope", "statement"]


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ncgauge",
                                  description="verification reports for finite "
                                              "gauge theories from spectral data")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, default_format="json"):
        p.add_argument("--out", help="write the main output to this path")
        p.add_argument("--seed", type=int, default=0, help="seed for all sampling")
        p.add_argument("--tol", type=float, default=None,
                       help="override every check tolerance with one value")
        p.add_argument("--format", choices=("json", "csv"), default=default_format)

    p = sub.add_parser("check", help="axioms, A_J, gauge Lie algebra")
    p.add_argument("model", help="preset like hs:N=2 or ym:k=2,N=2, or a config path")
    common(p)

    p = sub.add_parser("localize", help="fiber decomposition and bundle checks")
    p.add_argument("model")
    common(p)

    p = sub.add_parser("fluctuate", help="inner fluctuation checks")
    p.add_argument("model")
    p.add_argument("perturbation", nargs="?", default="pure",
                   help="zero | pure[:seed=N] | random[:terms=N,seed=N]")
    common(p)

    p = sub.add_parser("toric-scan", help="norm profile over a sphere base")
    p.add_argument("sphere", choices=("s3", "s4"))
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("h", type=float)
    p.add_argument("--poly", default="a + b",
                   help="sphere polynomial in a, ad, b, bd (s4 also x)")
    common(p, default_format="csv")
    return top


def _require_triple(model, spec: str) -> RealSpectralTriple:
    if isinstance(model, RealSpectralTriple):
        return model
    raise BadModelSpec(f"{spec!r} has no Dirac data; this command needs a triple")


def _aggregate(rep: Report, sample_reports: list[Report], names: list[str]) -> None:
    """Fold repeated per-sample records into one worst-case record each."""
    for name in names:
        recs = [s.record(name) for s in sample_reports]
        rep.add(CheckRecord(name, recs[0].statement,
                            max(r.residual for r in recs), recs[0].tolerance,
                            all(r.passed for r in recs), recs[0].scope))


def cmd_check(args) -> tuple[Report, None]:
    model = load_model(args.model, default_seed=args.seed)
    rep = Report(f"check[{args.model}]",
                 context={"model": args.model, "seed": args.seed,
                          "tol_override": args.tol})
    if isinstance(model, tuple):
        algebra, sub = model
        rep.extend(sub)
        rep.context["algebra_dim"] = algebra.dim
        rep.context.update(sub.context)
        return rep, None
    triple = model
    rep.extend(check_axioms(triple, tol=args.tol))
    rep.extend(verify_aj_properties(triple, tol=args.tol or TOL_DERIVED))
    g = gauge_lie_algebra(triple, tol=args.tol or TOL_DERIVED)
    rep.extend(g.report)
    rep.context["gauge"] = g.report.context
    return rep, None


def cmd_localize(args) -> tuple[Report, None]:
    triple = _require_triple(load_model(args.model, default_seed=args.seed), args.model)
    tol = args.tol or TOL_DERIVED
    dec = localize(triple, seed=args.seed, tol=tol)
    rep = Report(f"localize[{args.model}]",
                 context={"model": args.model, "seed": args.seed,
                          "tol_override": args.tol,
                          "localization": dec.report.context})
    rep.extend(dec.report)

    alg = triple.algebra
    samples = [norm_is_sup(dec, alg.random_element(seed=args.seed + 101 + i), tol=tol)
               for i in range(5)]
    _aggregate(rep, samples, ["norm-sup-identity", "cross-representation-norm"])

    pairs = [fiber_gauge_action(dec,
                                random_unitary(alg, seed=args.seed + 211 + i),
                                alg.random_element(seed=args.seed + 307 + i), tol=tol)
             for i in range(5)]
    _aggregate(rep, pairs, ["fiberwise-conjugation"])

    ob = omega_bundle(dec, tol=tol, seed=args.seed)
    rep.extend(ob)
    rep.context["omega_bundle"] = ob.context
    rows, gb = group_bundle_dims(dec)
    rep.extend(gb)
    rep.context["group_bundle"] = gb.context
    return rep, None


def _pure_gauge_report(rep: Report, triple: RealSpectralTriple, seed: int, tol: float) -> None:
    u = random_unitary(triple.algebra, seed=seed)
    pert = from_unitary(triple, u)
    omega = gauge_field(pert, tol=tol)
    rep.add(CheckRecord.from_residual(
        "field-self-adjoint", "the pure gauge field u[D, u*] is self-adjoint",
        omega.self_adjoint_residual(), tol, SCOPE_EXACT))
    d_omega = fluctuate(triple, omega)
    big_u = gauge_matrix(triple, u)
    rep.add(CheckRecord.from_residual(
        "pure-gauge-identity", "fluctuating by u[D, u*] conjugates D by the gauge "
        "unitary of u",
        op_norm(d_omega - big_u @ triple.dirac @ adjoint(big_u)), tol, SCOPE_EXACT))
    rep.add(CheckRecord.from_residual(
        "doubled-form", "the doubled two-sided action reproduces the fluctuation",
        op_norm(doubled_fluctuation(triple, pert) - d_omega), tol, SCOPE_EXACT))


def _random_pert_report(rep: Report, triple: RealSpectralTriple, terms: int,
                        seed: int, tol: float) -> None:
    pert = random_perturbation(triple, n_terms=terms, seed=seed)
    rep.add(CheckRecord.from_residual(
        "normalization", "the perturbation terms sum to the unit",
        pert.normalization_residual(), tol, SCOPE_EXACT))
    rep.add(CheckRecord.from_residual(
        "flip-self-adjoint", "the left-right operator of the perturbation is "
        "flip-invariant",
        pert.flip_residual(), tol, SCOPE_EXACT))
    omega = gauge_field(pert, tol=tol)
    rep.add(CheckRecord.from_residual(
        "field-self-adjoint", "the associated gauge field is self-adjoint",
        omega.self_adjoint_residual(), tol, SCOPE_EXACT))
    rep.add(CheckRecord.from_residual(
        "doubled-form", "the doubled two-sided action reproduces the fluctuation",
        op_norm(doubled_fluctuation(triple, pert) - fluctuate(triple, omega)),
        tol, SCOPE_EXACT))
    u = random_unitary(triple.algebra, seed=seed + 1)
    try:
        gauge_transform_field(triple, OneForm.zero(triple), omega, u,
                              tol=tol, check=True)
        rep.add(CheckRecord("gauge-covariance", "transforming background and field "
                            "by u conjugates the fluctuation", 0.0, tol, True,
                            SCOPE_EXACT))
    except MembershipViolated as exc:
        rep.add(CheckRecord("gauge-covariance", str(exc), float("inf"), tol, False,
                            SCOPE_EXACT))


def cmd_fluctuate(args) -> tuple[Report, None]:
    triple = _require_triple(load_model(args.model, default_seed=args.seed), args.model)
    tol = args.tol or TOL_DERIVED
    head, _, tail = args.perturbation.partition(":")
    head = head.strip().lower()
    params = _parse_kv(tail)
    rep = Report(f"fluctuate[{args.model};{args.perturbation}]",
                 context={"model": args.model, "perturbation": args.perturbation,
                          "seed": args.seed, "tol_override": args.tol})
    if head == "zero":
        d_omega = fluctuate(triple, OneForm.zero(triple))
        rep.add(CheckRecord.from_residual(
            "zero-field", "the zero field leaves D unchanged",
            op_norm(d_omega - triple.dirac), tol, SCOPE_EXACT))
    elif head == "pure":
        _pure_gauge_report(rep, triple, int(params.pop("seed", args.seed)), tol)
    elif head == "random":
        terms = int(params.pop("terms", 2))
        _random_pert_report(rep, triple, terms, int(params.pop("seed", args.seed)), tol)
    else:
        raise BadModelSpec(f"unknown perturbation spec {head!r} "
                           "(known: zero, pure, random)")
    if params:
        raise BadModelSpec(f"unknown perturbation parameters: {', '.join(sorted(params))}")
    return rep, None


def cmd_toric_scan(args) -> tuple[Report, list[dict]]:
    mode = rational_mode(args.p, args.q)
    poly = parse_sphere(args.poly, mode)
    if args.sphere == "s3" and poly.uses_x:
        raise BadModelSpec("the x letter only lives on the 4-sphere")
    rows, stats = norm_profile(poly, args.h, args.p, args.q, which=args.sphere)
    rep = Report(f"toric-scan[{args.sphere},p={args.p},q={args.q},h={args.h}]",
                 context={"poly": args.poly, "stats": stats,
                          "tol_override": args.tol})
    scan = stratum_scan(args.p, args.q, which=args.sphere)
    rep.extend(scan)
    rep.context["strata"] = scan.context

    flat = 1e-12  # a constant profile only jumps by float noise
    if stats["max_jump"] <= flat and stats["max_jump_half_step"] <= flat:
        ok, resid = True, 0.0
    else:
        ratio = stats["jump_ratio"]
        ok = 0.3 <= ratio <= 0.7
        resid = abs(ratio - 0.5)
    rep.add(CheckRecord(
        "profile-jump-halving", "halving the grid step roughly halves the largest "
        "adjacent norm jump", resid, 0.2, ok, SCOPE_CONTINUITY))
    return rep, rows


def _render(args, rep: Report, rows) -> str:
    if args.format == "json":
        if rows is not None:
            rep.context["rows"] = rows
        return rep.to_json() + "\n"
    if rows is not None:
        return rows_to_csv(rows, _PROFILE_COLUMNS[args.sphere])
    return rows_to_csv([r.to_dict() for r in rep.records], _RECORD_COLUMNS)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    handlers = {"check": cmd_check, "localize": cmd_localize,
                "fluctuate": cmd_fluctuate, "toric-scan": cmd_toric_scan}
    try:
        rep, rows = handlers[args.command](args)
    except (BadModelSpec, ParseError, BadParameters, ModeMismatch, NotOnTorus,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = _render(args, rep, rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(str(rep), file=sys.stderr)
    else:
        sys.stdout.write(text)
        if args.format == "csv":
            print(str(rep), file=sys.stderr)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
