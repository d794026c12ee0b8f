"""Command-line front end.

Subcommands: mahler, walk, phi, cconst, report, fourier, mercat.  Output is
deterministic for a fixed configuration: floats are rounded to 15 significant
digits before emission and key order is fixed, so identical runs produce
byte-identical bytes.  Exit codes: 0 success, 2 validation/usage error,
3 computational error (precision or memory).

Every numeric output either is exact (integers, flags) or sits next to its
tolerance: root enclosures carry `radius`, the Mahler measure is an interval,
quadrature-backed values carry `quad_tol`, and entropy columns derived from
exact rationals are covered by the `tolerances` block of the header.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from . import analysis, numberfield, smoothedentropy, walk
from .errors import ComputeError, ValidationError

SCHEMA = "bce/1"
ENTROPY_REL_TOL = 1e-12


def _f(x: float) -> float:
    """Round to 15 significant digits for byte-stable emission."""
    if x != x or x in (math.inf, -math.inf):
        return x
    return float(f"{x:.15g}")


def _parse_coeffs(text: str) -> numberfield.IntPolynomial:
    try:
        coeffs = [int(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad coefficient list {text!r}: {exc}") from exc
    return numberfield.parse_polynomial(coeffs)


def _parse_nu(text: str | None) -> walk.StepDistribution:
    if text is None:
        return walk.fair_coin()
    try:
        atoms_text, probs_text = text.split(":")
        atoms = [Fraction(a) for a in atoms_text.split(",")]
        probs = [Fraction(p) for p in probs_text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad step law {text!r}: {exc}") from exc
    return walk.make_step_distribution(atoms, probs)


def _budget(args) -> int:
    env = os.environ.get("BCE_BUDGET")
    budget = args.budget if args.budget is not None else \
        (int(env) if env else walk.DEFAULT_BUDGET)
    if budget < 10_000:
        raise ValidationError("memory budget must be at least 10^4 residues")
    return budget


def _ctx_payload(ctx: numberfield.AlgebraicContext) -> dict:
    return {
        "coeffs": list(ctx.poly.coeffs),
        "degree": ctx.poly.degree,
        "mahler": {"lo": _f(ctx.mahler[0]), "hi": _f(ctx.mahler[1])},
        "k_on_circle": ctx.k_on_circle,
        "is_unit": ctx.is_unit,
        "is_pisot": ctx.is_pisot,
        "is_salem": ctx.is_salem,
        "reducibility_warning": ctx.reducibility_warning,
        "roots": [
            {
                "re": _f(iv.re),
                "im": _f(iv.im),
                "radius": _f(iv.radius),
                "class": tag.value,
                "is_real": real,
            }
            for iv, tag, real in zip(ctx.roots, ctx.classification, ctx.is_real)
        ],
    }


def _growth_rows(report: walk.GrowthReport) -> list[dict]:
    return [
        {
            "n": row.n,
            "supp_size": row.supp_size,
            "H_bits": _f(row.H_bits),
            "H_over_n": _f(row.H_over_n),
            "log2_supp_over_n": _f(row.log2_supp_over_n),
            "free_so_far": row.free_so_far,
            "below_mahler_pow": row.below_mahler_pow,
        }
        for row in report.rows
    ]


def _emit(args, payload: dict, text: str | None = None) -> None:
    if text is None:
        text = json.dumps(payload, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_mahler(args) -> dict:
    ctx = numberfield.algebraic_context(_parse_coeffs(args.poly),
                                        target_radius=args.root_radius)
    return {"schema": SCHEMA, "command": "mahler", **_ctx_payload(ctx)}


def _cmd_walk(args) -> dict:
    ctx = numberfield.algebraic_context(_parse_coeffs(args.poly))
    nu = _parse_nu(args.nu)
    report = walk.growth_sequences(ctx, nu, args.steps, budget=_budget(args))
    return {
        "schema": SCHEMA,
        "command": "walk",
        "poly": list(ctx.poly.coeffs),
        "nu": str(nu),
        "tolerances": {"H_bits_rel": ENTROPY_REL_TOL, "supp_size": "exact"},
        "rows": _growth_rows(report),
        "h_upper": _f(report.h_upper),
        "rho_upper": _f(report.rho_upper),
        "truncated": report.truncated,
    }


def _walk_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["n", "supp_size", "H_bits", "H_over_n",
                     "log2_supp_over_n", "free_so_far"])
    for row in payload["rows"]:
        writer.writerow([row["n"], row["supp_size"], row["H_bits"],
                         row["H_over_n"], row["log2_supp_over_n"],
                         row["free_so_far"]])
    return buf.getvalue()


def _cmd_phi(args) -> dict:
    nu = _parse_nu(args.nu)
    cert = smoothedentropy.phi(nu, args.a, quad_tol=args.tol)
    return {
        "schema": SCHEMA,
        "command": "phi",
        "a": _f(cert.a),
        "value": _f(cert.value),
        "witness_t": _f(cert.witness_t),
        "quad_tol": cert.quad_tol,
        "upper_hint": _f(cert.upper_hint),
    }


def _cmd_cconst(args) -> dict:
    nu = _parse_nu(args.nu)
    cert = smoothedentropy.c_constant(nu, cells=args.cells, quad_tol=args.tol)
    return {
        "schema": SCHEMA,
        "command": "cconst",
        "c_lower": _f(cert.c_lower),
        "quad_tol": cert.quad_tol,
        "cells": [
            {
                "a_lo": _f(a1),
                "a_hi": _f(a2),
                "bound": _f(b),
                "witness_t": _f(w),
            }
            for a1, a2, b, w in zip(cert.grid[:-1], cert.grid[1:],
                                    cert.cell_bounds, cert.witnesses)
        ],
    }


def _cmd_fourier(args) -> dict:
    ctx = numberfield.algebraic_context(_parse_coeffs(args.poly))
    cert = analysis.fourier_certificate(ctx, N=args.fourier_n)
    return {
        "schema": SCHEMA,
        "command": "fourier",
        "poly": list(ctx.poly.coeffs),
        "truncation": cert.truncation,
        "truncated_product": _f(cert.truncated_product),
        "tail_lower_bound": _f(cert.tail_lower_bound),
        "certified_c": _f(cert.certified_c),
        "factor_near_zero": cert.factor_near_zero,
        "singular": cert.certified_c > 0,
    }


def _cmd_mercat(args) -> dict:
    ctx = numberfield.algebraic_context(_parse_coeffs(args.poly))
    check = analysis.mercat_check(ctx, args.steps, nu=_parse_nu(args.nu),
                                  budget=_budget(args))
    return {
        "schema": SCHEMA,
        "command": "mercat",
        "poly": list(ctx.poly.coeffs),
        "n": check.n,
        "supp_size": check.supp_size,
        "mahler_pow": {"lo": _f(check.mahler_pow[0]),
                       "hi": _f(check.mahler_pow[1])},
        "verdict_supp_below_mahler_pow": check.verdict,
        "rho_upper_at_n": _f(check.rho_upper_at_n),
    }


def _cmd_report(args) -> dict:
    ctx = numberfield.algebraic_context(_parse_coeffs(args.poly))
    nu = _parse_nu(args.nu)
    budget = _budget(args)
    out: dict = {
        "schema": SCHEMA,
        "command": "report",
        "context": _ctx_payload(ctx),
        "tolerances": {"H_bits_rel": ENTROPY_REL_TOL,
                       "quad_tol": args.tol,
                       "supp_size": "exact"},
    }
    if args.c == "certified":
        c_cert = smoothedentropy.c_constant(nu, quad_tol=args.tol)
        c_used: float | smoothedentropy.CConstantCertificate = c_cert
        out["c_constant"] = {"c_lower": _f(c_cert.c_lower),
                             "provenance": "certified"}
    else:
        c_used = analysis.PAPER_C
        out["c_constant"] = {"c_lower": analysis.PAPER_C, "provenance": "paper"}

    growth = walk.growth_sequences(ctx, nu, args.steps, budget=budget)
    out["growth"] = {
        "rows": _growth_rows(growth),
        "h_upper": _f(growth.h_upper),
        "rho_upper": _f(growth.rho_upper),
        "truncated": growth.truncated,
    }

    for key, thunk in (
        ("dimension", lambda: _dimension_payload(ctx, nu, args.steps, c_used, budget)),
        ("full_dimension_test", lambda: analysis.full_dimension_test(ctx)),
        ("strictness_applicable", lambda: analysis.strictness_applicable(ctx)),
        ("fourier", lambda: _fourier_payload(ctx, args.fourier_n)),
        ("mercat", lambda: _mercat_payload(ctx, nu, args.steps, budget)),
    ):
        try:
            out[key] = thunk()
        except (ValidationError, ComputeError) as exc:
            out[key] = {"error": type(exc).__name__, "message": str(exc)}
    return out


def _dimension_payload(ctx, nu, steps, c_used, budget) -> dict:
    bracket = analysis.dimension_bracket(ctx, nu, steps, c_used, budget=budget)
    return {
        "lambda": _f(bracket.lambda_value),
        "log2_inv_lambda": _f(bracket.log_inv_lambda),
        "h_lower": _f(bracket.h_lower),
        "h_upper": _f(bracket.h_upper),
        "dim_lower": _f(bracket.dim_lower),
        "dim_upper": _f(bracket.dim_upper),
        "c_used": _f(bracket.c_used),
        "c_provenance": bracket.c_provenance,
        "n_max": bracket.n_max,
    }


def _fourier_payload(ctx, n) -> dict:
    cert = analysis.fourier_certificate(ctx, N=n)
    return {
        "truncation": cert.truncation,
        "certified_c": _f(cert.certified_c),
        "factor_near_zero": cert.factor_near_zero,
        "singular": cert.certified_c > 0,
    }


def _mercat_payload(ctx, nu, steps, budget) -> dict:
    check = analysis.mercat_check(ctx, steps, nu=nu, budget=budget)
    return {
        "n": check.n,
        "supp_size": check.supp_size,
        "mahler_pow_lo": _f(check.mahler_pow[0]),
        "verdict": check.verdict,
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bce",
        description="Certified Mahler measure, random-walk entropy and "
                    "smoothed-entropy bounds for Bernoulli convolutions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, poly=True, steps=None):
        if poly:
            p.add_argument("--poly", required=True,
                           help="comma-separated ascending integer coefficients")
        if steps is not None:
            p.add_argument("--steps", type=int, default=steps)
        p.add_argument("--nu", default=None,
                       help="step law as 'a1,a2,...:p1,p2,...' with rational entries")
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--tol", type=float, default=smoothedentropy.DEFAULT_QUAD_TOL)
        p.add_argument("--root-radius", type=float,
                       default=numberfield.DEFAULT_TARGET_RADIUS)
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--output", default=None)

    common(sub.add_parser("mahler", help="roots, classification, Mahler interval"))
    common(sub.add_parser("walk", help="exact support/entropy table"), steps=8)
    p_phi = sub.add_parser("phi", help="certified lower bound for the gap functional")
    p_phi.add_argument("--a", type=float, required=True)
    common(p_phi, poly=False)
    p_cc = sub.add_parser("cconst", help="certified constant over [sqrt(2), 2]")
    p_cc.add_argument("--cells", type=int, default=64)
    common(p_cc, poly=False)
    p_f = sub.add_parser("fourier", help="singularity certificate")
    p_f.add_argument("--fourier-N", dest="fourier_n", type=int, default=200)
    common(p_f)
    common(sub.add_parser("mercat", help="support vs Mahler-power check"), steps=8)
    p_r = sub.add_parser("report", help="combined certified report")
    p_r.add_argument("--c", choices=["paper", "certified"], default="paper")
    p_r.add_argument("--fourier-N", dest="fourier_n", type=int, default=200)
    common(p_r, steps=12)
    return parser


_HANDLERS = {
    "mahler": _cmd_mahler,
    "walk": _cmd_walk,
    "phi": _cmd_phi,
    "cconst": _cmd_cconst,
    "fourier": _cmd_fourier,
    "mercat": _cmd_mercat,
    "report": _cmd_report,
}


def _join_negative_values(argv):
    """Merge '--poly -1,1,1' into '--poly=-1,1,1' so argparse does not read
    leading-minus coefficient lists as option names."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--poly", "--nu") and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(list(argv)))
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        payload = _HANDLERS[args.command](args)
        if getattr(args, "format", "json") == "csv":
            if args.command != "walk":
                raise ValidationError("csv output is defined for 'walk' only")
            _emit(args, payload, text=_walk_csv(payload))
        else:
            _emit(args, payload)
        return 0
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ComputeError as exc:
        sys.stderr.write(f"computational error: {exc}\n")
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
