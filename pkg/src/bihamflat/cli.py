"""Command-line front end.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 input error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence, Tuple

from . import models, report
from .casimir import casimir_certificate
from .expr import parse_rational_literal
from .modelfile import ModelFile, ModelFileError, model_from_tensors, parse_model
from .pencil_point import (
    ChainConstructionError,
    ConstantSkewPair,
    NotGenericError,
    genericity_certificate,
    jk_canonical_basis,
)
from .poisson import is_compatible, is_poisson
from .tensor import BivectorPencil, SkewBivectorField, divergence
from .unimod import default_point, flatness_verdict

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad command-line input; reported on stderr with exit code 2."""


def parse_point(text: Optional[str], dim: int):
    if text is None:
        return default_point(dim)
    parts = [p for p in text.split(",")]
    try:
        point = tuple(parse_rational_literal(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--point: {exc}") from None
    if len(point) != dim:
        raise InputError(f"--point has {len(point)} coordinates, model has dimension {dim}")
    return point


def load_model(path: str) -> ModelFile:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_model(text)
    except ModelFileError as exc:
        raise InputError(f"{path}: {exc}") from None


def _model_info(model: ModelFile) -> dict:
    return {"name": model.name, "dim": model.dim, "coords": list(model.coords)}


def _tensors(model: ModelFile) -> Tuple[SkewBivectorField, SkewBivectorField]:
    return model.tensors()


# -- commands -----------------------------------------------------------------

def cmd_check(model: ModelFile, args) -> report.ReportDocument:
    P, Q = _tensors(model)
    chart = model.chart
    pP, pQ = is_poisson(P), is_poisson(Q)
    comp = is_compatible(P, Q)
    ok = bool(pP and pQ and comp)
    result = {
        "passed": ok,
        "poisson_P": report.bracket_check(chart, pP),
        "poisson_Q": report.bracket_check(chart, pQ),
        "compatibility": report.bracket_check(chart, comp),
    }
    return report.ReportDocument("check", result, _model_info(model), EXIT_OK if ok else EXIT_NEGATIVE)


def cmd_flatness(model: ModelFile, args) -> report.ReportDocument:
    P, Q = _tensors(model)
    point = parse_point(args.point, model.dim)
    perturb = None
    if getattr(args, "debug_perturb_rhs", None) is not None:
        rows = 2 * model.dim
        if not 1 <= args.debug_perturb_rhs <= rows:
            raise InputError(f"--debug-perturb-rhs must be in 1..{rows}")
        perturb = args.debug_perturb_rhs - 1
    rep = flatness_verdict(P, Q, point, seed=args.seed, perturb_rhs=perturb)
    code = EXIT_OK if rep.flat else EXIT_NEGATIVE
    return report.ReportDocument("flatness", report.flatness(rep), _model_info(model), code)


def cmd_casimir(model: ModelFile, args) -> report.ReportDocument:
    P, Q = _tensors(model)
    point = parse_point(args.point, model.dim)
    rep = flatness_verdict(P, Q, point, seed=args.seed)
    volume, unit = rep.volume, False
    source = "reconstructed"
    if volume is None:
        # no volume from the criterion; the coordinate one still works when both are divergence-free
        if divergence(P).is_zero() and divergence(Q).is_zero():
            unit, source = True, "coordinate"
        else:
            result = {"valid": False, "flatness_verdict": rep.verdict,
                      "reason": "no invariant volume form available"}
            return report.ReportDocument("casimir", result, _model_info(model), EXIT_NEGATIVE)
    cert = casimir_certificate(P, Q, volume, point, seed=args.seed, unit_density=unit)
    result = report.casimir(cert)
    result["flatness_verdict"] = rep.verdict
    result["volume_source"] = source
    return report.ReportDocument("casimir", result, _model_info(model), EXIT_OK if cert.valid else EXIT_NEGATIVE)


def cmd_generic(model: ModelFile, args) -> report.ReportDocument:
    P, Q = _tensors(model)
    point = parse_point(args.point, model.dim)
    if model.dim % 2 == 0:
        raise InputError("genericity certificates need an odd-dimensional model")
    cert = genericity_certificate(BivectorPencil(P, Q), point)
    return report.ReportDocument("generic", report.genericity(cert), _model_info(model),
                                 EXIT_OK if cert.generic else EXIT_NEGATIVE)


def cmd_jk(model: ModelFile, args) -> report.ReportDocument:
    P, Q = _tensors(model)
    point = parse_point(args.point, model.dim)
    if model.dim % 2 == 0:
        raise InputError("the canonical basis needs an odd-dimensional model")
    pair = ConstantSkewPair.from_pencil(BivectorPencil(P, Q), point)
    try:
        change = jk_canonical_basis(pair, seed=args.seed)
    except (NotGenericError, ChainConstructionError) as exc:
        result = {"point": [report.q(x) for x in point], "error": str(exc)}
        return report.ReportDocument("jk", result, _model_info(model), EXIT_NEGATIVE)
    result = report.jk(change)
    result["point"] = [report.q(x) for x in point]
    return report.ReportDocument("jk", result, _model_info(model), EXIT_OK)


def cmd_model(kind: str, n: int) -> ModelFile:
    try:
        if kind == "volterra":
            P, Q = models.volterra(n)
            name = f"volterra({n})"
        else:
            P, Q = models.canonical_pair(n)
            name = f"canonical({n})"
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return model_from_tensors(P, Q, name=name)


COMMANDS = {
    "check": cmd_check,
    "flatness": cmd_flatness,
    "casimir": cmd_casimir,
    "generic": cmd_generic,
    "jk": cmd_jk,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--point", help="evaluation point r1,r2,... (default: 2,3,5,...)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("human", "machine"), default="human")

    parser = argparse.ArgumentParser(prog="bihamflat", description="Flatness of odd-dimensional Poisson pairs.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "check": "Poisson and compatibility checks",
        "flatness": "run the flatness criterion",
        "casimir": "λ-Casimir certificate",
        "generic": "genericity certificate at a point",
        "jk": "canonical basis of the pencil frozen at a point",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("model", help="model file, or - for stdin")
        if name == "flatness":
            p.add_argument("--debug-perturb-rhs", type=int, metavar="I",
                           help="add 1 to the right-hand side of system row I (1-based)")
    p = sub.add_parser("model", help="print a built-in model file")
    p.add_argument("kind", choices=("volterra", "canonical"))
    p.add_argument("--n", type=int, required=True)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "model":
            sys.stdout.write(cmd_model(args.kind, args.n).format())
            return EXIT_OK
        model = load_model(args.model)
        doc = COMMANDS[args.command](model, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ZeroDivisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "machine":
        print(doc.to_json())
    else:
        print(report.render_human(doc))
    return doc.exit_code


if __name__ == "__main__":
    sys.exit(main())
