"""Command-line interface.

Subcommands wrap every library operation: ``quantize``, ``symbol-map``,
``affine-quantize``, ``lie`` (density|symbol|operator), ``div``
(vfield|symbol), ``gamma``, ``casimir``, ``alpha``, ``coeff``, ``critical``,
``realize``, and ``check`` (equivariance|casimir|homomorphism|relcas).

Global flags: ``--p --q --lambda --delta --t --variant {sl,psl} --seed
--format {text,json} --out FILE``.  Expressions use the surface grammar of
the expr module.  Scalar results encode as ``{"kind": "rational", "value"}``
and lists as ``{"kind": "rationals", "values"}``; domain values use the
``{signature, weights, kind, terms}`` schema; check reports use their own
schema with a ``failures`` list.

Exit codes: 0 success/pass, 1 usage or expression error, 2 violated
mathematical precondition (e.g. a critical weight), 3 check failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import CriticalValueError, DomainError, ExprError
from .expr import format_value, parse, value_to_json
from .geometry import lie_density, lie_operator, lie_symbol, symbol_divergence
from .geometry import affine_quantize as _affine_quantize
from .projective import (
    affine_defect,
    basis_e,
    basis_eps,
    casimir_apply,
    casimir_eigenvalue,
    critical_values,
    euler_element,
    g0_element,
    psl_casimir_eigenvalue,
    psl_quantization_coefficient,
    quantization_coefficient,
    realize,
)
from .quantizer import (
    VARIANT_PSL,
    VARIANT_SL,
    QuantizationConfig,
    quantize,
    symbol_map,
)
from .supercore import Signature
from .verifier import (
    DEFAULT_SAMPLES,
    check_casimir,
    check_equivariance,
    check_homomorphism,
    check_relcas,
)

_VARIANTS = {"sl": VARIANT_SL, "psl": VARIANT_PSL}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="number of even coordinates")
    common.add_argument("--q", type=int, help="number of odd coordinates")
    common.add_argument(
        "--lambda", dest="lam", type=_fraction, default=Fraction(0),
        help="source density weight (exact rational)",
    )
    common.add_argument(
        "--delta", type=_fraction, default=Fraction(0),
        help="weight shift carried by symbols (exact rational)",
    )
    common.add_argument(
        "--t", type=_fraction, default=Fraction(0),
        help="family parameter for the q = p+1 variant",
    )
    common.add_argument(
        "--variant", choices=sorted(_VARIANTS),
        help="algebra variant (default inferred from the signature)",
    )
    common.add_argument("--seed", type=int, default=0, help="sample seed")
    common.add_argument(
        "--format", choices=("text", "json"), default="text", dest="fmt",
        help="output format",
    )
    common.add_argument("--out", help="write output to FILE instead of stdout")

    parser = _Parser(prog="superquant", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quantize", parents=[common],
                       help="equivariant quantization of a symbol")
    p.add_argument("--symbol", required=True, help="symbol expression")

    p = sub.add_parser("symbol-map", parents=[common],
                       help="total symbol of an operator (inverse quantization)")
    p.add_argument("--operator", required=True, help="operator expression")

    p = sub.add_parser("affine-quantize", parents=[common],
                       help="coefficient-wise quantization of a symbol")
    p.add_argument("--symbol", required=True, help="symbol expression")

    p = sub.add_parser("lie", parents=[common],
                       help="Lie actions on densities, symbols, and operators")
    p.add_argument("mode", choices=("density", "symbol", "operator"))
    p.add_argument("--field", required=True, help="vector field expression")
    p.add_argument("--function", help="density expression (mode density)")
    p.add_argument("--symbol", help="symbol expression (mode symbol)")
    p.add_argument("--operator", help="operator expression (mode operator)")

    p = sub.add_parser("div", parents=[common],
                       help="divergence of a vector field or symbol")
    p.add_argument("mode", choices=("vfield", "symbol"))
    p.add_argument("--field", help="vector field expression (mode vfield)")
    p.add_argument("--symbol", help="symbol expression (mode symbol)")

    p = sub.add_parser("gamma", parents=[common],
                       help="obstruction of the coefficient-wise map under a "
                            "quadratic generator")
    p.add_argument("--index", type=int, required=True,
                   help="quadratic direction index (1-based)")
    p.add_argument("--symbol", required=True, help="symbol expression")

    p = sub.add_parser("casimir", parents=[common],
                       help="apply the Casimir operator to a symbol")
    p.add_argument("--symbol", required=True, help="symbol expression")
    p.add_argument("--rep", choices=("L", "affine"), default="L",
                   help="representation: symbol action or quantized action")

    p = sub.add_parser("alpha", parents=[common],
                       help="Casimir eigenvalue on a symbol degree")
    p.add_argument("--k", type=int, required=True, help="symbol degree")

    p = sub.add_parser("coeff", parents=[common],
                       help="quantization coefficient C(k, r)")
    p.add_argument("--k", type=int, required=True, help="symbol degree")
    p.add_argument("--r", type=int, required=True, help="divergence order")

    p = sub.add_parser("critical", parents=[common],
                       help="critical weight shifts up to a degree")
    p.add_argument("--kmax", type=int, required=True, help="largest degree")

    p = sub.add_parser("realize", parents=[common],
                       help="realize a graded basis element as a vector field")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--e", type=int, metavar="R",
                       help="constant direction index (1-based)")
    group.add_argument("--eps", type=int, metavar="R",
                       help="quadratic direction index (1-based)")
    group.add_argument("--g0", type=int, nargs=2, metavar=("I", "J"),
                       help="elementary linear part sending direction J to I")
    group.add_argument("--euler", action="store_true",
                       help="the grading (Euler) element")

    p = sub.add_parser("check", parents=[common],
                       help="run a certification suite")
    p.add_argument("mode",
                   choices=("equivariance", "casimir", "homomorphism", "relcas"))
    p.add_argument("--degree-max", type=int, default=2,
                   help="largest symbol degree (equivariance)")
    p.add_argument("--kmax", type=int, default=2,
                   help="largest symbol degree (casimir, relcas)")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                   help="samples per cell")

    return parser


def _signature(args) -> Signature:
    if args.p is None or args.q is None:
        raise _UsageError("--p and --q are required for this command")
    try:
        return Signature(args.p, args.q)
    except ValueError as exc:
        raise _UsageError(str(exc))


def _variant(args):
    return _VARIANTS[args.variant] if args.variant else None


def _algebra(args):
    return args.variant  # projective helpers accept sl/psl directly


def _config(args, sig) -> QuantizationConfig:
    return QuantizationConfig(sig, args.lam, args.delta, _variant(args), args.t)


def _require(args, name: str):
    value = getattr(args, name.replace("-", "_"), None)
    if value is None:
        raise _UsageError(f"--{name} is required for this mode")
    return value


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit_value(args, value) -> int:
    if args.fmt == "json":
        _emit(args, json.dumps(value_to_json(value), indent=2))
    else:
        _emit(args, format_value(value))
    return 0


def _emit_rational(args, value: Fraction) -> int:
    if args.fmt == "json":
        _emit(args, json.dumps({"kind": "rational", "value": str(value)}, indent=2))
    else:
        _emit(args, str(value))
    return 0


def _emit_report(args, report) -> int:
    if args.fmt == "json":
        _emit(args, json.dumps(report.to_json(), indent=2))
    else:
        _emit(args, report.summary_text())
    return 0 if report.passed else 3


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "quantize":
        sig = _signature(args)
        cfg = _config(args, sig)
        s = parse("symbol", args.symbol, sig, weight=args.delta)
        return _emit_value(args, quantize(s, cfg))
    if cmd == "symbol-map":
        sig = _signature(args)
        cfg = _config(args, sig)
        d = parse("operator", args.operator, sig, lam=cfg.lam, mu=cfg.mu)
        return _emit_value(args, symbol_map(d, cfg))
    if cmd == "affine-quantize":
        sig = _signature(args)
        s = parse("symbol", args.symbol, sig, weight=args.delta)
        return _emit_value(args, _affine_quantize(s, args.lam))
    if cmd == "lie":
        sig = _signature(args)
        x = parse("vfield", args.field, sig)
        if args.mode == "density":
            f = parse("poly", _require(args, "function"), sig)
            return _emit_value(args, lie_density(x, args.lam, f))
        if args.mode == "symbol":
            s = parse("symbol", _require(args, "symbol"), sig, weight=args.delta)
            if not hasattr(s, "degree"):
                raise _UsageError("lie symbol expects a single-degree symbol")
            return _emit_value(args, lie_symbol(x, s))
        d = parse("operator", _require(args, "operator"), sig,
                  lam=args.lam, mu=args.lam + args.delta)
        return _emit_value(args, lie_operator(x, d))
    if cmd == "div":
        sig = _signature(args)
        if args.mode == "vfield":
            x = parse("vfield", _require(args, "field"), sig)
            return _emit_value(args, x.divergence())
        s = parse("symbol", _require(args, "symbol"), sig, weight=args.delta)
        if not hasattr(s, "degree"):
            raise _UsageError("div symbol expects a single-degree symbol")
        return _emit_value(args, symbol_divergence(s))
    if cmd == "gamma":
        sig = _signature(args)
        if not 1 <= args.index <= sig.n:
            raise _UsageError(f"--index must be in 1..{sig.n}")
        h = basis_eps(sig)[args.index - 1]
        s = parse("symbol", args.symbol, sig, weight=args.delta)
        if not hasattr(s, "degree"):
            raise _UsageError("gamma expects a single-degree symbol")
        return _emit_value(args, affine_defect(h, s, args.lam))
    if cmd == "casimir":
        sig = _signature(args)
        s = parse("symbol", args.symbol, sig, weight=args.delta)
        if not hasattr(s, "degree"):
            raise _UsageError("casimir expects a single-degree symbol")
        return _emit_value(
            args, casimir_apply(s, args.lam, rep=args.rep, algebra=_algebra(args))
        )
    if cmd == "alpha":
        sig = _signature(args)
        if (_variant(args) or
                (VARIANT_PSL if sig.q == sig.p + 1 else VARIANT_SL)) == VARIANT_PSL:
            return _emit_rational(args, Fraction(psl_casimir_eigenvalue(args.k)))
        return _emit_rational(args, casimir_eigenvalue(args.k, args.delta, sig))
    if cmd == "coeff":
        sig = _signature(args)
        if (_variant(args) or
                (VARIANT_PSL if sig.q == sig.p + 1 else VARIANT_SL)) == VARIANT_PSL:
            return _emit_rational(args, psl_quantization_coefficient(args.k, args.r))
        return _emit_rational(
            args, quantization_coefficient(args.k, args.r, args.lam, args.delta, sig)
        )
    if cmd == "critical":
        sig = _signature(args)
        values = sorted(critical_values(sig, args.kmax))
        if args.fmt == "json":
            _emit(args, json.dumps(
                {"kind": "rationals", "values": [str(v) for v in values]}, indent=2))
        else:
            _emit(args, ", ".join(str(v) for v in values) if values else "(none)")
        return 0
    if cmd == "realize":
        sig = _signature(args)
        if args.e is not None:
            if not 1 <= args.e <= sig.n:
                raise _UsageError(f"--e must be in 1..{sig.n}")
            h = basis_e(sig)[args.e - 1]
        elif args.eps is not None:
            if not 1 <= args.eps <= sig.n:
                raise _UsageError(f"--eps must be in 1..{sig.n}")
            h = basis_eps(sig)[args.eps - 1]
        elif args.g0 is not None:
            i, j = args.g0
            if not (1 <= i <= sig.n and 1 <= j <= sig.n):
                raise _UsageError(f"--g0 indices must be in 1..{sig.n}")
            block = [[1 if (r, c) == (i - 1, j - 1) else 0
                      for c in range(sig.n)] for r in range(sig.n)]
            h = g0_element(sig, block)
        else:
            h = euler_element(sig)
        return _emit_value(args, realize(h))
    # check
    sig = _signature(args)
    if args.mode == "equivariance":
        cfg = _config(args, sig)
        report = check_equivariance(
            cfg, degree_max=args.degree_max, sample_count=args.samples,
            seed=args.seed,
        )
    elif args.mode == "casimir":
        report = check_casimir(
            sig, algebra=_algebra(args), lam=args.lam, delta=args.delta,
            k_max=args.kmax, sample_count=args.samples, seed=args.seed,
        )
    elif args.mode == "homomorphism":
        report = check_homomorphism(sig)
    else:
        report = check_relcas(
            sig, lam=args.lam, delta=args.delta, k_max=args.kmax,
            sample_count=args.samples, seed=args.seed,
        )
    return _emit_report(args, report)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ExprError as exc:
        print(f"expression error: {exc}", file=sys.stderr)
        return 1
    except (CriticalValueError, DomainError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
