"""Command line: ``tropell trop | analyze | faithful``.

Data goes to stdout as JSON, diagnostics to stderr.  Exit codes: 0 ok,
2 bad input, 3 singular model, 4 certification failed, 5 reduction is not
multiplicative.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from tropell.errors import (
    DegenerateInput,
    NonIntegralInput,
    NotMultiplicative,
    ParseError,
    SingularModel,
    StageError,
    TropellError,
)
from tropell.faithful import certify, certify_family, sample
from tropell.literals import parse_series
from tropell.plane_curve import curve_of, curve_to_json, find_cycle
from tropell.puiseux import precision
from tropell.svg import render_svg
from tropell.tropical import LaurentPolynomial, tropicalize
from tropell.weierstrass import WeierstrassModel, analyze, invariants, q

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SINGULAR = 3
EXIT_FAILED = 4
EXIT_NOT_MULTIPLICATIVE = 5


class _Exit(Exception):
    def __init__(self, code, message, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _positive_fraction(text):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("precision must be positive")
    return value


def _nonnegative_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _sweep_range(text):
    m = re.fullmatch(r"\s*k\s*=\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not m or int(m.group(1)) < 1 or int(m.group(1)) > int(m.group(2)):
        raise argparse.ArgumentTypeError("expected k=LO..HI with 1 <= LO <= HI")
    return range(int(m.group(1)), int(m.group(2)) + 1)


def _dump(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# -- trop ---------------------------------------------------------------------


def cmd_trop(args) -> int:
    try:
        f = LaurentPolynomial.parse(args.polynomial)
    except ParseError as exc:
        raise _Exit(EXIT_INPUT, f"parse error: {exc}")
    if len(f.variables) != 2:
        raise _Exit(EXIT_INPUT, f"expected a polynomial in two variables, found {list(f.variables)}")
    try:
        F = tropicalize(f)
        curve = curve_of(F)
    except DegenerateInput as exc:
        raise _Exit(EXIT_INPUT, f"degenerate input: {exc}")
    cycle = find_cycle(curve)
    data = {
        "polynomial": str(f),
        "variables": list(f.variables),
        "tropical_polynomial": F.to_json(),
        "tropical_text": F.format(f.variables),
        "curve": curve_to_json(curve),
        "cycle": None if cycle is None else cycle.to_json(),
    }
    text = _dump(data)
    sys.stdout.write(text)
    if args.json:
        _write(args.json, text)
    if args.svg:
        _write(args.svg, render_svg(curve, cycle, title=str(f)))
    return EXIT_OK


# -- analyze ------------------------------------------------------------------


def _model(literal) -> WeierstrassModel:
    try:
        return WeierstrassModel.parse(literal)
    except ParseError as exc:
        raise _Exit(EXIT_INPUT, f"parse error: {exc}")


def cmd_analyze(args) -> int:
    W = _model(args.model)
    try:
        with precision(args.precision):
            report = analyze(W)
    except SingularModel as exc:
        raise _Exit(EXIT_SINGULAR, f"singular model: {exc}")
    except NonIntegralInput as exc:
        raise _Exit(EXIT_INPUT, f"non-integral model: {exc}")
    text = _dump(report)
    sys.stdout.write(text)
    if args.json:
        _write(args.json, text)
    return EXIT_OK


# -- faithful -----------------------------------------------------------------


def _family_args(pairs):
    values = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or key.strip() not in ("a", "b"):
            raise _Exit(EXIT_INPUT, f"--family expects a=... b=..., got {pair!r}")
        try:
            values[key.strip()] = parse_series(value)
        except ParseError as exc:
            raise _Exit(EXIT_INPUT, f"parse error in {key.strip()}: {exc}")
    if set(values) != {"a", "b"}:
        raise _Exit(EXIT_INPUT, "--family needs both a=... and b=...")
    return values["a"], values["b"]


def _cause(exc):
    return exc.cause if isinstance(exc, StageError) else exc


def _certify(model, family, prec):
    try:
        if family is not None:
            return certify_family(family[0], family[1], prec)
        return certify(model, prec)
    except (StageError, TropellError) as exc:
        cause = _cause(exc)
        if isinstance(cause, NotMultiplicative):
            kind = getattr(cause, "reduction", None)
            payload = {"verdict": False, "reduction": kind, "reason": str(cause)}
            if model is not None:
                try:
                    payload["vj"] = q(invariants(model).v_j)
                except TropellError:
                    pass
            raise _Exit(EXIT_NOT_MULTIPLICATIVE, f"not multiplicative: {cause}", payload)
        if isinstance(cause, SingularModel):
            raise _Exit(EXIT_SINGULAR, str(exc))
        if isinstance(cause, (NonIntegralInput, ParseError)):
            raise _Exit(EXIT_INPUT, str(exc))
        if isinstance(exc, StageError) and exc.stage == "family":
            raise _Exit(EXIT_INPUT, str(exc))
        raise _Exit(EXIT_FAILED, str(exc))


def _summary(report):
    return {
        "cycle_length": None if report.cycle is None else q(report.cycle_length),
        "minus_v_j": q(report.minus_v_j),
        "three_v_b": q(report.three_v_b),
        "verdict": report.verdict,
    }


def _sweep(args, family) -> int:
    a = family[0] if family is not None else parse_series("1")
    rows = []
    ok = True
    for k in args.sweep:
        b = parse_series(f"t^{k}")
        general = _certify(WeierstrassModel.family(a, b), None, args.precision)
        fam = _certify(None, (a, b), args.precision)
        row_ok = general.verdict and fam.verdict and general.cycle_length == 3 * k
        ok = ok and row_ok
        rows.append({"k": k, "general": _summary(general), "family": _summary(fam), "ok": row_ok})
    text = _dump({"a": str(a), "sweep": rows, "ok": ok})
    sys.stdout.write(text)
    if args.json:
        _write(args.json, text)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_faithful(args) -> int:
    family = _family_args(args.family) if args.family else None
    if args.sweep is not None:
        if args.model:
            raise _Exit(EXIT_INPUT, "--sweep builds its own models; drop the model literal")
        return _sweep(args, family)
    if (args.model is None) == (family is None):
        raise _Exit(EXIT_INPUT, "give either a model literal or --family a=... b=...")
    model = _model(args.model) if args.model else None
    report = _certify(model, family, args.precision)
    data = report.to_json()
    sampling = sample(report, args.samples, args.seed)
    data["sampling"] = dict(sampling.to_json(), seed=args.seed)
    text = _dump(data)
    sys.stdout.write(text)
    if args.json:
        _write(args.json, text)
    if args.svg:
        title = f"{report.model}: cycle length {report.cycle_length}"
        _write(args.svg, render_svg(report.curve, report.cycle, title=title))
    if not report.verdict:
        print(f"verdict false: checks {report.checks}", file=sys.stderr)
        return EXIT_FAILED
    if not sampling.ok:
        print(f"sampling found {sampling.checked - sampling.passed} point(s) off the curve",
              file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


# -- entry point --------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Exit(EXIT_INPUT, message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_positive_fraction, default=Fraction(24),
                        help="working precision p/q (default 24)")
    common.add_argument("--json", metavar="PATH", help="also write the JSON output here")

    parser = _Parser(prog="tropell", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("trop", parents=[common], help="tropical curve of a bivariate polynomial")
    p.add_argument("polynomial", help='e.g. "x^2*y + x*y + x*y^2 + t^3"')
    p.add_argument("--svg", metavar="PATH")
    p.set_defaults(func=cmd_trop)

    p = sub.add_parser("analyze", parents=[common], help="reduction report of a Weierstrass model")
    p.add_argument("model", help='e.g. "[0,1,0,0,t^2]"')
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("faithful", parents=[common], help="certify a cycle of length -v(j)")
    p.add_argument("model", nargs="?", help='e.g. "[0,1,0,-2*t,t^2]"')
    p.add_argument("--family", nargs="+", metavar="KEY=SERIES", help="a=... b=...")
    p.add_argument("--seed", type=_nonnegative_int, default=0)
    p.add_argument("--samples", type=_nonnegative_int, default=20)
    p.add_argument("--svg", metavar="PATH")
    p.add_argument("--sweep", type=_sweep_range, metavar="k=LO..HI",
                   help="certify y^2 = x^3 + a(x - t^k)^2 for each k, both modes")
    p.set_defaults(func=cmd_faithful)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _Exit as exc:
        if exc.payload is not None:
            sys.stdout.write(_dump(exc.payload))
        print(f"tropell: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
