"""Command-line front-end.

Exit codes: 0 success, 1 usage error (bad arguments or unparsable
expressions), 2 computation error.  Results go to stdout as JSON by default;
on failure nothing is written to stdout and a JSON error object goes to
stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import List, Optional

from . import dsl
from .errors import FockcatError, ParseError
from .queries import diagrams_json, eval_query

USAGE_CODES = {"PARSE", "USAGE"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _valences(values: List[str]) -> tuple:
    out = []
    for v in values:
        out.extend(int(x) for x in v.split(",") if x.strip())
    return tuple(out)


def _potential(values: List[str]) -> tuple:
    out = []
    for v in values:
        m, _, g = v.partition("=")
        if not g:
            raise UsageError(f"potential terms look like DEGREE=COUPLING, got {v!r}")
        out.append((int(m), float(g)))
    return tuple(out)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--plain", dest="fmt", action="store_const", const="plain", help="short text output")
    common.add_argument("-o", "--output", metavar="FILE", help="write the result to FILE instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized checks")

    p = _Parser(prog="fockcat", description="Categorified Fock space calculator.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("gf", parents=[common], help="generating function of an expression")
    s.add_argument("expr")
    s.add_argument("--order", type=int, default=16)

    s = sub.add_parser("inner", parents=[common], help="inner product groupoid cardinality")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--order", type=int, default=16)
    s.add_argument("--fock", action="store_true", help="conjugate the left argument")

    for name in ("vev", "diagrams"):
        s = sub.add_parser(name, parents=[common], help="Feynman diagram " + ("cardinality" if name == "vev" else "dump"))
        s.add_argument("--in", dest="l", type=int, required=True, help="incoming points (l)")
        s.add_argument("--out", dest="k", type=int, required=True, help="outgoing points (k)")
        s.add_argument("--valences", nargs="*", default=[], help="vertex valences in time order")

    s = sub.add_parser("expect", parents=[common], help="<z^k, W z^l> for a Weyl expression W")
    s.add_argument("k", type=int)
    s.add_argument("weyl")
    s.add_argument("l", type=int)

    s = sub.add_parser("solve", parents=[common], help="least fixed point of NAME = EXPR")
    s.add_argument("equation")
    s.add_argument("--order", type=int, default=16)

    s = sub.add_parser("evolve", parents=[common], help="free time evolution exp(-iTN)")
    s.add_argument("expr")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--time", type=float, help="evolution time T (radians per quantum)")
    g.add_argument("--turns", help="evolution time as exact turns, e.g. 1/4")
    s.add_argument("--order", type=int, default=16)

    s = sub.add_parser("dyson", parents=[common], help="Dyson series vs matrix exponential")
    s.add_argument("--in", dest="l", type=int, required=True)
    s.add_argument("--out", dest="k", type=int, required=True)
    s.add_argument("--potential", nargs="+", required=True, help="DEGREE=COUPLING terms of V = sum g phi^m/m!")
    s.add_argument("--time", type=float, required=True)
    s.add_argument("--order", type=int, default=2)
    s.add_argument("--cutoff", type=int, default=16)

    s = sub.add_parser("query", parents=[common], help="evaluate a textual query, e.g. 'vev(0, 0, [6])'")
    s.add_argument("text")

    s = sub.add_parser("selfcheck", parents=[common], help="randomized algebraic identity checks")
    s.add_argument("--trials", type=int, default=20)
    return p


def _to_query(args):
    c = args.command
    if c == "gf":
        return dsl.GF(dsl.parse(args.expr), args.order)
    if c == "inner":
        return dsl.Inner(dsl.parse(args.left), dsl.parse(args.right), args.order, fock=args.fock)
    if c == "vev":
        return dsl.Vev(args.k, args.l, _valences(args.valences))
    if c == "expect":
        return dsl.Expect(args.k, dsl.parse(args.weyl), args.l)
    if c == "solve":
        var, rhs = dsl.parse_equation(args.equation)
        return dsl.Solve(var, rhs, args.order)
    if c == "evolve":
        if args.turns is not None:
            try:
                angle = dsl.AngleLit(turns=Fraction(args.turns))
            except ValueError:
                raise UsageError(f"--turns expects a rational, got {args.turns!r}") from None
        else:
            angle = dsl.AngleLit(radians=args.time)
        return dsl.Evolve(dsl.parse(args.expr), angle, args.order)
    if c == "dyson":
        return dsl.Dyson(args.k, args.l, _potential(args.potential), args.time, args.order, args.cutoff)
    if c == "query":
        return dsl.parse_query(args.text)
    return None


def _plain(result: dict) -> str:
    for key in ("cardinality", "value", "delta"):
        if key in result:
            return f"{result.get('input', '')}\t{result[key]}"
    if "gf" in result:
        return f"{result.get('input', '')}\t{' '.join(map(str, result['gf']['coeffs']))}"
    return json.dumps(result)


def run(args) -> dict:
    if args.command == "diagrams":
        return diagrams_json(args.k, args.l, _valences(args.valences))
    if args.command == "selfcheck":
        from .checks import run_checks

        return run_checks(random.Random(args.seed), args.trials)
    return eval_query(_to_query(args))


def _fail(code: str, message: str, status: int, **details) -> int:
    err = {"code": code, "message": message}
    if details:
        err["details"] = details
    print(json.dumps({"error": err}), file=sys.stderr)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        result = run(args)
    except UsageError as e:
        return _fail("USAGE", str(e), 1)
    except ParseError as e:
        return _fail(e.code, str(e), 1, **e.details)
    except FockcatError as e:
        return _fail(e.code, e.message, 2, **e.details)
    except (ArithmeticError, ValueError) as e:
        return _fail("COMPUTE", str(e), 2)
    except SystemExit as e:  # --help
        return int(e.code or 0)

    text = json.dumps(result, indent=2) if args.fmt != "plain" else _plain(result)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
