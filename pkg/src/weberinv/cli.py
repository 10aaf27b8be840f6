"""Command-line front end.

    weberinv invariant --n 5 --d -11
    weberinv table --n 3
    weberinv table --heights
    weberinv modpoly --n 2

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 success,
2 bad flags or inadmissible (N, D), 3 rounding failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .eta import RoundingError, class_polynomial
from .invariants import Inadmissible, generate_condition_table, select_invariant
from .modular import MAX_MODPOLY_LEVEL, comparison_table, degrees, modular_polynomial
from .quadforms import Discriminant

EXIT_INADMISSIBLE = 2
EXIT_ROUNDING = 3


def _omega_note(disc: Discriminant) -> str:
    if disc.omega_is_half_sqrt:
        return f"w = sqrt({disc.fundamental // 4})"
    return f"w = (1+sqrt({disc.fundamental}))/2"


def invariant_record(args) -> dict:
    start = time.perf_counter()
    choice = select_invariant(args.n, args.d)
    poly = class_polynomial(choice, sqrt_d=args.sqrtd, prec=args.prec)
    return {
        "n": choice.N,
        "d": choice.D,
        "e": choice.e,
        "b": choice.B,
        "condition": str(choice.condition),
        "level": choice.level,
        "reality": choice.reality.value,
        "sqrtd": bool(args.sqrtd),
        "poly": {"coeffs": [list(c) for c in poly.coeffs], "text": str(poly)},
        "residual": poly.residual,
        "ms": round((time.perf_counter() - start) * 1000, 3),
    }


def dumps(record: dict) -> str:
    return json.dumps(record, separators=(", ", ": "))


def cmd_invariant(args) -> int:
    try:
        Discriminant.of(args.d)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    try:
        rec = invariant_record(args)
    except Inadmissible as exc:
        print(f"error: D={exc.D} inadmissible at p={exc.prime} for N={exc.N}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except RoundingError as exc:
        print(f"error: rounding failed: {exc}", file=sys.stderr)
        return EXIT_ROUNDING
    if args.format == "json":
        print(dumps(rec))
        return 0
    factor = "sqrt(D)*" if rec["sqrtd"] else ""
    print(
        f"N={rec['n']}, D={rec['d']}, e={rec['e']}, B={rec['b']}, "
        f"condition={rec['condition']}, level={rec['level']}, reality={rec['reality']}"
    )
    print(_omega_note(Discriminant.of(rec["d"])))
    print(f"f = {factor}w_{rec['n']}^{rec['e']}")
    print(f"H = {rec['poly']['text']}")
    print(f"residual = {rec['residual']:.3g}", file=sys.stderr)
    return 0


def cmd_table(args) -> int:
    if args.heights:
        for entry in comparison_table(Fraction(args.min_gain), args.max_degj):
            print(entry)
        return 0
    L, rows = generate_condition_table(args.n)
    print(f"N={args.n} D mod {L}")
    for row in rows:
        residues = ", ".join(map(str, row.residues))
        print(f"{row.condition.label()} | {residues} | {row.e}")
    return 0


def cmd_modpoly(args) -> int:
    d = degrees(args.n)
    if args.n > MAX_MODPOLY_LEVEL:
        print(f"notice: N={args.n} above {MAX_MODPOLY_LEVEL}, degrees only", file=sys.stderr)
    else:
        print(f"Phi_{args.n} = {modular_polynomial(args.n)}")
    print(f"deg_F={d.psi} deg_J={d.degJ}")
    return 0


def _level(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("N must be at least 2")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weberinv", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariant", help="select w_N^e and compute H_D")
    p.add_argument("--n", type=_level, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--prec", type=int, default=None, help="working precision in bits")
    p.add_argument("--sqrtd", action="store_true", help="use sqrt(D) * w_N^e")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("table", help="condition table for N or the height comparison")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=_level)
    group.add_argument("--heights", action="store_true")
    p.add_argument("--min-gain", default="13")
    p.add_argument("--max-degj", type=int, default=20)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("modpoly", help="modular polynomial of w_N^s")
    p.add_argument("--n", type=_level, required=True)
    p.set_defaults(func=cmd_modpoly)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)
