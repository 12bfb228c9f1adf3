"""Command line interface.

Subcommands: ``run`` evaluates a file, ``trace`` emits per-step records,
``equiv`` compares two files for bounded CIU equivalence, ``check`` runs
the built-in verification suites.  ``trace`` and ``equiv`` can render a
figure next to their textual output with ``--plot``.

Exit codes: ``run`` uses 0/2/3 for completed/out-of-fuel/stuck; ``equiv``
uses 0/1/2 for equivalent/inequivalent/unknown; usage errors exit 64 and
parse errors 65.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .equiv import DEFAULT_SEED, EquivConfig, ciu_equiv
from .machine import Completed, Configuration, OutOfFuel, eval_star, run_trace
from .parser import ParseError, parse, parse_unit, unit_expression
from .printer import format_redex, format_result
from .syntax import ELetRec, FunId, ValSeq, Value, Var

EX_USAGE = 64
EX_PARSE = 65


class CliError(Exception):
    def __init__(self, message: str, code: int = EX_USAGE):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message, EX_USAGE)


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as err:
        raise CliError(f"cannot read {path}: {err}", EX_USAGE)


def _parse_unit(path: str):
    try:
        return parse_unit(_read(path))
    except ParseError as err:
        raise CliError(f"{path}: {err}", EX_PARSE)


def _parse_entry(text: Optional[str]) -> Optional[FunId]:
    if text is None:
        return None
    name, _, arity = text.rpartition("/")
    name = name.strip("'")
    if not name or not arity.isdigit():
        raise CliError(f"bad entry {text!r}, expected name/arity")
    return FunId(name, int(arity))


def _eval_arg(text: str) -> Value:
    try:
        expr = parse(text)
    except ParseError as err:
        raise CliError(f"argument {text!r}: {err}", EX_PARSE)
    out = eval_star(Configuration((), expr), 10_000)
    if not isinstance(out, Completed) or not (
        isinstance(out.result, ValSeq) and len(out.result.values) == 1
    ):
        raise CliError(f"argument {text!r} does not evaluate to a single value")
    return out.result.values[0]


def _parse_free(text: Optional[str]) -> frozenset:
    if not text:
        return frozenset()
    names = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "/" in piece:
            name, _, arity = piece.rpartition("/")
            if not arity.isdigit():
                raise CliError(f"bad name {piece!r} in --free")
            names.append(FunId(name.strip("'"), int(arity)))
        else:
            names.append(Var(piece))
    return frozenset(names)


def _program_expression(args):
    unit = _parse_unit(args.file)
    values = [_eval_arg(a) for a in args.arg]
    entry = _parse_entry(args.entry)
    try:
        return unit_expression(unit, values, entry)
    except ValueError as err:
        raise CliError(str(err))


def _cmd_run(args) -> int:
    expr = _program_expression(args)
    out = eval_star(Configuration((), expr), args.fuel)
    if isinstance(out, Completed):
        print(format_result(out.result))
        return 0
    if isinstance(out, OutOfFuel):
        print(f"out of fuel after {args.fuel} steps", file=sys.stderr)
        return 2
    print(f"stuck: {out.reason}", file=sys.stderr)
    return 3


def _trace_records(records, outcome) -> list:
    rows = [
        {
            "step": r.index,
            "rule": r.rule,
            "stack_depth": len(r.config.stack),
            "redex_text": format_redex(r.config.redex),
        }
        for r in records
    ]
    if isinstance(outcome, Completed):
        rows.append(
            {
                "step": outcome.steps,
                "rule": "Final",
                "stack_depth": 0,
                "redex_text": format_result(outcome.result),
            }
        )
    else:
        label = "OutOfFuel" if isinstance(outcome, OutOfFuel) else "Stuck"
        rows.append(
            {
                "step": len(rows),
                "rule": label,
                "stack_depth": len(outcome.config.stack),
                "redex_text": format_redex(outcome.config.redex),
            }
        )
    return rows


def _cmd_trace(args) -> int:
    expr = _program_expression(args)
    records, outcome = run_trace(Configuration((), expr), args.fuel)
    rows = _trace_records(records, outcome)
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        for row in rows:
            print(f"{row['step']}\t{row['rule']}\t{row['stack_depth']}\t{row['redex_text']}")
    if args.plot:
        from .viz import render_trace_figure

        render_trace_figure(records, outcome, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    if isinstance(outcome, Completed):
        return 0
    return 2 if isinstance(outcome, OutOfFuel) else 3


def _equiv_side(path: str):
    """A comparable redex for a file: definition files expose the entry
    body with its parameters free (siblings stay letrec-bound)."""
    unit = _parse_unit(path)
    if unit.defs:
        entry = next(d for d in unit.defs if d.id == unit.entry())
        body = entry.body if len(unit.defs) == 1 else ELetRec(unit.defs, entry.body)
        return body, frozenset(entry.params)
    return unit.expr, frozenset()


def _cmd_equiv(args) -> int:
    left, gamma_left = _equiv_side(args.file1)
    right, gamma_right = _equiv_side(args.file2)
    if gamma_left and gamma_right and gamma_left != gamma_right:
        raise CliError(
            "entry parameter names differ between the files; rename them to "
            "match so both sides see the same substituted values"
        )
    gamma = gamma_left | gamma_right | _parse_free(args.free)
    cfg = EquivConfig(
        fuel=args.fuel,
        num_stacks=args.stacks,
        num_substitutions=args.substs,
        seed=args.seed,
    )
    try:
        verdict = ciu_equiv(left, right, gamma, cfg)
    except ValueError as err:
        raise CliError(str(err))
    print(json.dumps(verdict.to_report(), indent=2))
    if args.plot:
        from .viz import render_equiv_figure

        render_equiv_figure(verdict, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return {"equivalent": 0, "inequivalent": 1, "unknown": 2}[verdict.kind]


def _cmd_check(args) -> int:
    from .suites import run_suites

    results = run_suites(args.suite)
    for result in results:
        print(result.line())
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> _Parser:
    parser = _Parser(prog="corestack", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common_program(p, fuel: int):
        p.add_argument("file")
        p.add_argument("--arg", action="append", default=[], metavar="VALUE")
        p.add_argument("--entry", metavar="NAME/ARITY")
        p.add_argument("--fuel", type=int, default=fuel)

    run_p = sub.add_parser("run", help="evaluate a program and print its result")
    common_program(run_p, fuel=1_000_000)
    run_p.set_defaults(fn=_cmd_run)

    trace_p = sub.add_parser("trace", help="emit one record per reduction step")
    common_program(trace_p, fuel=100_000)
    trace_p.add_argument("--format", choices=("text", "json"), default="text")
    trace_p.add_argument("--plot", metavar="FILE")
    trace_p.set_defaults(fn=_cmd_trace)

    equiv_p = sub.add_parser("equiv", help="bounded CIU-equivalence verdict")
    equiv_p.add_argument("file1")
    equiv_p.add_argument("file2")
    equiv_p.add_argument("--free", metavar="NAMES", help="comma-separated free names")
    equiv_p.add_argument("--fuel", type=int, default=100_000)
    equiv_p.add_argument("--stacks", type=int, default=12)
    equiv_p.add_argument("--substs", type=int, default=8)
    equiv_p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    equiv_p.add_argument("--plot", metavar="FILE")
    equiv_p.set_defaults(fn=_cmd_equiv)

    check_p = sub.add_parser("check", help="run the verification suites")
    check_p.add_argument("--suite", choices=("props", "golden", "all"), default="all")
    check_p.set_defaults(fn=_cmd_check)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except CliError as err:
        print(f"corestack: {err}", file=sys.stderr)
        return err.code


if __name__ == "__main__":
    sys.exit(main())
