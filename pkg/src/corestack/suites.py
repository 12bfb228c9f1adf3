"""Named verification suites: golden traces and machine meta-properties.

Each suite returns a :class:`SuiteResult` so the CLI ``check`` subcommand
and the acceptance tests share one implementation; the acceptance tests
simply run them at larger bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Optional

from .equiv import EquivConfig, ciu_equiv
from .gen import TermGen, enum_configurations, enum_values
from .machine import (
    Completed,
    Configuration,
    OutOfFuel,
    Stepped,
    applicable_rules,
    frame_free_names,
    plug,
    run_trace,
    stack_concat,
    step,
    terminates,
)
from .bifs import bif_equal
from .parser import parse, parse_unit, unit_expression
from .printer import format_expression, format_result
from .syntax import (
    Atom,
    Exc,
    Int,
    NIL,
    ValSeq,
    VTuple,
    free_names,
)

#: Core Erlang translation of "f(x) when length(x) == 0 -> 1; f(_) -> 2."
#: with the zero-length test performed in the guard.
LENGTH_GUARD_PROGRAM = """
'f'/1 = fun(_0) ->
  case _0 of
    <L> when try let <_1> = call 'erlang':'length'(L)
                 in call 'erlang':'=='(_1, 0)
             of <Try> -> Try
             catch <T,R> -> 'false'
      -> 1;
    <_3> when 'true' -> 2;
    <_2> when 'true' ->
      primop 'match_fail'({'function_clause', _2})
  end
"""

#: The refactored form: the guard replaced by a nil pattern.
LENGTH_PATTERN_PROGRAM = """
'f'/1 = fun(_0) ->
  case _0 of
    <[]> when 'true' -> 1;
    <_3> when 'true' -> 2;
    <_2> when 'true' ->
      primop 'match_fail'({'function_clause', _2})
  end
"""

#: A broken refactoring: the two result literals swapped.
LENGTH_PATTERN_SWAPPED_PROGRAM = """
'f'/1 = fun(_0) ->
  case _0 of
    <[]> when 'true' -> 2;
    <_3> when 'true' -> 1;
    <_2> when 'true' ->
      primop 'match_fail'({'function_clause', _2})
  end
"""

#: Rules that must appear, in order, on the nil run of the guard program.
GOLDEN_NIL_RULES = (
    "SCase", "SCaseSuccess", "STry", "SLet", "SCallMod",
    "SCallFun", "SCallParam", "SParams0", "PValue", "PParams",
)

#: Rules that must appear, in order, on the bad-argument run.
GOLDEN_EXC_RULES = ("ExcProp", "ExcTry", "SCaseFalse", "SCaseSuccess", "PCaseTrue")


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "ok" if self.passed else "FAIL"
        return f"{status:4s} {self.name}: {self.detail}"


def _subsequence(needle, haystack) -> bool:
    it = iter(haystack)
    return all(any(x == want for x in it) for want in needle)


def program_body(text: str):
    """The entry function's body of a definition file, with its parameters
    free, wrapped in a letrec so sibling definitions stay bound."""
    from .syntax import ELetRec

    unit = parse_unit(text)
    entry = next(d for d in unit.defs if d.id == unit.entry())
    body = entry.body if len(unit.defs) == 1 else ELetRec(unit.defs, entry.body)
    return body, frozenset(entry.params)


def golden_traces() -> list:
    """The guard program applied to ``[]`` and ``0``: exact results and
    the expected rule subsequences."""
    unit = parse_unit(LENGTH_GUARD_PROGRAM)
    results = []

    records, out = run_trace(Configuration((), unit_expression(unit, [NIL])), 10_000)
    rules = [r.rule for r in records]
    ok = (
        isinstance(out, Completed)
        and out.result == ValSeq((Int(1),))
        and _subsequence(GOLDEN_NIL_RULES, rules)
    )
    results.append(
        SuiteResult(
            "golden-nil",
            ok,
            f"result {format_result(out.result) if isinstance(out, Completed) else out}"
            f" after {len(rules)} steps",
        )
    )

    records, out = run_trace(Configuration((), unit_expression(unit, [Int(0)])), 10_000)
    rules = [r.rule for r in records]
    ok = (
        isinstance(out, Completed)
        and out.result == ValSeq((Int(2),))
        and _subsequence(GOLDEN_EXC_RULES, rules)
    )
    results.append(
        SuiteResult(
            "golden-badarg",
            ok,
            f"result {format_result(out.result) if isinstance(out, Completed) else out}"
            f" after {len(rules)} steps",
        )
    )
    return results


def determinism_suite(min_configs: int = 10_000) -> SuiteResult:
    """Every enumerated configuration admits at most one rule, and ``step``
    both agrees with the independent guard table and with itself."""
    checked = 0
    for config in enum_configurations(min_configs):
        rules = applicable_rules(config)
        if len(rules) > 1:
            return SuiteResult(
                "determinism", False, f"overlapping rules {rules} on {config}"
            )
        first = step(config)
        again = step(config)
        if first != again:
            return SuiteResult("determinism", False, f"step not reproducible on {config}")
        if isinstance(first, Stepped):
            if rules != [first.rule]:
                return SuiteResult(
                    "determinism",
                    False,
                    f"dispatch chose {first.rule} but guards say {rules}",
                )
        elif rules:
            return SuiteResult(
                "determinism",
                False,
                f"guards claim {rules} but step gave {type(first).__name__}",
            )
        checked += 1
    return SuiteResult("determinism", True, f"{checked} configurations, no overlap")


def extend_stack_suite(runs: int = 100, seed: int = 7, fuel: int = 2000) -> SuiteResult:
    """Appending frames below a terminating run replays the identical rule
    sequence and lands on the appended stack."""
    g = TermGen(Random(seed))
    done = 0
    attempts = 0
    while done < runs and attempts < runs * 20:
        attempts += 1
        redex = g.redex(2)
        k1 = g.stack(2)
        if free_names(redex) or any(frame_free_names(f) for f in k1):
            continue
        records, out = run_trace(Configuration(k1, redex), fuel)
        if not isinstance(out, Completed):
            continue
        extension = g.stack(2)
        if any(frame_free_names(f) for f in extension):
            continue
        extended = Configuration(stack_concat(k1, extension), redex)
        records2, out2 = run_trace(extended, fuel * 2, max_steps=out.steps)
        rules1 = [r.rule for r in records]
        rules2 = [r.rule for r in records2]
        if rules1 != rules2:
            return SuiteResult(
                "extend-stack", False, f"rule sequences diverge after {len(rules2)} steps"
            )
        landing = (
            out2.config
            if isinstance(out2, OutOfFuel)
            else Configuration((), out2.result)
        )
        expected = Configuration(tuple(extension), out.result)
        if landing != expected:
            return SuiteResult("extend-stack", False, "extended run missed the landing")
        done += 1
    if done < runs:
        return SuiteResult(
            "extend-stack", False, f"only {done}/{runs} terminating runs found"
        )
    return SuiteResult("extend-stack", True, f"{done} terminating runs replayed")


def termination_prefix_suite(runs: int = 100, seed: int = 11, fuel: int = 2000) -> SuiteResult:
    """A redex that terminates on some stack reaches a result on the empty
    stack in no more steps."""
    g = TermGen(Random(seed))
    done = 0
    attempts = 0
    while done < runs and attempts < runs * 20:
        attempts += 1
        redex = g.redex(2)
        stack = g.stack(2)
        if free_names(redex) or any(frame_free_names(f) for f in stack):
            continue
        full = terminates(stack, redex, fuel)
        if not full.ok:
            continue
        alone = terminates((), redex, fuel)
        if not alone.ok or alone.steps > full.steps:
            return SuiteResult(
                "termination-prefix",
                False,
                f"empty-stack run took {alone.steps} > {full.steps} steps",
            )
        done += 1
    if done < runs:
        return SuiteResult(
            "termination-prefix", False, f"only {done}/{runs} terminating runs found"
        )
    return SuiteResult("termination-prefix", True, f"{done} runs checked")


def frame_plug_suite(
    runs: int = 100, seed: int = 23, fuel: int = 100_000, max_unknown_rate: float = 0.05
) -> SuiteResult:
    """Removing or adding one frame preserves termination: evaluating under
    ``F :: K`` and evaluating the plugged ``F[e]`` under ``K`` agree."""
    g = TermGen(Random(seed))
    done = 0
    unknown = 0
    attempts = 0
    while done < runs and attempts < runs * 20:
        attempts += 1
        frame = g.guard_frame(1) if g.rng.random() < 0.2 else g.frame(1)
        expr = g.expression(2)
        stack = g.stack(1)
        if (
            frame_free_names(frame)
            or free_names(expr)
            or any(frame_free_names(f) for f in stack)
        ):
            continue
        with_frame = terminates((frame,) + stack, expr, fuel)
        plugged = terminates(stack, plug(frame, expr), fuel)
        if with_frame.unknown or plugged.unknown:
            unknown += 1
            done += 1
            continue
        if with_frame.ok != plugged.ok:
            return SuiteResult(
                "frame-plug",
                False,
                f"termination disagrees on {format_expression(plug(frame, expr))[:80]}",
            )
        done += 1
    if done < runs:
        return SuiteResult("frame-plug", False, f"only {done}/{runs} trials built")
    rate = unknown / done
    if rate >= max_unknown_rate:
        return SuiteResult(
            "frame-plug", False, f"unknown rate {rate:.1%} over {done} trials"
        )
    return SuiteResult(
        "frame-plug", True, f"{done} trials, {unknown} unknown ({rate:.1%})"
    )


def reflexivity_suite(
    count: int = 100, seed: int = 31, cfg: Optional[EquivConfig] = None
) -> SuiteResult:
    """Every generated closed redex is equivalent to itself."""
    cfg = cfg or EquivConfig(fuel=500, num_stacks=6, num_substitutions=2)
    g = TermGen(Random(seed))
    done = 0
    attempts = 0
    while done < count and attempts < count * 20:
        attempts += 1
        redex = g.redex(2)
        if free_names(redex):
            continue
        verdict = ciu_equiv(redex, redex, frozenset(), cfg)
        if not verdict.equivalent:
            return SuiteResult(
                "ciu-reflexivity", False, f"{verdict.kind} on {redex!r}"
            )
        done += 1
    return SuiteResult("ciu-reflexivity", True, f"{done} redexes equivalent to themselves")


def closure_free_pairs(min_each: int = 1000):
    """Deterministic accepted/rejected closure-free value pairs: accepted
    pairs are equal values rebuilt independently, rejected pairs differ."""
    from .gen import free_of_closures

    base = [v for v in enum_values() if free_of_closures(v)]
    from .syntax import VCons, VTuple

    pool = list(base)
    while len(pool) < min_each:
        grown = []
        for v in list(pool):
            grown.append(VCons(v, NIL))
            grown.append(VTuple((v, Int(len(grown)))))
            if len(pool) + len(grown) >= min_each * 2:
                break
        pool.extend(grown)
        pool = pool[: min_each * 2]
    accepted = [(v, v) for v in pool[:min_each]]
    rejected = []
    for i, v in enumerate(pool):
        w = pool[(i + 1) % len(pool)]
        if v != w:
            rejected.append((v, w))
        if len(rejected) >= min_each:
            break
    return accepted, rejected


def values_equal_suite(min_pairs: int = 1000) -> SuiteResult:
    """Related closure-free values are equal under the equality builtin,
    and unrelated ones are not."""
    from .equiv import value_rel

    accepted, rejected = closure_free_pairs(min_pairs)
    for v, w in accepted:
        if not value_rel(v, w):
            return SuiteResult("values-equal", False, f"rejected equal pair {v!r}")
        if bif_equal(v, w) != Atom("true"):
            return SuiteResult("values-equal", False, f"'==' false on related {v!r}")
    for v, w in rejected:
        if value_rel(v, w):
            return SuiteResult("values-equal", False, f"accepted unequal pair {v!r} {w!r}")
        if bif_equal(v, w) != Atom("false"):
            return SuiteResult("values-equal", False, f"'==' true on unrelated {v!r} {w!r}")
    return SuiteResult(
        "values-equal",
        True,
        f"{len(accepted)} related and {len(rejected)} unrelated pairs agree with '=='",
    )


def round_trip_suite(count: int = 200, seed: int = 41) -> SuiteResult:
    """Printing and reparsing is the identity on generated source terms."""
    g = TermGen(Random(seed))
    for _ in range(count):
        expr = g.expression(3)
        text = format_expression(expr)
        back = parse(text)
        if back != expr:
            return SuiteResult("round-trip", False, f"mismatch on {text[:100]}")
    return SuiteResult("round-trip", True, f"{count} terms survive print/parse")


def exc_case_suite() -> SuiteResult:
    """A case with no matching clause raises exactly the if_clause error."""
    expr = parse("case 5 of <'a'> when 'true' -> 'x' end")
    out = terminates((), expr, 100)
    want = Exc("error", Atom("if_clause"), VTuple(()))
    ok = out.ok and out.result == want
    return SuiteResult(
        "exc-case",
        ok,
        format_result(out.result) if out.ok else "did not complete",
    )


PROP_SUITES: tuple = (
    lambda: determinism_suite(3000),
    lambda: extend_stack_suite(100),
    lambda: termination_prefix_suite(100),
    lambda: frame_plug_suite(100, fuel=10_000),
    lambda: reflexivity_suite(100),
    lambda: values_equal_suite(300),
    lambda: round_trip_suite(200),
    exc_case_suite,
)


def run_suites(which: str = "all") -> list:
    results = []
    if which in ("golden", "all"):
        results.extend(golden_traces())
    if which in ("props", "all"):
        for suite in PROP_SUITES:
            results.append(suite())
    return results
