"""Acceptance criteria, one test per criterion at its stated bound.

Each test prints a single pass/fail line (visible with ``pytest -s`` or in
the failure report) and asserts both the property and its runtime budget.
"""

import time
from random import Random

from corestack.equiv import EquivConfig, ciu_equiv, replay_witness, value_rel
from corestack.gen import TermGen
from corestack.machine import Completed, Configuration, run_trace, terminates
from corestack.bifs import bif_equal
from corestack.parser import parse, parse_unit, unit_expression
from corestack.subst import Substitution
from corestack.suites import (
    GOLDEN_NIL_RULES,
    LENGTH_GUARD_PROGRAM,
    LENGTH_PATTERN_PROGRAM,
    LENGTH_PATTERN_SWAPPED_PROGRAM,
    closure_free_pairs,
    determinism_suite,
    extend_stack_suite,
    frame_plug_suite,
    program_body,
    reflexivity_suite,
    round_trip_suite,
)
from corestack.syntax import (
    NIL,
    Atom,
    Exc,
    Int,
    ValSeq,
    VTuple,
    Var,
    list_value,
)


def report(number: int, passed: bool, elapsed: float, detail: str):
    status = "PASS" if passed else "FAIL"
    print(f"criterion {number}: {status} ({elapsed:.2f}s) {detail}")
    assert passed, detail


def timed():
    start = time.perf_counter()
    return lambda: time.perf_counter() - start


def test_criterion_1_golden_example():
    elapsed = timed()
    unit = parse_unit(LENGTH_GUARD_PROGRAM)

    records, out = run_trace(Configuration((), unit_expression(unit, [NIL])), 10_000)
    ok = isinstance(out, Completed) and out.result == ValSeq((Int(1),))
    rules = iter(r.rule for r in records)
    ok = ok and all(name in rules for name in GOLDEN_NIL_RULES)

    records, out0 = run_trace(Configuration((), unit_expression(unit, [Int(0)])), 10_000)
    ok = ok and isinstance(out0, Completed) and out0.result == ValSeq((Int(2),))
    rules = iter(r.rule for r in records)
    ok = ok and all(name in rules for name in ("ExcProp", "ExcTry", "SCaseFalse"))

    took = elapsed()
    report(1, ok and took < 1.0, took, "worked example: <1> on [], <2> on 0, rule order")


def test_criterion_2_determinism():
    elapsed = timed()
    result = determinism_suite(10_000)
    took = elapsed()
    report(2, result.passed and took < 30.0, took, result.detail)


def test_criterion_3_extend_frame_stack():
    elapsed = timed()
    result = extend_stack_suite(runs=500, seed=105, fuel=2000)
    took = elapsed()
    report(3, result.passed and took < 60.0, took, result.detail)


def test_criterion_4_remove_add_frame():
    elapsed = timed()
    result = frame_plug_suite(runs=500, seed=107, fuel=100_000, max_unknown_rate=0.05)
    took = elapsed()
    report(4, result.passed and took < 120.0, took, result.detail)


def test_criterion_5_ciu_soundness():
    elapsed = timed()
    one, two = ValSeq((Int(1),)), ValSeq((Int(2),))
    verdict = ciu_equiv(one, two)
    ok = verdict.inequivalent and verdict.witness is not None
    left, right = replay_witness(one, two, verdict.witness, verdict.fuel)
    ok = ok and (left, right) == (verdict.witness.left, verdict.witness.right)

    reflexivity = reflexivity_suite(
        count=1000, seed=109, cfg=EquivConfig(fuel=400, num_stacks=4, num_substitutions=2)
    )
    took = elapsed()
    report(
        5,
        ok and reflexivity.passed and took < 120.0,
        took,
        f"<1> vs <2> inequivalent with replayable witness; {reflexivity.detail}",
    )


def _refactoring_substitutions(count: int = 100):
    param = Var("_0")
    pinned = [
        NIL,
        list_value([Int(1)]),
        list_value([Int(1), Int(2)]),
        Int(0),
        Atom("a"),
        VTuple(()),
        VTuple((Int(1), Atom("b"))),
    ]
    g = TermGen(Random(111))
    values = list(pinned)
    while len(values) < count:
        values.append(g.value(3))
    return [Substitution({param: v}) for v in values]


def test_criterion_6_refactoring_correctness():
    elapsed = timed()
    guard_body, gamma = program_body(LENGTH_GUARD_PROGRAM)
    pattern_body, gamma2 = program_body(LENGTH_PATTERN_PROGRAM)
    swapped_body, _ = program_body(LENGTH_PATTERN_SWAPPED_PROGRAM)
    assert gamma == gamma2 == {Var("_0")}

    subs = _refactoring_substitutions(100)
    cfg = EquivConfig(fuel=100_000, num_stacks=50, num_substitutions=100, seed=113)

    verdict = ciu_equiv(guard_body, pattern_body, gamma, cfg, substitutions=subs)
    ok = verdict.equivalent and verdict.unknown_trials == 0

    mutated = ciu_equiv(guard_body, swapped_body, gamma, cfg, substitutions=subs)
    ok = ok and mutated.inequivalent

    took = elapsed()
    report(
        6,
        ok and took < 120.0,
        took,
        f"guard/pattern equivalent over {verdict.trials} trials with no unknowns; "
        f"mutation caught",
    )


def test_criterion_7_equivalent_values_are_equal():
    elapsed = timed()
    accepted, rejected = closure_free_pairs(1000)
    ok = len(accepted) >= 1000 and len(rejected) >= 1000
    for v, w in accepted:
        if not (value_rel(v, w) and bif_equal(v, w) == Atom("true")):
            ok = False
            break
    for v, w in rejected:
        if value_rel(v, w) or bif_equal(v, w) != Atom("false"):
            ok = False
            break
    took = elapsed()
    report(
        7,
        ok and took < 10.0,
        took,
        f"{len(accepted)} related pairs equal, {len(rejected)} unrelated pairs unequal",
    )


def test_criterion_8_exc_case():
    elapsed = timed()
    expr = parse("case 5 of <'a'> when 'true' -> 'x' end")
    out = terminates((), expr, 100)
    want = Exc("error", Atom("if_clause"), VTuple(()))
    took = elapsed()
    report(8, out.ok and out.result == want, took, "no-match case raises if_clause exactly")


def test_criterion_9_round_trip():
    elapsed = timed()
    result = round_trip_suite(count=1000, seed=115)
    took = elapsed()
    report(9, result.passed and took < 10.0, took, result.detail)
