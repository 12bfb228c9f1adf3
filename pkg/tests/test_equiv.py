"""The bounded CIU harness and the value relation."""

from random import Random

import pytest

from corestack.equiv import (
    DEFAULT_SEED,
    EquivConfig,
    check_values_equal_theorem,
    ciu_equiv,
    ciu_le,
    replay_witness,
    results_differ,
    value_rel,
)
from corestack.gen import TermGen, omega
from corestack.parser import parse
from corestack.subst import Substitution
from corestack.syntax import (
    NIL,
    Atom,
    Closure,
    ESeq,
    Exc,
    Int,
    Val,
    ValSeq,
    VTuple,
    Var,
    free_names,
)

X = Var("X")

FAST = EquivConfig(fuel=500, num_stacks=6, num_substitutions=3)


def test_reflexivity_on_identical_redexes():
    assert ciu_le(ValSeq((Int(1),)), ValSeq((Int(1),)), cfg=FAST).equivalent
    r = parse("do 'a' 'b'")
    assert ciu_equiv(r, r, cfg=FAST).equivalent


def test_distinct_results_are_inequivalent():
    verdict = ciu_equiv(ValSeq((Int(1),)), ValSeq((Int(2),)))
    assert verdict.inequivalent
    left, right = replay_witness(
        ValSeq((Int(1),)), ValSeq((Int(2),)), verdict.witness, verdict.fuel
    )
    assert (left, right) == (verdict.witness.left, verdict.witness.right)


def test_sequencing_collapse_is_equivalent():
    # do 'a' 'b' passes through PValue, SSeq, PSeq to the same result as 'b'
    verdict = ciu_equiv(parse("do 'a' 'b'"), parse("'b'"), cfg=FAST)
    assert verdict.equivalent


def test_verdict_is_deterministic_for_a_seed():
    a, b = parse("{1,2}"), parse("{1,3}")
    first = ciu_equiv(a, b, cfg=FAST)
    second = ciu_equiv(a, b, cfg=FAST)
    assert first == second
    assert first.inequivalent


def test_exception_vs_value_inequivalent():
    exc = Exc("error", Atom("boom"), NIL)
    verdict = ciu_equiv(exc, ValSeq((Int(1),)), cfg=FAST)
    assert verdict.inequivalent


def test_sequence_length_mismatch_inequivalent():
    verdict = ciu_equiv(parse("<1,2>"), parse("<1>"), cfg=FAST)
    assert verdict.inequivalent


def test_divergence_against_completion_is_unknown():
    verdict = ciu_le(ValSeq((Int(1),)), omega(), cfg=FAST)
    assert verdict.kind == "unknown"
    assert verdict.reason == "fuel"
    # the other direction holds vacuously within the bound
    assert ciu_le(omega(), ValSeq((Int(1),)), cfg=FAST).equivalent


def test_open_terms_need_scope():
    with pytest.raises(ValueError):
        ciu_equiv(Val(X), Val(X), frozenset(), FAST)
    assert ciu_equiv(Val(X), Val(X), frozenset((X,)), FAST).equivalent


def test_explicit_substitutions_are_used():
    subs = [Substitution({X: Int(2)})]
    verdict = ciu_equiv(
        Val(X),
        parse("call 'erlang':'+'(1, 1)"),
        frozenset((X,)),
        FAST,
        substitutions=subs,
    )
    assert verdict.equivalent
    subs = [Substitution({X: Int(3)})]
    verdict = ciu_equiv(
        Val(X),
        parse("call 'erlang':'+'(1, 1)"),
        frozenset((X,)),
        FAST,
        substitutions=subs,
    )
    assert verdict.inequivalent


def test_transitivity_on_known_equivalent_wrappers():
    g = TermGen(Random(3))
    checked = 0
    while checked < 20:
        a = g.expression(2)
        if free_names(a):
            continue
        b = ESeq(Val(Atom("pad")), a)
        fresh = g.fresh_var("Unused")
        from corestack.syntax import ELet

        c = ELet((fresh,), Val(Int(0)), a)
        ab = ciu_le(a, b, cfg=FAST)
        bc = ciu_le(b, c, cfg=FAST)
        if ab.equivalent and bc.equivalent:
            assert ciu_le(a, c, cfg=FAST).equivalent
        checked += 1


def test_witness_report_shape():
    verdict = ciu_equiv(ValSeq((Int(1),)), ValSeq((Int(2),)))
    report = verdict.to_report()
    assert report["verdict"] == "inequivalent"
    assert set(report["witness"]) == {"stack", "substitution", "left", "right"}
    assert report["seed"] == DEFAULT_SEED


# --- value relation -------------------------------------------------------------


def test_value_rel_examples():
    assert value_rel(Int(5), Int(5))
    assert not value_rel(NIL, VTuple(()))
    c1 = Closure((), (X,), Val(X))
    c2 = Closure((), (X,), ESeq(Val(Atom("a")), Val(X)))
    assert value_rel(c1, c2)


def test_value_rel_closure_negatives():
    c1 = Closure((), (X,), Val(X))
    plus_one = parse("fun(X) -> call 'erlang':'+'(X, 1)")
    c3 = Closure((), plus_one.params, plus_one.body)
    assert not value_rel(c1, c3)
    two_arg = Closure((), (X, Var("Y")), Val(X))
    assert not value_rel(c1, two_arg)


def test_value_rel_zero_budget_only_checks_arity():
    c1 = Closure((), (X,), Val(X))
    c3 = Closure((), (X,), Val(Int(0)))
    assert value_rel(c1, c3, depth_budget=0)
    assert not value_rel(c1, c3, depth_budget=2)


def test_value_rel_coincides_with_equality_when_closure_free():
    from corestack.suites import closure_free_pairs

    accepted, rejected = closure_free_pairs(200)
    for v, w in accepted:
        assert value_rel(v, w)
    for v, w in rejected:
        assert not value_rel(v, w)


def test_values_equal_theorem_checker():
    report = check_values_equal_theorem([(Int(5), Int(5)), (NIL, NIL)])
    assert report == {"checked": 2, "failures": []}
    report = check_values_equal_theorem([(Int(5), Int(6))])
    assert report["failures"]


def test_results_differ_componentwise():
    assert not results_differ(ValSeq((Int(1),)), ValSeq((Int(1),)))
    assert results_differ(ValSeq((Int(1),)), ValSeq((Int(1), Int(2))))
    assert results_differ(
        Exc("error", Atom("a"), NIL), Exc("throw", Atom("a"), NIL)
    )
    assert results_differ(Exc("error", Atom("a"), NIL), ValSeq(()))


def test_mutation_witness_replays():
    from corestack.suites import (
        LENGTH_GUARD_PROGRAM,
        LENGTH_PATTERN_SWAPPED_PROGRAM,
        program_body,
    )

    guard, gamma = program_body(LENGTH_GUARD_PROGRAM)
    swapped, _ = program_body(LENGTH_PATTERN_SWAPPED_PROGRAM)
    cfg = EquivConfig(fuel=20_000, num_stacks=6, num_substitutions=4)
    verdict = ciu_equiv(guard, swapped, gamma, cfg)
    assert verdict.inequivalent
    left, right = replay_witness(guard, swapped, verdict.witness, cfg.fuel)
    assert (left, right) == (verdict.witness.left, verdict.witness.right)


def test_value_rel_is_equality_on_enumerated_closure_free_values():
    from corestack.gen import enum_values, free_of_closures

    pool = [v for v in enum_values() if free_of_closures(v)]
    from corestack.syntax import VCons, VTuple

    pool += [VCons(a, b) for a in pool[:4] for b in pool[:4]]
    pool += [VTuple((a,)) for a in pool[:8]]
    for v in pool:
        for w in pool:
            assert value_rel(v, w) == (v == w), (v, w)


def test_refactoring_pair_under_generated_substitutions():
    from corestack.suites import (
        LENGTH_GUARD_PROGRAM,
        LENGTH_PATTERN_PROGRAM,
        program_body,
    )

    guard, gamma = program_body(LENGTH_GUARD_PROGRAM)
    pattern, _ = program_body(LENGTH_PATTERN_PROGRAM)
    cfg = EquivConfig(fuel=20_000, num_stacks=8, num_substitutions=12)
    verdict = ciu_le(guard, pattern, gamma, cfg)
    assert verdict.equivalent
    assert ciu_le(pattern, guard, gamma, cfg).equivalent
