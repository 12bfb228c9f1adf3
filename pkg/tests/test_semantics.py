"""End-to-end program behaviors covering the subtler rule interactions."""

import pytest

from corestack.machine import Completed, StuckEval, eval_star, initial
from corestack.equiv import EquivConfig, ciu_le
from corestack.parser import parse
from corestack.printer import format_result
from corestack.syntax import Atom, Int, ValSeq

FAST = EquivConfig(fuel=500, num_stacks=4, num_substitutions=2)


def run(src: str, fuel: int = 10_000):
    return eval_star(initial(parse(src)), fuel)


def result_text(src: str) -> str:
    out = run(src)
    assert isinstance(out, Completed), out
    return format_result(out.result)


def test_multi_value_let():
    assert result_text("let <X,Y> = <1,2> in {X,Y}") == "<{1,2}>"


def test_multi_value_case():
    assert result_text("case <1,2> of <X,Y> when 'true' -> X end") == "<1>"


def test_raise_binds_all_three_exception_parts():
    src = "try primop 'raise'('throw', 42) of <V> -> 'no' catch <C,R,D> -> {C,R,D}"
    assert result_text(src) == "<{'throw',42,{}}>"


def test_closure_escaping_letrec_reaches_sibling():
    src = """
    letrec 'f'/1 = fun(X) -> call 'erlang':'+'(X, 1)
           'g'/0 = fun() -> fun(Y) -> apply 'f'/1(Y)
    in apply (apply 'g'/0())(41)
    """
    assert result_text(src) == "<42>"


def test_inner_letrec_shadows_outer():
    src = "letrec 'f'/0 = fun() -> 'a' in letrec 'f'/0 = fun() -> 'b' in apply 'f'/0()"
    assert result_text(src) == "<'b'>"


def test_exception_during_map_key_evaluation():
    assert result_text("~{call 'erlang':'hd'([]) => 1}~") == "{'error','badarg',[]}^X"


def test_map_pattern_in_case():
    src = "case ~{1=>'a',2=>'b'}~ of <~{2=>X}~> when 'true' -> X end"
    assert result_text(src) == "<'b'>"


def test_fun_parameter_shadows_let_binding():
    assert result_text("let <X> = 1 in apply fun(X) -> X (2)") == "<2>"


def test_do_requires_single_value():
    assert isinstance(run("do <1,2> 'x'"), StuckEval)


def test_exception_propagates_through_nested_frames_to_try():
    src = "try {1, [2 | call 'erlang':'hd'([]) ]} of <V> -> 'no' catch <C,R,D> -> R"
    assert result_text(src) == "<'badarg'>"


def test_failed_guard_falls_through_then_if_clause():
    src = "case 1 of <X> when 'false' -> 'a' end"
    assert result_text(src) == "{'error','if_clause',{}}^X"


def test_stuck_terms_are_bottom_in_the_preorder():
    stuck = parse("let <X,Y> = <1> in X")
    value = ValSeq((Int(1),))
    # a stuck term never terminates, so it is below everything
    assert ciu_le(stuck, value, cfg=FAST).equivalent
    # and anything terminating is not below it
    assert ciu_le(value, stuck, cfg=FAST).inequivalent


def test_uncaught_exception_is_a_completed_result():
    out = run("call 'erlang':'div'(1, 0)")
    assert isinstance(out, Completed)
    assert format_result(out.result) == "{'error','badarg',0}^X"
