"""Single steps, golden traces, and the machine meta-properties."""

from random import Random

from corestack.bifs import MapId, TupleId
from corestack.gen import TermGen, omega
from corestack.machine import (
    Completed,
    Configuration,
    FCaseGuard,
    FCaseScrutinee,
    FConsHead,
    FConsTail,
    FLet,
    FParams,
    FSeq,
    Final,
    OutOfFuel,
    Stepped,
    Stuck,
    config_closed,
    eval_star,
    plug,
    run_trace,
    stack_concat,
    step,
    terminates,
)
from corestack.syntax import (
    BOX,
    NIL,
    Atom,
    Clause,
    Closure,
    ECase,
    ECons,
    ELet,
    EMap,
    ESeq,
    ETuple,
    EValues,
    Exc,
    Int,
    Val,
    ValSeq,
    VMap,
    VTuple,
    Var,
    free_names,
)
from corestack.suites import (
    GOLDEN_EXC_RULES,
    GOLDEN_NIL_RULES,
    LENGTH_GUARD_PROGRAM,
    determinism_suite,
    extend_stack_suite,
    frame_plug_suite,
    golden_traces,
    termination_prefix_suite,
)
from corestack.parser import parse, parse_unit, unit_expression

X, Y = Var("X"), Var("Y")
OK = Val(Atom("ok"))


def rule_of(config):
    out = step(config)
    assert isinstance(out, Stepped)
    return out.rule, out.config


# --- single-step goldens ----------------------------------------------------


def test_cons_is_right_to_left():
    e1, e2 = Val(Int(1)), Val(Int(2))
    rule, after = rule_of(Configuration((), ECons(e1, e2)))
    assert rule == "SConsTail"
    assert after == Configuration((FConsTail(e1),), e2)


def test_value_reduces_to_singleton_sequence():
    rule, after = rule_of(Configuration((), Val(Atom("ok"))))
    assert rule == "PValue"
    assert after == Configuration((), ValSeq((Atom("ok"),)))


def test_exception_pops_non_try_frame():
    exc = Exc("throw", Atom("a"), Atom("b"))
    rule, after = rule_of(Configuration((FSeq(OK),), exc))
    assert rule == "ExcProp"
    assert after == Configuration((), exc)


def test_empty_clause_list_raises_if_clause():
    rule, after = rule_of(Configuration((FCaseScrutinee(()),), ValSeq((Int(1),))))
    assert rule == "ExcCase"
    assert after == Configuration((), Exc("error", Atom("if_clause"), VTuple(())))


def test_fun_closes_with_empty_ext():
    rule, after = rule_of(Configuration((), parse("fun(X) -> X")))
    assert rule == "PFun"
    assert after.redex == ValSeq((Closure((), (X,), Val(X)),))


def test_case_success_substitutes_guard_and_body():
    cl1 = Clause((X,), Val(X), ECons(Val(X), Val(NIL)))
    cl2 = Clause((Y,), Val(Atom("true")), Val(Y))
    config = Configuration((FCaseScrutinee((cl1, cl2)),), ValSeq((Atom("b"),)))
    rule, after = rule_of(config)
    assert rule == "SCaseSuccess"
    guard_frame = after.stack[0]
    assert isinstance(guard_frame, FCaseGuard)
    assert after.redex == Val(Atom("b"))
    assert guard_frame.body == ECons(Val(Atom("b")), Val(NIL))
    assert guard_frame.rest == (cl2,)


def test_map_empty_and_nonempty():
    rule, after = rule_of(Configuration((), EMap(())))
    assert rule == "PMap0" and after.redex == ValSeq((VMap(()),))
    e = EMap(((Val(Int(1)), Val(Int(2))), (Val(Int(3)), Val(Int(4)))))
    rule, after = rule_of(Configuration((), e))
    assert rule == "SMap"
    frame = after.stack[0]
    assert isinstance(frame, FParams) and isinstance(frame.ident, MapId)
    assert after.redex == Val(Int(1))
    assert len(frame.todo) == 3 and not frame.done


def test_map_parity_holds_along_the_run():
    e = parse("~{1=>'a',2=>'b',1=>'c'}~")
    records, out = run_trace(Configuration((), e), 100)
    for record in records:
        for frame in record.config.stack:
            if isinstance(frame, FParams) and isinstance(frame.ident, MapId):
                assert (len(frame.done) + len(frame.todo)) % 2 == 1
    assert out.result == ValSeq(
        (VMap(((Int(1), Atom("c")), (Int(2), Atom("b")))),)
    )


def test_params_rules_on_empty_and_nonempty_lists():
    frame = FParams(TupleId(), (), ())
    out = step(Configuration((frame,), BOX))
    assert isinstance(out, Stepped) and out.rule == "PParams0"
    assert out.config.redex == ValSeq((VTuple(()),))

    frame = FParams(TupleId(), (), (OK,))
    out = step(Configuration((frame,), BOX))
    assert isinstance(out, Stepped) and out.rule == "SParams0"
    assert out.config == Configuration((FParams(TupleId(), (), ()),), OK)


def test_stuck_configurations():
    assert isinstance(step(Configuration((), BOX)), Stuck)
    assert isinstance(step(Configuration((FSeq(OK),), BOX)), Stuck)
    # binder arity mismatch sticks rather than raising
    out = step(Configuration((FLet((X, Y), Val(X)),), ValSeq((Int(1),))))
    assert isinstance(out, Stuck)
    # non-boolean guard value sticks
    guard = FCaseGuard((Int(1),), (X,), OK, ())
    assert isinstance(step(Configuration((guard,), ValSeq((Int(5),)))), Stuck)
    # box on map frames is never legal
    assert isinstance(step(Configuration((FParams(MapId(), (), ()),), BOX)), Stuck)


def test_final_only_on_empty_stack():
    assert step(Configuration((), ValSeq((Int(1),)))) == Final(ValSeq((Int(1),)))
    exc = Exc("exit", Atom("x"), NIL)
    assert step(Configuration((), exc)) == Final(exc)
    out = step(Configuration((FSeq(OK),), ValSeq((Int(1),))))
    assert isinstance(out, Stepped)


# --- eval_star / terminates ---------------------------------------------------


def test_eval_star_single_value():
    out = eval_star(Configuration((), Val(Int(1))), 1)
    assert out == Completed(ValSeq((Int(1),)), 1)


def test_eval_star_out_of_fuel_on_divergence():
    out = eval_star(Configuration((), omega()), 1000)
    assert isinstance(out, OutOfFuel)


def test_letrec_application():
    e = parse("letrec 'f'/0 = fun() -> 'ok' in apply 'f'/0()")
    out = eval_star(Configuration((), e), 100)
    assert out.result == ValSeq((Atom("ok"),))


def test_mutual_recursion_through_ext():
    src = """
    letrec
      'even'/1 = fun(N) -> case call 'erlang':'=='(N, 0) of
          <'true'> when 'true' -> 'true';
          <'false'> when 'true' -> apply 'odd'/1(call 'erlang':'-'(N, 1))
        end
      'odd'/1 = fun(N) -> case call 'erlang':'=='(N, 0) of
          <'true'> when 'true' -> 'false';
          <'false'> when 'true' -> apply 'even'/1(call 'erlang':'-'(N, 1))
        end
    in apply 'even'/1(10)
    """
    out = eval_star(Configuration((), parse(src)), 10_000)
    assert out.result == ValSeq((Atom("true"),))


def test_terminates_flags():
    assert terminates((), ValSeq((Atom("a"),)), 0).ok
    assert terminates((), ValSeq((Atom("a"),)), 0).steps == 0
    stuck = terminates((), BOX, 10)
    assert not stuck.ok and not stuck.unknown
    fuel = terminates((), omega(), 50)
    assert not fuel.ok and fuel.unknown


# --- golden traces ------------------------------------------------------------


def test_golden_trace_suite():
    for result in golden_traces():
        assert result.passed, result.detail


def test_golden_rule_sequences_verbatim():
    unit = parse_unit(LENGTH_GUARD_PROGRAM)
    records, out = run_trace(Configuration((), unit_expression(unit, [NIL])), 10_000)
    assert out.result == ValSeq((Int(1),))
    rules = [r.rule for r in records]
    it = iter(rules)
    assert all(name in it for name in GOLDEN_NIL_RULES)

    records, out = run_trace(Configuration((), unit_expression(unit, [Int(0)])), 10_000)
    assert out.result == ValSeq((Int(2),))
    rules = [r.rule for r in records]
    it = iter(rules)
    assert all(name in it for name in GOLDEN_EXC_RULES)


# --- plugging -----------------------------------------------------------------


def test_plug_simple_frames():
    e = Val(Int(1))
    assert plug(FSeq(OK), e) == ESeq(e, OK)
    assert plug(FConsHead(Int(2)), e) == ECons(e, Val(Int(2)))
    assert plug(FConsTail(OK), e) == ECons(OK, e)
    assert plug(FLet((X,), Val(X)), e) == ELet((X,), e, Val(X))
    assert plug(FParams(TupleId(), (Int(9),), (OK,)), e) == ETuple(
        (Val(Int(9)), e, OK)
    )


def test_plug_case_guard_wraps_twice():
    frame = FCaseGuard((Int(3),), (X,), Val(Int(1)), ())
    plugged = plug(frame, Val(Atom("true")))
    assert isinstance(plugged, ECase)
    assert plugged.scrutinee == EValues(())
    first, second = plugged.clauses
    assert first.patterns == () and first.guard == Val(Atom("true"))
    assert first.body == Val(Int(1))
    inner = second.body
    assert inner == ECase(EValues((Val(Int(3)),)), ())
    # and the plugged term behaves like the frame did
    out = eval_star(Configuration((), plugged), 100)
    assert out.result == ValSeq((Int(1),))


def test_stack_concat():
    f, g = FSeq(OK), FConsHead(Int(1))
    assert stack_concat((), (f,)) == (f,)
    assert stack_concat((f,), ()) == (f,)
    assert stack_concat((f,), (g,)) == (f, g)


# --- properties ----------------------------------------------------------------


def test_determinism_on_sample():
    result = determinism_suite(3000)
    assert result.passed, result.detail


def test_extend_stack_property():
    result = extend_stack_suite(runs=120, seed=5)
    assert result.passed, result.detail


def test_termination_prefix_property():
    result = termination_prefix_suite(runs=120, seed=6)
    assert result.passed, result.detail


def test_frame_plug_property():
    result = frame_plug_suite(runs=120, seed=8, fuel=20_000)
    assert result.passed, result.detail


def test_step_preserves_closedness():
    g = TermGen(Random(99))
    checked = 0
    while checked < 200:
        config = Configuration(g.stack(2), g.redex(2))
        if not config_closed(config):
            continue
        out = step(config)
        if isinstance(out, Stepped):
            assert config_closed(out.config), out
        checked += 1


def test_values_only_step_by_pvalue():
    g = TermGen(Random(17))
    for _ in range(100):
        v = g.value(2)
        if free_names(v):
            continue
        out = step(Configuration(g.stack(1), Val(v)))
        assert isinstance(out, Stepped) and out.rule == "PValue"


def test_format_configuration_renders_stack_and_redex():
    from corestack.printer import format_configuration

    config = Configuration((FSeq(OK),), Val(Int(1)))
    text = format_configuration(config)
    assert "do" in text and "1" in text
    assert format_configuration(Configuration((), BOX))


def test_map_parity_on_generated_runs():
    g = TermGen(Random(123))
    runs = 0
    while runs < 60:
        expr = g.expression(3)
        if free_names(expr):
            continue
        records, _ = run_trace(Configuration((), expr), 500)
        for record in records:
            for frame in record.config.stack:
                if isinstance(frame, FParams) and isinstance(frame.ident, MapId):
                    assert (len(frame.done) + len(frame.todo)) % 2 == 1
        runs += 1
