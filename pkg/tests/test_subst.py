"""Substitution behavior: shadowing, closedness, idempotence."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corestack.subst import EMPTY, Substitution, apply, compose_update, mk_closlist, subscoped
from corestack.syntax import (
    NIL,
    Atom,
    Closure,
    EApply,
    ELet,
    FunDef,
    FunId,
    Int,
    Val,
    VCons,
    Var,
    check_scope,
    free_names,
)

X, Y = Var("X"), Var("Y")


def test_apply_variable():
    assert apply(Val(X), Substitution({X: Int(5)})) == Val(Int(5))


def test_apply_respects_shadowing():
    e = ELet((X,), Val(X), Val(X))
    out = apply(e, Substitution({X: Int(1)}))
    assert out == ELet((X,), Val(Int(1)), Val(X))


def test_closed_terms_are_fixed_points():
    s = Substitution({X: Int(1)})
    assert apply(Val(Atom("ok")), s) == Val(Atom("ok"))


def test_open_range_rejected():
    with pytest.raises(ValueError):
        Substitution({X: Y})


def test_compose_update():
    assert compose_update(EMPTY, [(X, Int(1))]).bindings == {X: Int(1)}
    assert compose_update(Substitution({X: Int(1)}), [(X, Int(2))]).bindings == {X: Int(2)}
    merged = compose_update(Substitution({X: Int(1)}), [(Y, Int(2))])
    assert merged.bindings == {X: Int(1), Y: Int(2)}


def test_subscoped():
    assert subscoped(frozenset(), EMPTY)
    assert not subscoped({X}, EMPTY)
    assert subscoped({X}, Substitution({X: VCons(Int(1), NIL)}))


def test_mk_closlist_installs_full_ext():
    fid = FunId("f", 0)
    defs = (FunDef(fid, (), Val(Atom("ok"))),)
    s = mk_closlist(defs)
    assert s.bindings == {fid: Closure(defs, (), Val(Atom("ok")))}
    assert mk_closlist(()).bindings == {}


def test_mk_closlist_mutual_recursion_closes():
    f, g = FunId("f", 0), FunId("g", 0)
    defs = (
        FunDef(f, (), EApply(Val(g), ())),
        FunDef(g, (), Val(Atom("done"))),
    )
    s = mk_closlist(defs)
    for clos in s.bindings.values():
        assert not free_names(clos)


def test_partial_substitution_leaves_names():
    assert apply(Val(X), Substitution({Y: Int(1)})) == Val(X)


@st.composite
def open_exprs(draw):
    from corestack.gen import TermGen
    from random import Random

    g = TermGen(Random(draw(st.integers(0, 10_000))))
    return g.expression(2, (X, Y))


@given(open_exprs(), st.integers(-5, 5), st.integers(-5, 5))
def test_closing_substitution_closes(e, a, b):
    gamma = {X, Y}
    assert check_scope(gamma, e)
    s = Substitution({X: Int(a), Y: Int(b)})
    assert check_scope(frozenset(), apply(e, s))


@given(open_exprs(), st.integers(-5, 5))
def test_second_application_is_identity(e, a):
    s = Substitution({X: Int(a), Y: Int(a)})
    once = apply(e, s)
    assert apply(once, s) == once
