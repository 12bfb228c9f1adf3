"""Seeded, deterministic term generation.

Everything here draws from an explicit ``random.Random`` so any corpus is
reproducible from its seed.  The expression generator produces well-formed
terms whose free names stay inside the requested scope; it never emits
self-referential recursion, so generated programs terminate (builtin
exceptions included).  Divergent probes are built explicitly with
:func:`omega`.
"""

from __future__ import annotations

import itertools
from random import Random
from typing import Iterable, Iterator

from .bifs import ApplyId, CallId, MapId, PrimOpId, TupleId, ValuesId
from .machine import (
    Configuration,
    FAppFn,
    FCallFunction,
    FCallModule,
    FCaseGuard,
    FCaseScrutinee,
    FConsHead,
    FConsTail,
    FLet,
    FParams,
    FSeq,
    FTry,
    Frame,
    FrameStack,
)
from .subst import Substitution
from .syntax import (
    BOX,
    Atom,
    Clause,
    Closure,
    ECall,
    ECase,
    ECons,
    EFun,
    ELet,
    ELetRec,
    EMap,
    EPrimOp,
    ESeq,
    ETry,
    ETuple,
    EApply,
    EValues,
    Exc,
    Expression,
    FunDef,
    FunId,
    Int,
    NIL,
    Nil,
    PCons,
    PMap,
    PTuple,
    Pattern,
    Val,
    ValSeq,
    Value,
    VCons,
    VMap,
    VTuple,
    Var,
    make_map,
)

ATOM_POOL = ("a", "b", "ok", "left", "right")


def omega() -> Expression:
    """A closed expression with no terminating reduction sequence."""
    loop = FunId("loop", 0)
    body = EApply(Val(loop), ())
    return ELetRec((FunDef(loop, (), body),), body)


class TermGen:
    """Random closed terms, frames, stacks, and closing substitutions."""

    def __init__(self, rng: Random):
        self.rng = rng
        self._fresh = itertools.count()

    def fresh_var(self, base: str = "G") -> Var:
        return Var(f"{base}{next(self._fresh)}")

    # -- values -------------------------------------------------------------

    def value(self, depth: int = 2) -> Value:
        r = self.rng
        if depth <= 0 or r.random() < 0.4:
            return r.choice(
                (
                    Int(r.randint(-3, 5)),
                    Atom(r.choice(ATOM_POOL)),
                    NIL,
                )
            )
        kind = r.randrange(5)
        if kind == 0:
            return VCons(self.value(depth - 1), self.value(depth - 1))
        if kind == 1:
            return VTuple(tuple(self.value(depth - 1) for _ in range(r.randint(0, 3))))
        if kind == 2:
            pairs = [
                (self.value(depth - 1), self.value(depth - 1))
                for _ in range(r.randint(0, 2))
            ]
            return make_map(pairs)
        if kind == 3:
            params = tuple(self.fresh_var("X") for _ in range(r.randint(0, 2)))
            return Closure((), params, self.expression(depth - 1, params))
        return VCons(self.value(depth - 1), NIL)

    def closure(self, arity: int, depth: int = 1) -> Closure:
        params = tuple(self.fresh_var("X") for _ in range(arity))
        return Closure((), params, self.expression(depth, params))

    # -- expressions ---------------------------------------------------------

    def expression(self, depth: int, scope: tuple = ()) -> Expression:
        r = self.rng
        if depth <= 0 or r.random() < 0.3:
            if scope and r.random() < 0.5:
                return Val(r.choice(scope))
            return Val(self.value(0))
        kind = r.randrange(12)
        if kind == 0:
            return ECons(self.expression(depth - 1, scope), self.expression(depth - 1, scope))
        if kind == 1:
            return ETuple(
                tuple(self.expression(depth - 1, scope) for _ in range(r.randint(0, 2)))
            )
        if kind == 2:
            n = r.randint(0, 2)
            return EValues(tuple(self.expression(depth - 1, scope) for _ in range(n)))
        if kind == 3:
            pairs = tuple(
                (self.expression(depth - 1, scope), self.expression(depth - 1, scope))
                for _ in range(r.randint(0, 2))
            )
            return EMap(pairs)
        if kind == 4:
            op = r.choice(("+", "-", "*", "==", "<", "and"))
            args = (self.expression(depth - 1, scope), self.expression(depth - 1, scope))
            return ECall(Val(Atom("erlang")), Val(Atom(op)), args)
        if kind == 5:
            x = self.fresh_var("L")
            return ELet((x,), self.expression(depth - 1, scope), self.expression(depth - 1, scope + (x,)))
        if kind == 6:
            return ESeq(self.expression(depth - 1, scope), self.expression(depth - 1, scope))
        if kind == 7:
            arity = r.randint(0, 2)
            params = tuple(self.fresh_var("X") for _ in range(arity))
            fn = EFun(params, self.expression(depth - 1, scope + params))
            args = tuple(self.expression(depth - 1, scope) for _ in range(arity))
            return EApply(fn, args)
        if kind == 8:
            return self._case(depth, scope)
        if kind == 9:
            x = self.fresh_var("T")
            caught = tuple(self.fresh_var("C") for _ in range(3))
            return ETry(
                self.expression(depth - 1, scope),
                (x,),
                self.expression(depth - 1, scope + (x,)),
                caught,
                self.expression(depth - 1, scope + caught),
            )
        if kind == 10:
            fid = FunId(r.choice(("f", "g")), 0)
            body = self.expression(depth - 1, scope)
            return ELetRec((FunDef(fid, (), body),), EApply(Val(fid), ()))
        return EFun(
            (x := self.fresh_var("X"),), self.expression(depth - 1, scope + (x,))
        )

    def _case(self, depth: int, scope: tuple) -> Expression:
        r = self.rng
        scrutinee = self.expression(depth - 1, scope)
        clauses = []
        for _ in range(r.randint(1, 2)):
            pattern, bound = self.pattern(depth - 1)
            guard = Val(Atom("true")) if r.random() < 0.8 else Val(Atom("false"))
            body = self.expression(depth - 1, scope + tuple(bound))
            clauses.append(Clause((pattern,), guard, body))
        # final catch-all keeps generated cases mostly total
        wild = self.fresh_var("W")
        clauses.append(
            Clause((wild,), Val(Atom("true")), self.expression(depth - 1, scope + (wild,)))
        )
        return ECase(scrutinee, tuple(clauses))

    # -- patterns -----------------------------------------------------------

    def pattern(self, depth: int = 1):
        """A pattern plus the variables it binds."""
        r = self.rng
        if depth <= 0 or r.random() < 0.5:
            pick = r.randrange(3)
            if pick == 0:
                v = self.fresh_var("P")
                return v, [v]
            if pick == 1:
                return Int(r.randint(-2, 3)), []
            return Atom(r.choice(ATOM_POOL)), []
        kind = r.randrange(3)
        if kind == 0:
            head, hb = self.pattern(depth - 1)
            tail, tb = self.pattern(depth - 1)
            return PCons(head, tail), hb + tb
        if kind == 1:
            elems, bound = [], []
            for _ in range(r.randint(0, 2)):
                p, b = self.pattern(depth - 1)
                elems.append(p)
                bound.extend(b)
            return PTuple(tuple(elems)), bound
        key = self.value(0)
        p, b = self.pattern(depth - 1)
        return PMap(((key, p),)), b

    def pattern_of_value(self, v: Value) -> Pattern:
        """An exact-match pattern for a first-order value; closure and
        name positions degrade to fresh variables."""
        match v:
            case Int() | Atom() | Nil():
                return v
            case VCons(head=h, tail=t):
                return PCons(self.pattern_of_value(h), self.pattern_of_value(t))
            case VTuple(elems=es):
                return PTuple(tuple(self.pattern_of_value(e) for e in es))
            case VMap(pairs=ps):
                pairs = []
                for k, w in ps:
                    if free_of_closures(k):
                        pairs.append((value_pattern_exact(k), self.pattern_of_value(w)))
                    else:
                        return self.fresh_var("M")
                return PMap(tuple(pairs))
            case _:
                return self.fresh_var("V")

    # -- frames and stacks ----------------------------------------------------

    def frame(self, depth: int = 1) -> Frame:
        r = self.rng
        kind = r.randrange(11)
        if kind == 0:
            ident = r.choice(
                (
                    TupleId(),
                    ValuesId(),
                    PrimOpId("match_fail"),
                    CallId(Atom("erlang"), Atom(r.choice(("+", "==", "length")))),
                    ApplyId(self.closure(r.randint(0, 2), depth)),
                )
            )
            done = tuple(self.value(depth) for _ in range(r.randint(0, 2)))
            todo = tuple(self.expression(depth) for _ in range(r.randint(0, 2)))
            return FParams(ident, done, todo)
        if kind == 1:
            n = r.choice((1, 3))  # odd overall count, map parity invariant
            done = tuple(self.value(depth) for _ in range(r.randint(0, n)))
            todo = tuple(self.expression(depth) for _ in range(n - len(done)))
            return FParams(MapId(), done, todo)
        if kind == 2:
            return FConsTail(self.expression(depth))
        if kind == 3:
            return FConsHead(self.value(depth))
        if kind == 4:
            return FCallModule(
                self.expression(depth),
                tuple(self.expression(depth) for _ in range(r.randint(0, 2))),
            )
        if kind == 5:
            return FCallFunction(
                Atom("erlang"),
                tuple(self.expression(depth) for _ in range(r.randint(0, 2))),
            )
        if kind == 6:
            return FAppFn(tuple(self.expression(depth) for _ in range(r.randint(0, 2))))
        if kind == 7:
            clauses = []
            for _ in range(self.rng.randint(1, 2)):
                p, bound = self.pattern(depth)
                clauses.append(
                    Clause((p,), Val(Atom("true")), self.expression(depth, tuple(bound)))
                )
            return FCaseScrutinee(tuple(clauses))
        if kind == 8:
            xs = tuple(self.fresh_var("X") for _ in range(r.randint(1, 2)))
            return FLet(xs, self.expression(depth, xs))
        if kind == 9:
            return FSeq(self.expression(depth))
        xs = tuple(self.fresh_var("X") for _ in range(r.randint(1, 2)))
        ys = tuple(self.fresh_var("Y") for _ in range(3))
        return FTry(xs, self.expression(depth, xs), ys, self.expression(depth, ys))

    def guard_frame(self, depth: int = 1) -> FCaseGuard:
        values = tuple(self.value(depth) for _ in range(self.rng.randint(0, 2)))
        patterns = tuple(self.pattern(depth)[0] for _ in values)
        rest = []
        for _ in range(self.rng.randint(0, 1)):
            p, bound = self.pattern(depth)
            rest.append(Clause((p,) * len(values) if values else (), Val(Atom("true")), self.expression(depth, tuple(bound))))
        return FCaseGuard(values, patterns, self.expression(depth), tuple(rest))

    def stack(self, max_depth: int = 2, depth: int = 1) -> FrameStack:
        frames = []
        for _ in range(self.rng.randint(0, max_depth)):
            if self.rng.random() < 0.15:
                frames.append(self.guard_frame(depth))
            else:
                frames.append(self.frame(depth))
        return tuple(frames)

    # -- redexes and substitutions ----------------------------------------------

    def redex(self, depth: int = 2):
        r = self.rng.random()
        if r < 0.70:
            return self.expression(depth)
        if r < 0.85:
            return ValSeq(tuple(self.value(depth - 1) for _ in range(self.rng.randint(0, 2))))
        return Exc(
            self.rng.choice(("throw", "exit", "error")),
            self.value(depth - 1),
            self.value(depth - 1),
        )

    def substitution(self, gamma: Iterable, value_depth: int = 2) -> Substitution:
        bindings = {}
        for name in sorted(gamma, key=_name_sort_key):
            if isinstance(name, FunId) and self.rng.random() < 0.7:
                bindings[name] = self.closure(name.arity, value_depth - 1)
            else:
                bindings[name] = self.value(value_depth)
        return Substitution(bindings)


def _name_sort_key(name) -> tuple:
    if isinstance(name, Var):
        return (0, name.name, 0)
    return (1, name.atom, name.arity)


def free_of_closures(v: Value) -> bool:
    match v:
        case Int() | Atom() | Nil():
            return True
        case VCons(head=h, tail=t):
            return free_of_closures(h) and free_of_closures(t)
        case VTuple(elems=es):
            return all(free_of_closures(e) for e in es)
        case VMap(pairs=ps):
            return all(free_of_closures(k) and free_of_closures(w) for k, w in ps)
        case _:
            return False


def value_pattern_exact(v: Value) -> Pattern:
    """The pattern denoting exactly a closure-free, name-free value."""
    match v:
        case Int() | Atom() | Nil():
            return v
        case VCons(head=h, tail=t):
            return PCons(value_pattern_exact(h), value_pattern_exact(t))
        case VTuple(elems=es):
            return PTuple(tuple(value_pattern_exact(e) for e in es))
        case VMap(pairs=ps):
            return PMap(tuple((value_pattern_exact(k), value_pattern_exact(w)) for k, w in ps))
    raise ValueError(f"no exact pattern for {v!r}")


# ---------------------------------------------------------------------------
# deterministic enumeration, for the determinism corpus


def enum_values() -> tuple:
    base = (Int(0), Int(1), Atom("a"), Atom("true"), Atom("false"), NIL)
    level1 = (
        VCons(Int(1), NIL),
        VCons(Atom("a"), VCons(Int(0), NIL)),
        VTuple(()),
        VTuple((Int(1), Atom("a"))),
        make_map(()),
        make_map(((Int(1), Atom("a")),)),
        Closure((), (Var("X"),), Val(Var("X"))),
        Closure((), (), Val(Atom("ok"))),
    )
    return base + level1


def enum_expressions(depth: int = 3) -> tuple:
    """A fixed expression pool covering every constructor, nested to the
    requested depth."""
    vals = tuple(Val(v) for v in enum_values())
    x = Var("X")

    def layer(subs: tuple) -> tuple:
        a, b = subs[0], subs[1 % len(subs)]
        cl = Clause((x,), Val(Atom("true")), a)
        cl_fail = Clause((Int(7),), Val(Atom("true")), a)
        cl_false = Clause((x,), Val(Atom("false")), a)
        return (
            ECons(a, b),
            ETuple(()),
            ETuple((a,)),
            ETuple((a, b)),
            EValues(()),
            EValues((a, b)),
            EMap(()),
            EMap(((a, b),)),
            ECall(Val(Atom("erlang")), Val(Atom("+")), (a, b)),
            ECall(Val(Atom("erlang")), Val(Atom("length")), (a,)),
            EPrimOp("match_fail", (ETuple((Val(Atom("function_clause")), a)),)),
            EApply(EFun((x,), Val(x)), (a,)),
            EApply(EFun((), b), ()),
            ECase(a, (cl,)),
            ECase(a, (cl_fail, cl)),
            ECase(a, (cl_false, cl)),
            ECase(a, ()),
            ELet((x,), a, Val(x)),
            ELet((x,), a, b),
            ESeq(a, b),
            ELetRec((FunDef(FunId("f", 0), (), Val(Atom("ok"))),), EApply(Val(FunId("f", 0)), ())),
            ETry(a, (x,), Val(x), (Var("C1"), Var("C2"), Var("C3")), b),
            EFun((x,), Val(x)),
        )

    pool = vals
    current = vals
    for _ in range(depth - 1):
        current = layer(current)
        pool = pool + current
    return pool


def enum_frames() -> tuple:
    """One frame per shape, with small contents."""
    x = Var("X")
    e_ok = Val(Atom("ok"))
    v1 = Int(1)
    cl = Clause((x,), Val(Atom("true")), Val(x))
    cl_int = Clause((Int(3),), Val(Atom("true")), e_ok)
    return (
        FParams(TupleId(), (), ()),
        FParams(TupleId(), (v1,), (e_ok,)),
        FParams(ValuesId(), (), (e_ok, e_ok)),
        FParams(MapId(), (v1,), ()),
        FParams(MapId(), (), (e_ok,)),
        FParams(PrimOpId("match_fail"), (), ()),
        FParams(CallId(Atom("erlang"), Atom("+")), (v1,), ()),
        FParams(CallId(Atom("erlang"), Atom("length")), (), ()),
        FParams(ApplyId(Closure((), (x,), Val(x))), (), ()),
        FConsTail(e_ok),
        FConsHead(v1),
        FCallModule(Val(Atom("length")), (e_ok,)),
        FCallFunction(Atom("erlang"), (e_ok,)),
        FAppFn((e_ok,)),
        FCaseScrutinee((cl,)),
        FCaseScrutinee((cl_int, cl)),
        FCaseScrutinee(()),
        FCaseGuard((v1,), (x,), e_ok, (cl,)),
        FCaseGuard((), (), e_ok, ()),
        FLet((x,), Val(x)),
        FLet((x, Var("Y")), e_ok),
        FSeq(e_ok),
        FTry((x,), Val(x), (Var("C1"), Var("C2"), Var("C3")), e_ok),
    )


def enum_redexes() -> tuple:
    seqs = (
        ValSeq(()),
        ValSeq((Int(1),)),
        ValSeq((Atom("true"),)),
        ValSeq((Atom("false"),)),
        ValSeq((Int(1), Int(2))),
        ValSeq((Closure((), (Var("X"),), Val(Var("X"))),)),
    )
    excs = (
        Exc("error", Atom("badarg"), Int(0)),
        Exc("throw", Atom("a"), VTuple(())),
    )
    return enum_expressions(2) + seqs + excs + (BOX,)


def enum_configurations(min_count: int = 10_000) -> Iterator[Configuration]:
    """Deterministic product of enumerated stacks (depth up to two frames)
    and redexes; yields at least ``min_count`` configurations."""
    frames = enum_frames()
    stacks = [()]
    stacks += [(f,) for f in frames]
    stacks += [(f, g) for f in frames for g in frames]
    count = 0
    for stack in stacks:
        for redex in enum_redexes():
            yield Configuration(tuple(stack), redex)
            count += 1
    if count < min_count:
        raise AssertionError(f"enumeration too small: {count}")
