"""The frame-stack machine.

A configuration is a stack of evaluation frames plus the redex currently
being reduced (an expression, a value sequence, an exception, or the box
placeholder that opens a pending parameter list).  ``step`` applies the one
reduction rule that fits; rule guards are disjoint, which ``applicable_rules``
re-states independently so determinism is a tested property rather than an
assumption.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .bifs import ApplyId, CallId, FrameId, MapId, PrimOpId, TupleId, ValuesId, eval_id
from .matching import match, pattern_vars
from .subst import Substitution, apply as subst_apply, mk_closlist
from .syntax import (
    BOX,
    Atom,
    Box,
    Clause,
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
    Closure,
    Redex,
    Result,
    Val,
    ValSeq,
    Value,
    VCons,
    VMap,
    VTuple,
    free_names,
)

__all__ = [
    "Frame",
    "FrameStack",
    "Configuration",
    "Stepped",
    "Final",
    "Stuck",
    "step",
    "applicable_rules",
    "Completed",
    "OutOfFuel",
    "StuckEval",
    "eval_star",
    "run_trace",
    "Termination",
    "terminates",
    "plug",
    "stack_concat",
    "mk_closlist",
    "frame_free_names",
    "stack_free_names",
    "config_closed",
    "initial",
]


# ---------------------------------------------------------------------------
# frames


@dataclass(frozen=True)
class FParams:
    """The parameter-list frame ``id(v1,...,□,...,en)``: already-evaluated
    values in ``done``, pending expressions in ``todo``."""

    ident: FrameId
    done: tuple
    todo: tuple

    def __post_init__(self):
        object.__setattr__(self, "done", tuple(self.done))
        object.__setattr__(self, "todo", tuple(self.todo))


@dataclass(frozen=True)
class FConsTail:
    """``[e1|□]``: evaluating the tail, head expression pending."""

    head: Expression


@dataclass(frozen=True)
class FConsHead:
    """``[□|v2]``: evaluating the head, tail value done."""

    tail: Value


@dataclass(frozen=True)
class FCallModule:
    """``call □:ef(e1,...,en)``."""

    function: Expression
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class FCallFunction:
    """``call vm:□(e1,...,en)``."""

    module: Value
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class FAppFn:
    """``apply □(e1,...,en)``."""

    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class FCaseScrutinee:
    """``case □ of cl1;...;cln end``."""

    clauses: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))


@dataclass(frozen=True)
class FCaseGuard:
    """``case vs of ps when □ -> body; rest end``: the matched clause's
    guard is evaluating; its body already carries the match bindings."""

    values: tuple
    patterns: tuple
    body: Expression
    rest: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "patterns", tuple(self.patterns))
        object.__setattr__(self, "rest", tuple(self.rest))


@dataclass(frozen=True)
class FLet:
    """``let <x1,...,xn> = □ in body``."""

    vars: tuple
    body: Expression

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))


@dataclass(frozen=True)
class FSeq:
    """``do □ second``."""

    second: Expression


@dataclass(frozen=True)
class FTry:
    """``try □ of <xs> -> body catch <ys> -> handler``."""

    vars: tuple
    body: Expression
    catch_vars: tuple
    handler: Expression

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "catch_vars", tuple(self.catch_vars))


Frame = Union[
    FParams, FConsTail, FConsHead, FCallModule, FCallFunction, FAppFn,
    FCaseScrutinee, FCaseGuard, FLet, FSeq, FTry,
]

#: Stacks are tuples of frames, top first; the empty tuple is the empty stack.
FrameStack = tuple

EMPTY_STACK: FrameStack = ()


@dataclass(frozen=True)
class Configuration:
    stack: FrameStack
    redex: Redex

    def __post_init__(self):
        object.__setattr__(self, "stack", tuple(self.stack))


def initial(redex: Redex) -> Configuration:
    return Configuration(EMPTY_STACK, redex)


def stack_concat(k1: FrameStack, k2: FrameStack) -> FrameStack:
    return tuple(k1) + tuple(k2)


# ---------------------------------------------------------------------------
# one-step reduction


@dataclass(frozen=True)
class Stepped:
    config: Configuration
    rule: str


@dataclass(frozen=True)
class Final:
    result: Result


@dataclass(frozen=True)
class Stuck:
    reason: str


StepOutcome = Union[Stepped, Final, Stuck]


def _push(stack: FrameStack, frame: Frame) -> FrameStack:
    return (frame,) + stack


def _case_success(frame: FCaseScrutinee, vs: ValSeq, stack: FrameStack) -> Stepped:
    cl = frame.clauses[0]
    binds = match(cl.patterns, vs.values)
    guard_frame = FCaseGuard(
        vs.values, cl.patterns, subst_apply(cl.body, binds), frame.clauses[1:]
    )
    return Stepped(
        Configuration(_push(stack, guard_frame), subst_apply(cl.guard, binds)),
        "SCaseSuccess",
    )


def _step_expression(stack: FrameStack, e: Expression) -> StepOutcome:
    match e:
        case Val(value=v):
            return Stepped(Configuration(stack, ValSeq((v,))), "PValue")
        case ECons(head=h, tail=t):
            return Stepped(Configuration(_push(stack, FConsTail(h)), t), "SConsTail")
        case ELet(vars=xs, bind=b, body=body):
            return Stepped(Configuration(_push(stack, FLet(xs, body)), b), "SLet")
        case ESeq(first=a, second=b):
            return Stepped(Configuration(_push(stack, FSeq(b)), a), "SSeq")
        case EApply(fn=fn, args=args):
            return Stepped(Configuration(_push(stack, FAppFn(args)), fn), "SApp")
        case ECall(module=m, function=f, args=args):
            return Stepped(Configuration(_push(stack, FCallModule(f, args)), m), "SCallMod")
        case EPrimOp(name=name, args=args):
            frame = FParams(PrimOpId(name), (), args)
            return Stepped(Configuration(_push(stack, frame), BOX), "SPrimOp")
        case EValues(elems=es):
            frame = FParams(ValuesId(), (), es)
            return Stepped(Configuration(_push(stack, frame), BOX), "SVals")
        case ETuple(elems=es):
            frame = FParams(TupleId(), (), es)
            return Stepped(Configuration(_push(stack, frame), BOX), "STuple")
        case EMap(pairs=ps):
            if not ps:
                return Stepped(Configuration(stack, ValSeq((VMap(()),))), "PMap0")
            flat = []
            for k, v in ps:
                flat.append(k)
                flat.append(v)
            frame = FParams(MapId(), (), tuple(flat[1:]))
            return Stepped(Configuration(_push(stack, frame), flat[0]), "SMap")
        case ECase(scrutinee=s, clauses=cls):
            return Stepped(Configuration(_push(stack, FCaseScrutinee(cls)), s), "SCase")
        case EFun(params=params, body=body):
            clos = Closure((), params, body)
            return Stepped(Configuration(stack, ValSeq((clos,))), "PFun")
        case ELetRec(defs=defs, body=body):
            return Stepped(
                Configuration(stack, subst_apply(body, mk_closlist(defs))), "PLetRec"
            )
        case ETry(expr=e1, vars=xs, body=e2, catch_vars=ys, handler=e3):
            return Stepped(Configuration(_push(stack, FTry(xs, e2, ys, e3)), e1), "STry")
    return Stuck(f"unknown expression form: {type(e).__name__}")


def _step_seq(stack: FrameStack, vs: ValSeq) -> StepOutcome:
    if not stack:
        return Final(vs)
    frame, rest = stack[0], stack[1:]
    single = vs.values[0] if len(vs.values) == 1 else None
    match frame:
        case FConsTail(head=h):
            if len(vs.values) != 1:
                return Stuck("cons tail needs a singleton value sequence")
            return Stepped(Configuration(_push(rest, FConsHead(single)), h), "SConsHead")
        case FConsHead(tail=t):
            if len(vs.values) != 1:
                return Stuck("cons head needs a singleton value sequence")
            return Stepped(Configuration(rest, ValSeq((VCons(single, t),))), "PCons")
        case FCallModule(function=f, args=args):
            if len(vs.values) != 1:
                return Stuck("call module needs a singleton value sequence")
            return Stepped(
                Configuration(_push(rest, FCallFunction(single, args)), f), "SCallFun"
            )
        case FCallFunction(module=m, args=args):
            if len(vs.values) != 1:
                return Stuck("call function needs a singleton value sequence")
            frame2 = FParams(CallId(m, single), (), args)
            return Stepped(Configuration(_push(rest, frame2), BOX), "SCallParam")
        case FAppFn(args=args):
            if len(vs.values) != 1:
                return Stuck("apply needs a singleton value sequence")
            frame2 = FParams(ApplyId(single), (), args)
            return Stepped(Configuration(_push(rest, frame2), BOX), "SAppParam")
        case FCaseScrutinee(clauses=cls):
            if not cls:
                exc = Exc("error", Atom("if_clause"), VTuple(()))
                return Stepped(Configuration(rest, exc), "ExcCase")
            if match(cls[0].patterns, vs.values) is None:
                return Stepped(
                    Configuration(_push(rest, FCaseScrutinee(cls[1:])), vs), "SCaseFail"
                )
            return _case_success(frame, vs, rest)
        case FCaseGuard(values=held, rest=more):
            if vs.values == (Atom("true"),):
                return Stepped(Configuration(rest, frame.body), "PCaseTrue")
            if vs.values == (Atom("false"),):
                return Stepped(
                    Configuration(_push(rest, FCaseScrutinee(more)), ValSeq(held)),
                    "SCaseFalse",
                )
            return Stuck("guard evaluated to a non-boolean")
        case FLet(vars=xs, body=body):
            if len(vs.values) != len(xs):
                return Stuck("let binder arity differs from value sequence length")
            s = Substitution(dict(zip(xs, vs.values)), _checked=True)
            return Stepped(Configuration(rest, subst_apply(body, s)), "PLet")
        case FSeq(second=b):
            if len(vs.values) != 1:
                return Stuck("do needs a singleton value sequence")
            return Stepped(Configuration(rest, b), "PSeq")
        case FTry(vars=xs, body=body):
            if len(vs.values) != len(xs):
                return Stuck("try binder arity differs from value sequence length")
            s = Substitution(dict(zip(xs, vs.values)), _checked=True)
            return Stepped(Configuration(rest, subst_apply(body, s)), "PTry")
        case FParams(ident=ident, done=done, todo=todo):
            if len(vs.values) != 1:
                return Stuck("parameter lists take singleton value sequences")
            if todo:
                frame2 = FParams(ident, done + (single,), todo[1:])
                return Stepped(Configuration(_push(rest, frame2), todo[0]), "SParams")
            values = done + (single,)
            if isinstance(ident, MapId) and len(values) % 2 != 0:
                return Stuck("map parameter list finished with an odd value count")
            return Stepped(Configuration(rest, eval_id(ident, values)), "PParams")
    return Stuck(f"unknown frame: {type(frame).__name__}")


def _step_exc(stack: FrameStack, exc: Exc) -> StepOutcome:
    if not stack:
        return Final(exc)
    frame, rest = stack[0], stack[1:]
    if isinstance(frame, FTry):
        if len(frame.catch_vars) != 3:
            return Stuck("catch must bind exactly three variables")
        y1, y2, y3 = frame.catch_vars
        s = Substitution(
            {y1: Atom(exc.cls), y2: exc.reason, y3: exc.details}, _checked=True
        )
        return Stepped(Configuration(rest, subst_apply(frame.handler, s)), "ExcTry")
    return Stepped(Configuration(rest, exc), "ExcProp")


def _step_box(stack: FrameStack, _box: Box) -> StepOutcome:
    if not stack:
        return Stuck("box on the empty stack")
    frame, rest = stack[0], stack[1:]
    if not isinstance(frame, FParams):
        return Stuck("box under a non-parameter-list frame")
    if frame.todo:
        if frame.done:
            return Stuck("box with already-evaluated parameters")
        if isinstance(frame.ident, MapId):
            return Stuck("box never opens a map parameter list")
        frame2 = FParams(frame.ident, (), frame.todo[1:])
        return Stepped(Configuration(_push(rest, frame2), frame.todo[0]), "SParams0")
    if isinstance(frame.ident, MapId):
        return Stuck("box never closes a map parameter list")
    return Stepped(Configuration(rest, eval_id(frame.ident, frame.done)), "PParams0")


def step(c: Configuration) -> StepOutcome:
    """Apply the single reduction rule that matches ``c``.  Returns
    ``Final`` on an empty stack holding a result, ``Stuck`` when no rule
    applies."""
    r = c.redex
    if isinstance(r, ValSeq):
        return _step_seq(c.stack, r)
    if isinstance(r, Exc):
        return _step_exc(c.stack, r)
    if isinstance(r, Box):
        return _step_box(c.stack, r)
    return _step_expression(c.stack, r)


# ---------------------------------------------------------------------------
# independent rule guards, for the determinism suite


def _guards():
    def expr_is(cls):
        return lambda K, r: isinstance(r, cls)

    def top(K):
        return K[0] if K else None

    def singleton(r):
        return isinstance(r, ValSeq) and len(r.values) == 1

    return [
        ("SConsTail", lambda K, r: isinstance(r, ECons)),
        ("SLet", expr_is(ELet)),
        ("SSeq", expr_is(ESeq)),
        ("SApp", expr_is(EApply)),
        ("SCallMod", expr_is(ECall)),
        ("SPrimOp", expr_is(EPrimOp)),
        ("SVals", expr_is(EValues)),
        ("STuple", expr_is(ETuple)),
        ("SMap", lambda K, r: isinstance(r, EMap) and bool(r.pairs)),
        ("PMap0", lambda K, r: isinstance(r, EMap) and not r.pairs),
        ("SCase", expr_is(ECase)),
        ("PFun", expr_is(EFun)),
        ("PLetRec", expr_is(ELetRec)),
        ("STry", expr_is(ETry)),
        ("PValue", expr_is(Val)),
        (
            "SConsHead",
            lambda K, r: isinstance(top(K), FConsTail) and singleton(r),
        ),
        (
            "PCons",
            lambda K, r: isinstance(top(K), FConsHead) and singleton(r),
        ),
        (
            "SCallFun",
            lambda K, r: isinstance(top(K), FCallModule) and singleton(r),
        ),
        (
            "SCallParam",
            lambda K, r: isinstance(top(K), FCallFunction) and singleton(r),
        ),
        (
            "SAppParam",
            lambda K, r: isinstance(top(K), FAppFn) and singleton(r),
        ),
        (
            "SCaseFail",
            lambda K, r: isinstance(top(K), FCaseScrutinee)
            and isinstance(r, ValSeq)
            and bool(top(K).clauses)
            and match(top(K).clauses[0].patterns, r.values) is None,
        ),
        (
            "SCaseSuccess",
            lambda K, r: isinstance(top(K), FCaseScrutinee)
            and isinstance(r, ValSeq)
            and bool(top(K).clauses)
            and match(top(K).clauses[0].patterns, r.values) is not None,
        ),
        (
            "ExcCase",
            lambda K, r: isinstance(top(K), FCaseScrutinee)
            and isinstance(r, ValSeq)
            and not top(K).clauses,
        ),
        (
            "PCaseTrue",
            lambda K, r: isinstance(top(K), FCaseGuard)
            and isinstance(r, ValSeq)
            and r.values == (Atom("true"),),
        ),
        (
            "SCaseFalse",
            lambda K, r: isinstance(top(K), FCaseGuard)
            and isinstance(r, ValSeq)
            and r.values == (Atom("false"),),
        ),
        (
            "SParams0",
            lambda K, r: isinstance(top(K), FParams)
            and isinstance(r, Box)
            and not top(K).done
            and bool(top(K).todo)
            and not isinstance(top(K).ident, MapId),
        ),
        (
            "PParams0",
            lambda K, r: isinstance(top(K), FParams)
            and isinstance(r, Box)
            and not top(K).todo
            and not isinstance(top(K).ident, MapId),
        ),
        (
            "SParams",
            lambda K, r: isinstance(top(K), FParams) and singleton(r) and bool(top(K).todo),
        ),
        (
            "PParams",
            lambda K, r: isinstance(top(K), FParams)
            and singleton(r)
            and not top(K).todo
            and (
                not isinstance(top(K).ident, MapId)
                or (len(top(K).done) + 1) % 2 == 0
            ),
        ),
        (
            "PLet",
            lambda K, r: isinstance(top(K), FLet)
            and isinstance(r, ValSeq)
            and len(r.values) == len(top(K).vars),
        ),
        (
            "PSeq",
            lambda K, r: isinstance(top(K), FSeq) and singleton(r),
        ),
        (
            "PTry",
            lambda K, r: isinstance(top(K), FTry)
            and isinstance(r, ValSeq)
            and len(r.values) == len(top(K).vars),
        ),
        (
            "ExcTry",
            lambda K, r: isinstance(top(K), FTry)
            and isinstance(r, Exc)
            and len(top(K).catch_vars) == 3,
        ),
        (
            "ExcProp",
            lambda K, r: bool(K)
            and not isinstance(top(K), FTry)
            and isinstance(r, Exc),
        ),
    ]


_GUARDS = _guards()


def applicable_rules(c: Configuration) -> list:
    """Names of every rule whose guard accepts ``c``, checked one by one.
    Disjointness of the guards is what makes the machine deterministic."""
    return [name for name, guard in _GUARDS if guard(c.stack, c.redex)]


# ---------------------------------------------------------------------------
# multi-step evaluation


@dataclass(frozen=True)
class Completed:
    result: Result
    steps: int


@dataclass(frozen=True)
class OutOfFuel:
    config: Configuration


@dataclass(frozen=True)
class StuckEval:
    reason: str
    config: Configuration


EvalOutcome = Union[Completed, OutOfFuel, StuckEval]


def eval_star(c: Configuration, fuel: int) -> EvalOutcome:
    """Iterate ``step`` at most ``fuel`` times.  Every rule application
    counts, including value-to-sequence and box-opening steps."""
    steps = 0
    while True:
        out = step(c)
        if isinstance(out, Final):
            return Completed(out.result, steps)
        if isinstance(out, Stuck):
            return StuckEval(out.reason, c)
        if steps >= fuel:
            return OutOfFuel(c)
        c = out.config
        steps += 1


@dataclass(frozen=True)
class TraceStep:
    index: int
    rule: str
    config: Configuration


def run_trace(c: Configuration, fuel: int, max_steps: Optional[int] = None):
    """Like :func:`eval_star` but records (rule, pre-configuration) per
    step.  ``max_steps`` cuts the run after exactly that many steps."""
    records = []
    steps = 0
    while True:
        if max_steps is not None and steps >= max_steps:
            return records, OutOfFuel(c)
        out = step(c)
        if isinstance(out, Final):
            return records, Completed(out.result, steps)
        if isinstance(out, Stuck):
            return records, StuckEval(out.reason, c)
        if steps >= fuel:
            return records, OutOfFuel(c)
        records.append(TraceStep(steps, out.rule, c))
        c = out.config
        steps += 1


@dataclass(frozen=True)
class Termination:
    """Result of a bounded termination check.  ``ok`` means a result was
    reached; ``unknown`` flags fuel exhaustion (never counted as a
    divergence proof)."""

    ok: bool
    unknown: bool
    steps: Optional[int]
    result: Optional[Result]
    outcome: EvalOutcome

    def __bool__(self) -> bool:
        return self.ok


def terminates(stack: FrameStack, redex: Redex, fuel: int) -> Termination:
    out = eval_star(Configuration(stack, redex), fuel)
    if isinstance(out, Completed):
        return Termination(True, False, out.steps, out.result, out)
    if isinstance(out, OutOfFuel):
        return Termination(False, True, None, None, out)
    return Termination(False, False, None, None, out)


# ---------------------------------------------------------------------------
# frame plugging F[e]


def _id_expression(ident: FrameId, elems: tuple) -> Expression:
    match ident:
        case TupleId():
            return ETuple(elems)
        case ValuesId():
            return EValues(elems)
        case MapId():
            if len(elems) % 2 != 0:
                raise ValueError("map expression needs an even number of positions")
            return EMap(tuple(zip(elems[::2], elems[1::2])))
        case CallId(module=m, function=f):
            return ECall(Val(m), Val(f), elems)
        case PrimOpId(name=n):
            return EPrimOp(n, elems)
        case ApplyId(fn=fn):
            return EApply(Val(fn), elems)
    raise TypeError(f"not a frame identifier: {ident!r}")


def plug(frame: Frame, e: Expression) -> Expression:
    """Substitute ``e`` for the hole of ``frame``.

    Purely syntactic for every frame except the guard frame: there the
    machine has already substituted the clause's pattern variables, so the
    plugged term re-wraps guard and body in a two-clause case over the
    empty value sequence to avoid substituting them again.
    """
    match frame:
        case FParams(ident=ident, done=done, todo=todo):
            elems = tuple(Val(v) for v in done) + (e,) + tuple(todo)
            return _id_expression(ident, elems)
        case FConsTail(head=h):
            return ECons(h, e)
        case FConsHead(tail=t):
            return ECons(e, Val(t))
        case FCallModule(function=f, args=args):
            return ECall(e, f, args)
        case FCallFunction(module=m, args=args):
            return ECall(Val(m), e, args)
        case FAppFn(args=args):
            return EApply(e, args)
        case FCaseScrutinee(clauses=cls):
            return ECase(e, cls)
        case FCaseGuard(values=vs, body=body, rest=rest):
            fallback = ECase(EValues(tuple(Val(v) for v in vs)), rest)
            return ECase(
                EValues(()),
                (
                    Clause((), e, body),
                    Clause((), Val(Atom("true")), fallback),
                ),
            )
        case FLet(vars=xs, body=body):
            return ELet(xs, e, body)
        case FSeq(second=b):
            return ESeq(e, b)
        case FTry(vars=xs, body=body, catch_vars=ys, handler=h):
            return ETry(e, xs, body, ys, h)
    raise TypeError(f"not a frame: {frame!r}")


# ---------------------------------------------------------------------------
# frame and stack scoping


def _clauses_free(clauses: tuple) -> frozenset:
    out: frozenset = frozenset()
    for cl in clauses:
        bound: frozenset = frozenset()
        for p in cl.patterns:
            bound |= pattern_vars(p)
        out |= (free_names(cl.guard) | free_names(cl.body)) - bound
    return out


def frame_free_names(frame: Frame) -> frozenset:
    match frame:
        case FParams(ident=ident, done=done, todo=todo):
            out: frozenset = frozenset()
            for v in done:
                out |= free_names(v)
            for e in todo:
                out |= free_names(e)
            match ident:
                case CallId(module=m, function=f):
                    out |= free_names(m) | free_names(f)
                case ApplyId(fn=fn):
                    out |= free_names(fn)
            return out
        case FConsTail(head=h):
            return free_names(h)
        case FConsHead(tail=t):
            return free_names(t)
        case FCallModule(function=f, args=args):
            out = free_names(f)
            for a in args:
                out |= free_names(a)
            return out
        case FCallFunction(module=m, args=args):
            out = free_names(m)
            for a in args:
                out |= free_names(a)
            return out
        case FAppFn(args=args):
            out = frozenset()
            for a in args:
                out |= free_names(a)
            return out
        case FCaseScrutinee(clauses=cls):
            return _clauses_free(cls)
        case FCaseGuard(values=vs, body=body, rest=rest):
            out = free_names(body) | _clauses_free(rest)
            for v in vs:
                out |= free_names(v)
            return out
        case FLet(vars=xs, body=body):
            return free_names(body) - frozenset(xs)
        case FSeq(second=b):
            return free_names(b)
        case FTry(vars=xs, body=body, catch_vars=ys, handler=h):
            return (free_names(body) - frozenset(xs)) | (free_names(h) - frozenset(ys))
    raise TypeError(f"not a frame: {frame!r}")


def stack_free_names(stack: FrameStack) -> frozenset:
    out: frozenset = frozenset()
    for frame in stack:
        out |= frame_free_names(frame)
    return out


def config_closed(c: Configuration) -> bool:
    return not stack_free_names(c.stack) and not free_names(c.redex)
