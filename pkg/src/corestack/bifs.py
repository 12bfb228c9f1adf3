"""The redex constructor for completed parameter lists.

``eval_id`` takes a frame identifier and the evaluated parameter values and
builds the next redex: closure application, tuple/value-sequence/map
construction, built-in function calls, and primitive operations.  Failures
are expressed as exception results, never as host errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .subst import compose_update, mk_closlist, apply as subst_apply
from .syntax import (
    Atom,
    Closure,
    Exc,
    Int,
    Nil,
    Redex,
    ValSeq,
    Value,
    VCons,
    VTuple,
    compare_values,
    make_map,
    EXC_CLASSES,
)


# ---------------------------------------------------------------------------
# frame identifiers


@dataclass(frozen=True)
class TupleId:
    pass


@dataclass(frozen=True)
class ValuesId:
    pass


@dataclass(frozen=True)
class MapId:
    pass


@dataclass(frozen=True)
class PrimOpId:
    name: str


@dataclass(frozen=True)
class CallId:
    module: Value
    function: Value


@dataclass(frozen=True)
class ApplyId:
    fn: Value


FrameId = Union[TupleId, ValuesId, MapId, PrimOpId, CallId, ApplyId]

TUPLE_ID = TupleId()
VALUES_ID = ValuesId()
MAP_ID = MapId()


# ---------------------------------------------------------------------------
# exception constructors (reason atoms follow Erlang/OTP conventions)


def badarg(offender: Value) -> Exc:
    return Exc("error", Atom("badarg"), offender)


def badfun(offender: Value) -> Exc:
    return Exc("error", Atom("badfun"), offender)


def badarity(offender: Value) -> Exc:
    return Exc("error", Atom("badarity"), offender)


def undef(module: Value, function: Value, arity: int) -> Exc:
    return Exc("error", Atom("undef"), VTuple((module, function, Int(arity))))


# ---------------------------------------------------------------------------
# built-in functions


def _ints(args):
    if all(isinstance(a, Int) for a in args):
        return [a.value for a in args]
    return None


def _first_non_int(args) -> Value:
    for a in args:
        if not isinstance(a, Int):
            return a
    return args[0]


def _arith(fn) -> Callable:
    def impl(args):
        ints = _ints(args)
        if ints is None:
            return badarg(_first_non_int(args))
        return ValSeq((Int(fn(*ints)),))

    return impl


def _trunc_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return -q if (a < 0) != (b < 0) else q


def _div(args):
    ints = _ints(args)
    if ints is None:
        return badarg(_first_non_int(args))
    a, b = ints
    if b == 0:
        return badarg(Int(0))
    return ValSeq((Int(_trunc_div(a, b)),))


def _rem(args):
    ints = _ints(args)
    if ints is None:
        return badarg(_first_non_int(args))
    a, b = ints
    if b == 0:
        return badarg(Int(0))
    return ValSeq((Int(a - b * _trunc_div(a, b)),))


def _bool(b: bool) -> ValSeq:
    return ValSeq((Atom("true") if b else Atom("false"),))


def _compare(fn) -> Callable:
    def impl(args):
        return _bool(fn(compare_values(args[0], args[1])))

    return impl


def _length(args):
    n, v = 0, args[0]
    while isinstance(v, VCons):
        n += 1
        v = v.tail
    if not isinstance(v, Nil):
        return badarg(args[0])
    return ValSeq((Int(n),))


def _hd(args):
    v = args[0]
    return ValSeq((v.head,)) if isinstance(v, VCons) else badarg(v)


def _tl(args):
    v = args[0]
    return ValSeq((v.tail,)) if isinstance(v, VCons) else badarg(v)


def _element(args):
    n, t = args
    if not isinstance(n, Int):
        return badarg(n)
    if not isinstance(t, VTuple):
        return badarg(t)
    if not 1 <= n.value <= len(t.elems):
        return badarg(n)
    return ValSeq((t.elems[n.value - 1],))


def _tuple_size(args):
    t = args[0]
    return ValSeq((Int(len(t.elems)),)) if isinstance(t, VTuple) else badarg(t)


def _as_bool(v: Value):
    if v == Atom("true"):
        return True
    if v == Atom("false"):
        return False
    return None


def _strict_bool2(fn) -> Callable:
    def impl(args):
        a, b = _as_bool(args[0]), _as_bool(args[1])
        if a is None:
            return badarg(args[0])
        if b is None:
            return badarg(args[1])
        return _bool(fn(a, b))

    return impl


def _not(args):
    a = _as_bool(args[0])
    return badarg(args[0]) if a is None else _bool(not a)


#: (module, function, arity) -> native implementation returning a Result.
BIF_TABLE: dict = {
    ("erlang", "+", 2): _arith(lambda a, b: a + b),
    ("erlang", "-", 2): _arith(lambda a, b: a - b),
    ("erlang", "*", 2): _arith(lambda a, b: a * b),
    ("erlang", "div", 2): _div,
    ("erlang", "rem", 2): _rem,
    ("erlang", "==", 2): _compare(lambda c: c == 0),
    ("erlang", "/=", 2): _compare(lambda c: c != 0),
    ("erlang", "<", 2): _compare(lambda c: c < 0),
    ("erlang", "=<", 2): _compare(lambda c: c <= 0),
    ("erlang", ">", 2): _compare(lambda c: c > 0),
    ("erlang", ">=", 2): _compare(lambda c: c >= 0),
    ("erlang", "length", 1): _length,
    ("erlang", "hd", 1): _hd,
    ("erlang", "tl", 1): _tl,
    ("erlang", "element", 2): _element,
    ("erlang", "tuple_size", 1): _tuple_size,
    ("erlang", "and", 2): _strict_bool2(lambda a, b: a and b),
    ("erlang", "or", 2): _strict_bool2(lambda a, b: a or b),
    ("erlang", "not", 1): _not,
}


def bif_equal(v1: Value, v2: Value) -> Atom:
    """The ``'=='`` builtin: structural equality under the value order."""
    return Atom("true") if compare_values(v1, v2) == 0 else Atom("false")


# ---------------------------------------------------------------------------
# primops


def _match_fail(args) -> Exc:
    if len(args) == 1 and isinstance(args[0], VTuple) and args[0].elems:
        elems = args[0].elems
        if isinstance(elems[0], Atom):
            reason = elems[0]
            details = elems[1] if len(elems) == 2 else VTuple(elems[1:])
            return Exc("error", reason, details)
    return badarg(args[0] if args else VTuple(()))


def _raise(args) -> Exc:
    if len(args) == 2 and isinstance(args[0], Atom) and args[0].name in EXC_CLASSES:
        return Exc(args[0].name, args[1], VTuple(()))
    return badarg(args[0] if args else VTuple(()))


def eval_id(ident: FrameId, args) -> Redex:
    """Construct the next redex from a frame identifier and its evaluated
    parameter values."""
    args = tuple(args)
    match ident:
        case ApplyId(fn=fn):
            if not isinstance(fn, Closure):
                return badfun(fn)
            if len(args) != fn.arity:
                return badarity(fn)
            s = compose_update(mk_closlist(fn.ext), zip(fn.params, args))
            return subst_apply(fn.body, s)
        case TupleId():
            return ValSeq((VTuple(args),))
        case ValuesId():
            return ValSeq(args)
        case MapId():
            if len(args) % 2 != 0:
                raise ValueError("map construction needs an even number of values")
            return ValSeq((make_map(zip(args[::2], args[1::2])),))
        case CallId(module=m, function=f):
            if isinstance(m, Atom) and isinstance(f, Atom):
                impl = BIF_TABLE.get((m.name, f.name, len(args)))
                if impl is not None:
                    return impl(args)
            return undef(m, f, len(args))
        case PrimOpId(name=name):
            if name == "match_fail":
                return _match_fail(args)
            if name == "raise":
                return _raise(args)
            return Exc("error", Atom("undef"), Atom(name))
    raise TypeError(f"not a frame identifier: {ident!r}")
