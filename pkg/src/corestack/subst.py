"""Parallel substitutions mapping names to closed values.

Because every substitution the machine performs inserts only closed values
(pattern-match results, closure lists, parameter values), capture cannot
occur; substitutions assert closedness of their range instead of renaming.
Lookups on absent names leave the name in place, so partial substitution is
legal.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .syntax import (
    BOX,
    Box,
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
    FunDef,
    FunId,
    Int,
    Atom,
    Nil,
    Val,
    ValSeq,
    VCons,
    VMap,
    VTuple,
    Var,
    free_names,
    names_of,
    pattern_vars,
)


class Substitution:
    """An immutable finite map from names to closed values."""

    __slots__ = ("bindings",)

    def __init__(self, bindings: Optional[dict] = None, *, _checked: bool = False):
        bindings = dict(bindings) if bindings else {}
        if not _checked:
            for name, value in bindings.items():
                if not isinstance(name, (Var, FunId)):
                    raise ValueError(f"substitution domain must be names, got {name!r}")
                if free_names(value):
                    raise ValueError(f"open value in substitution range: {name!r} -> {value!r}")
        self.bindings = bindings

    def domain(self) -> frozenset:
        return frozenset(self.bindings)

    def get(self, name):
        return self.bindings.get(name)

    def without(self, names: Iterable) -> "Substitution":
        names = frozenset(names)
        if not names & self.domain():
            return self
        return Substitution(
            {n: v for n, v in self.bindings.items() if n not in names}, _checked=True
        )

    def __contains__(self, name) -> bool:
        return name in self.bindings

    def __bool__(self) -> bool:
        return bool(self.bindings)

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self.bindings == other.bindings

    def __repr__(self) -> str:
        inner = ", ".join(f"{n!r}->{v!r}" for n, v in self.bindings.items())
        return f"Substitution({{{inner}}})"


EMPTY = Substitution()


def compose_update(s: Substitution, more: Iterable) -> Substitution:
    """Right-biased union: later bindings override earlier ones."""
    merged = dict(s.bindings)
    for name, value in more:
        if free_names(value):
            raise ValueError(f"open value in substitution update: {name!r} -> {value!r}")
        merged[name] = value
    return Substitution(merged, _checked=True)


def subscoped(gamma: Iterable, s: Substitution) -> bool:
    """True iff ``s`` closes every name in ``gamma`` with closed values."""
    gamma = frozenset(gamma)
    if not gamma <= s.domain():
        return False
    return all(not free_names(v) for v in s.bindings.values())


def mk_closlist(defs: Iterable[FunDef]) -> Substitution:
    """The substitution installing a letrec: each ``f/k`` maps to a closure
    carrying the full definition list, so recursive references resolve at
    application time."""
    defs = tuple(defs)
    return Substitution({d.id: Closure(defs, d.params, d.body) for d in defs})


def _sub_value(v, s: Substitution):
    match v:
        case Var() | FunId():
            hit = s.get(v)
            return v if hit is None else hit
        case Int() | Atom() | Nil():
            return v
        case VCons(head=h, tail=t):
            return VCons(_sub_value(h, s), _sub_value(t, s))
        case VTuple(elems=es):
            return VTuple(tuple(_sub_value(e, s) for e in es))
        case VMap(pairs=ps):
            return VMap(tuple((_sub_value(k, s), _sub_value(w, s)) for k, w in ps))
        case Closure(ext=ext, params=params, body=body):
            inner = s.without(names_of(ext))
            return Closure(
                tuple(_sub_def(d, inner) for d in ext),
                params,
                _sub_expr(body, inner.without(params)),
            )
    raise TypeError(f"not a value: {v!r}")


def _sub_def(d: FunDef, s: Substitution) -> FunDef:
    return FunDef(d.id, d.params, _sub_expr(d.body, s.without(d.params)))


def _sub_clause(cl: Clause, s: Substitution) -> Clause:
    bound: frozenset = frozenset()
    for p in cl.patterns:
        bound |= pattern_vars(p)
    inner = s.without(bound)
    return Clause(cl.patterns, _sub_expr(cl.guard, inner), _sub_expr(cl.body, inner))


def _sub_expr(e, s: Substitution):
    if not s:
        return e
    match e:
        case Val(value=v):
            return Val(_sub_value(v, s))
        case EFun(params=params, body=body):
            return EFun(params, _sub_expr(body, s.without(params)))
        case EValues(elems=es):
            return EValues(tuple(_sub_expr(x, s) for x in es))
        case ECons(head=h, tail=t):
            return ECons(_sub_expr(h, s), _sub_expr(t, s))
        case ETuple(elems=es):
            return ETuple(tuple(_sub_expr(x, s) for x in es))
        case EMap(pairs=ps):
            return EMap(tuple((_sub_expr(k, s), _sub_expr(v, s)) for k, v in ps))
        case ECall(module=m, function=f, args=args):
            return ECall(
                _sub_expr(m, s), _sub_expr(f, s), tuple(_sub_expr(a, s) for a in args)
            )
        case EPrimOp(name=n, args=args):
            return EPrimOp(n, tuple(_sub_expr(a, s) for a in args))
        case EApply(fn=fn, args=args):
            return EApply(_sub_expr(fn, s), tuple(_sub_expr(a, s) for a in args))
        case ECase(scrutinee=scr, clauses=cls):
            return ECase(_sub_expr(scr, s), tuple(_sub_clause(c, s) for c in cls))
        case ELet(vars=xs, bind=b, body=body):
            return ELet(xs, _sub_expr(b, s), _sub_expr(body, s.without(xs)))
        case ESeq(first=a, second=b):
            return ESeq(_sub_expr(a, s), _sub_expr(b, s))
        case ELetRec(defs=defs, body=body):
            inner = s.without(names_of(defs))
            return ELetRec(tuple(_sub_def(d, inner) for d in defs), _sub_expr(body, inner))
        case ETry(expr=e1, vars=xs, body=e2, catch_vars=ys, handler=e3):
            return ETry(
                _sub_expr(e1, s),
                xs,
                _sub_expr(e2, s.without(xs)),
                ys,
                _sub_expr(e3, s.without(ys)),
            )
    raise TypeError(f"not an expression: {e!r}")


def apply(r, s: Substitution):
    """Apply a substitution to a redex, expression, or value.  Bound
    occurrences are untouched: substitution never descends past a binder
    that rebinds the same name."""
    if not s:
        return r
    match r:
        case Box():
            return BOX
        case ValSeq(values=vs):
            return ValSeq(tuple(_sub_value(v, s) for v in vs))
        case Exc(cls=c, reason=rs, details=d):
            return Exc(c, _sub_value(rs, s), _sub_value(d, s))
        case Var() | FunId() | Int() | Atom() | Nil() | VCons() | VTuple() | VMap() | Closure():
            return _sub_value(r, s)
        case _:
            return _sub_expr(r, s)
