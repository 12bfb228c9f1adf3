"""Rendering of terms, results, frames, and configurations.

``format_expression`` is a right inverse of the parser on the source
expression subset: parsing its output reproduces the tree.  Closures and
exceptions render in a display-only notation (``clos(...)`` and
``{...}^X``) that the parser does not accept.
"""

from __future__ import annotations

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
)
from .bifs import ApplyId, CallId, MapId, PrimOpId, TupleId, ValuesId
from .subst import Substitution
from .syntax import (
    Atom,
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
    Nil,
    PCons,
    PMap,
    PTuple,
    Val,
    ValSeq,
    VCons,
    VMap,
    VTuple,
    Var,
)


def _atom_text(name: str) -> str:
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_value(v) -> str:
    match v:
        case Int(value=i):
            return str(i)
        case Atom(name=n):
            return _atom_text(n)
        case Var(name=n):
            return n
        case FunId(atom=a, arity=k):
            return f"{_atom_text(a)}/{k}"
        case Nil():
            return "[]"
        case VCons(head=h, tail=t):
            return f"[{format_value(h)}|{format_value(t)}]"
        case VTuple(elems=es):
            return "{" + ",".join(format_value(e) for e in es) + "}"
        case VMap(pairs=ps):
            inner = ",".join(f"{format_value(k)}=>{format_value(w)}" for k, w in ps)
            return "~{" + inner + "}~"
        case Closure(ext=ext, params=params, body=body):
            fun = f"fun({','.join(p.name for p in params)}) -> {format_expression(body)}"
            if not ext:
                return f"clos({fun})"
            defs = " ".join(_format_def(d) for d in ext)
            return f"clos([{defs}], {fun})"
    raise TypeError(f"not a value: {v!r}")


def format_pattern(p) -> str:
    match p:
        case Int() | Atom() | Var() | Nil():
            return format_value(p)
        case PCons(head=h, tail=t):
            return f"[{format_pattern(h)}|{format_pattern(t)}]"
        case PTuple(elems=es):
            return "{" + ",".join(format_pattern(e) for e in es) + "}"
        case PMap(pairs=ps):
            inner = ",".join(f"{format_pattern(k)}=>{format_pattern(w)}" for k, w in ps)
            return "~{" + inner + "}~"
    raise TypeError(f"not a pattern: {p!r}")


def _format_clause(cl: Clause) -> str:
    ps = "<" + ",".join(format_pattern(p) for p in cl.patterns) + ">"
    return f"{ps} when {format_expression(cl.guard)} -> {format_expression(cl.body)}"


def _format_def(d: FunDef) -> str:
    params = ",".join(p.name for p in d.params)
    return (
        f"{_atom_text(d.id.atom)}/{d.id.arity} = "
        f"fun({params}) -> {format_expression(d.body)}"
    )


def _varlist(xs) -> str:
    return "<" + ",".join(x.name for x in xs) + ">"


def format_expression(e) -> str:
    match e:
        case Val(value=v):
            return format_value(v)
        case EFun(params=params, body=body):
            return f"fun({','.join(p.name for p in params)}) -> {format_expression(body)}"
        case EValues(elems=es):
            return "<" + ",".join(format_expression(x) for x in es) + ">"
        case ECons(head=h, tail=t):
            return f"[{format_expression(h)}|{format_expression(t)}]"
        case ETuple(elems=es):
            return "{" + ",".join(format_expression(x) for x in es) + "}"
        case EMap(pairs=ps):
            inner = ",".join(
                f"{format_expression(k)}=>{format_expression(v)}" for k, v in ps
            )
            return "~{" + inner + "}~"
        case ECall(module=m, function=f, args=args):
            inner = ",".join(format_expression(a) for a in args)
            return f"call {format_expression(m)}:{format_expression(f)}({inner})"
        case EPrimOp(name=n, args=args):
            inner = ",".join(format_expression(a) for a in args)
            return f"primop {_atom_text(n)}({inner})"
        case EApply(fn=fn, args=args):
            inner = ",".join(format_expression(a) for a in args)
            return f"apply {format_expression(fn)}({inner})"
        case ECase(scrutinee=s, clauses=cls):
            body = "; ".join(_format_clause(c) for c in cls)
            return f"case {format_expression(s)} of {body} end"
        case ELet(vars=xs, bind=b, body=body):
            return (
                f"let {_varlist(xs)} = {format_expression(b)} in {format_expression(body)}"
            )
        case ESeq(first=a, second=b):
            return f"do {format_expression(a)} {format_expression(b)}"
        case ELetRec(defs=defs, body=body):
            rendered = " ".join(_format_def(d) for d in defs)
            return f"letrec {rendered} in {format_expression(body)}"
        case ETry(expr=e1, vars=xs, body=e2, catch_vars=ys, handler=e3):
            return (
                f"try {format_expression(e1)} of {_varlist(xs)} -> "
                f"{format_expression(e2)} catch {_varlist(ys)} -> {format_expression(e3)}"
            )
    raise TypeError(f"not an expression: {e!r}")


def format_result(res) -> str:
    match res:
        case ValSeq(values=vs):
            return "<" + ",".join(format_value(v) for v in vs) + ">"
        case Exc(cls=c, reason=r, details=d):
            return (
                "{" + _atom_text(c) + "," + format_value(r) + "," + format_value(d) + "}^X"
            )
    raise TypeError(f"not a result: {res!r}")


HOLE = "\N{WHITE SQUARE}"


def format_redex(r) -> str:
    match r:
        case Box():
            return HOLE
        case ValSeq() | Exc():
            return format_result(r)
        case _:
            return format_expression(r)


def format_frame(frame: Frame) -> str:
    hole = HOLE
    match frame:
        case FParams(ident=ident, done=done, todo=todo):
            parts = [format_value(v) for v in done] + [hole] + [
                format_expression(e) for e in todo
            ]
            match ident:
                case TupleId():
                    name = "tuple"
                case ValuesId():
                    name = "values"
                case MapId():
                    name = "map"
                case PrimOpId(name=n):
                    name = f"primop {_atom_text(n)}"
                case CallId(module=m, function=f):
                    name = f"call({format_value(m)},{format_value(f)})"
                case ApplyId(fn=fn):
                    name = f"apply({format_value(fn)})"
            return f"{name}({','.join(parts)})"
        case FConsTail(head=h):
            return f"[{format_expression(h)}|{hole}]"
        case FConsHead(tail=t):
            return f"[{hole}|{format_value(t)}]"
        case FCallModule(function=f, args=args):
            inner = ",".join(format_expression(a) for a in args)
            return f"call {hole}:{format_expression(f)}({inner})"
        case FCallFunction(module=m, args=args):
            inner = ",".join(format_expression(a) for a in args)
            return f"call {format_value(m)}:{hole}({inner})"
        case FAppFn(args=args):
            inner = ",".join(format_expression(a) for a in args)
            return f"apply {hole}({inner})"
        case FCaseScrutinee(clauses=cls):
            body = "; ".join(_format_clause(c) for c in cls)
            return f"case {hole} of {body} end"
        case FCaseGuard(values=vs, patterns=ps, body=body, rest=rest):
            seq = "<" + ",".join(format_value(v) for v in vs) + ">"
            pats = "<" + ",".join(format_pattern(p) for p in ps) + ">"
            tail = "; ".join(_format_clause(c) for c in rest)
            head = f"{pats} when {hole} -> {format_expression(body)}"
            return f"case {seq} of {head}{'; ' + tail if tail else ''} end"
        case FLet(vars=xs, body=body):
            return f"let {_varlist(xs)} = {hole} in {format_expression(body)}"
        case FSeq(second=b):
            return f"do {hole} {format_expression(b)}"
        case FTry(vars=xs, body=body, catch_vars=ys, handler=h):
            return (
                f"try {hole} of {_varlist(xs)} -> {format_expression(body)} "
                f"catch {_varlist(ys)} -> {format_expression(h)}"
            )
    raise TypeError(f"not a frame: {frame!r}")


def format_stack(stack) -> str:
    if not stack:
        return "\N{GREEK SMALL LETTER EPSILON}"
    return " :: ".join(format_frame(f) for f in stack)


def format_configuration(c: Configuration) -> str:
    return f"< {format_stack(c.stack)} , {format_redex(c.redex)} >"


def format_substitution(s: Substitution) -> str:
    def name_text(n) -> str:
        return n.name if isinstance(n, Var) else f"{_atom_text(n.atom)}/{n.arity}"

    items = sorted(s.bindings.items(), key=lambda kv: name_text(kv[0]))
    inner = ", ".join(f"{name_text(n)} -> {format_value(v)}" for n, v in items)
    return "{" + inner + "}"
