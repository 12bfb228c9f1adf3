"""Pattern matching for clause selection.

``match`` pairs a pattern list against a value sequence and returns the
variable bindings as a substitution, or ``None`` when the match fails;
``is_match`` is its decision form.  Repeated variables follow Erlang
semantics: the first binding wins and later occurrences must be equal to
it.  Map patterns need ground key patterns and match partially, i.e. the
map may contain keys beyond the listed ones.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .subst import Substitution
from .syntax import (
    Atom,
    Int,
    Nil,
    PCons,
    PMap,
    PTuple,
    Pattern,
    Value,
    VCons,
    VMap,
    VTuple,
    Var,
    WILDCARD,
    make_map,
    pattern_vars,
    value_key,
)

#: Result of a failed match; successful matches return a Substitution.
NO_MATCH = None

vars = pattern_vars


def pattern_value(p: Pattern) -> Optional[Value]:
    """The value denoted by a ground (variable-free) pattern, or ``None``
    if the pattern contains variables."""
    match p:
        case Int() | Atom() | Nil():
            return p
        case Var():
            return None
        case PCons(head=h, tail=t):
            hv, tv = pattern_value(h), pattern_value(t)
            return None if hv is None or tv is None else VCons(hv, tv)
        case PTuple(elems=es):
            out = []
            for e in es:
                ev = pattern_value(e)
                if ev is None:
                    return None
                out.append(ev)
            return VTuple(tuple(out))
        case PMap(pairs=ps):
            out = []
            for k, v in ps:
                kv, vv = pattern_value(k), pattern_value(v)
                if kv is None or vv is None:
                    return None
                out.append((kv, vv))
            return make_map(out)
    raise TypeError(f"not a pattern: {p!r}")


def _match_one(p: Pattern, v: Value, binds: dict) -> bool:
    match p:
        case Var(name=n):
            if n == WILDCARD:
                return True
            if p in binds:
                return binds[p] == v
            binds[p] = v
            return True
        case Int() | Atom() | Nil():
            return p == v
        case PCons(head=ph, tail=pt):
            return (
                isinstance(v, VCons)
                and _match_one(ph, v.head, binds)
                and _match_one(pt, v.tail, binds)
            )
        case PTuple(elems=ps):
            if not isinstance(v, VTuple) or len(ps) != len(v.elems):
                return False
            return all(_match_one(pe, ve, binds) for pe, ve in zip(ps, v.elems))
        case PMap(pairs=pps):
            if not isinstance(v, VMap):
                return False
            table = {value_key(k): w for k, w in v.pairs}
            for pk, pv in pps:
                key = pattern_value(pk)
                if key is None:
                    return False
                hit = table.get(value_key(key))
                if hit is None or not _match_one(pv, hit, binds):
                    return False
            return True
    raise TypeError(f"not a pattern: {p!r}")


def match(ps: Iterable[Pattern], vs: Iterable[Value]) -> Optional[Substitution]:
    """Bindings of a successful pairwise match, ``None`` otherwise.
    A length mismatch is a failed match, never an error."""
    ps, vs = tuple(ps), tuple(vs)
    if len(ps) != len(vs):
        return NO_MATCH
    binds: dict = {}
    for p, v in zip(ps, vs):
        if not _match_one(p, v, binds):
            return NO_MATCH
    return Substitution(binds)


def is_match(ps: Iterable[Pattern], vs: Iterable[Value]) -> bool:
    return match(ps, vs) is not None
