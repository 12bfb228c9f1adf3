"""Term language of sequential Core Erlang: patterns, values, expressions.

Values and non-value expressions are distinct syntactic categories; an
expression is either a value injected via :class:`Val` or one of the
``E``-prefixed non-value forms.  Variables and function identifiers double
as *names*: they are the domain of substitutions and may occur as (open)
values, so a term is closed exactly when no free name remains.

All nodes are frozen dataclasses: immutable after construction, safe to
share between threads, and structurally comparable/hashable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union


def _tup(xs: Iterable) -> tuple:
    return tuple(xs)


# ---------------------------------------------------------------------------
# names (also usable as open values and as pattern leaves)


@dataclass(frozen=True)
class Var:
    """A variable name, e.g. ``X`` or ``_0``."""

    name: str


@dataclass(frozen=True)
class FunId:
    """A function identifier ``'f'/k`` (atom plus arity)."""

    atom: str
    arity: int


Name = Union[Var, FunId]


# ---------------------------------------------------------------------------
# values


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class VCons:
    head: "Value"
    tail: "Value"


@dataclass(frozen=True)
class VTuple:
    elems: tuple

    def __post_init__(self):
        object.__setattr__(self, "elems", _tup(self.elems))


@dataclass(frozen=True)
class VMap:
    """A map value.  Pairs must be key-sorted with no duplicates; build
    canonical maps with :func:`make_map` rather than directly."""

    pairs: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((k, v) for k, v in self.pairs))


@dataclass(frozen=True)
class Closure:
    """A function value: parameter list, body, and the recursive function
    definitions (``ext``) reinstalled at application time."""

    ext: tuple
    params: tuple
    body: "Expression"

    def __post_init__(self):
        object.__setattr__(self, "ext", _tup(self.ext))
        object.__setattr__(self, "params", _tup(self.params))

    @property
    def arity(self) -> int:
        return len(self.params)


Value = Union[Int, Atom, Var, FunId, Nil, VCons, VTuple, VMap, Closure]

NIL = Nil()
TRUE = Atom("true")
FALSE = Atom("false")


# ---------------------------------------------------------------------------
# patterns (Int/Atom/Var/Nil are shared with values)


@dataclass(frozen=True)
class PCons:
    head: "Pattern"
    tail: "Pattern"


@dataclass(frozen=True)
class PTuple:
    elems: tuple

    def __post_init__(self):
        object.__setattr__(self, "elems", _tup(self.elems))


@dataclass(frozen=True)
class PMap:
    """A map pattern.  Pairs stay in written order: patterns are syntax,
    no key dedup happens here."""

    pairs: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((k, v) for k, v in self.pairs))


Pattern = Union[Int, Atom, Var, Nil, PCons, PTuple, PMap]

#: The anonymous pattern variable: matches anything, binds nothing.
WILDCARD = "_"


# ---------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class FunDef:
    """One ``f/k = fun(x1,...,xk) -> e`` item of a letrec/closure ext."""

    id: FunId
    params: tuple
    body: "Expression"

    def __post_init__(self):
        object.__setattr__(self, "params", _tup(self.params))


@dataclass(frozen=True)
class Clause:
    patterns: tuple
    guard: "Expression"
    body: "Expression"

    def __post_init__(self):
        object.__setattr__(self, "patterns", _tup(self.patterns))


@dataclass(frozen=True)
class Val:
    """A value injected into the expression category."""

    value: Value


@dataclass(frozen=True)
class EFun:
    params: tuple
    body: "Expression"

    def __post_init__(self):
        object.__setattr__(self, "params", _tup(self.params))


@dataclass(frozen=True)
class EValues:
    elems: tuple

    def __post_init__(self):
        object.__setattr__(self, "elems", _tup(self.elems))


@dataclass(frozen=True)
class ECons:
    head: "Expression"
    tail: "Expression"


@dataclass(frozen=True)
class ETuple:
    elems: tuple

    def __post_init__(self):
        object.__setattr__(self, "elems", _tup(self.elems))


@dataclass(frozen=True)
class EMap:
    pairs: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((k, v) for k, v in self.pairs))


@dataclass(frozen=True)
class ECall:
    module: "Expression"
    function: "Expression"
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", _tup(self.args))


@dataclass(frozen=True)
class EPrimOp:
    name: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", _tup(self.args))


@dataclass(frozen=True)
class EApply:
    fn: "Expression"
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", _tup(self.args))


@dataclass(frozen=True)
class ECase:
    scrutinee: "Expression"
    clauses: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", _tup(self.clauses))


@dataclass(frozen=True)
class ELet:
    vars: tuple
    bind: "Expression"
    body: "Expression"

    def __post_init__(self):
        object.__setattr__(self, "vars", _tup(self.vars))


@dataclass(frozen=True)
class ESeq:
    first: "Expression"
    second: "Expression"


@dataclass(frozen=True)
class ELetRec:
    defs: tuple
    body: "Expression"

    def __post_init__(self):
        object.__setattr__(self, "defs", _tup(self.defs))


@dataclass(frozen=True)
class ETry:
    expr: "Expression"
    vars: tuple
    body: "Expression"
    catch_vars: tuple
    handler: "Expression"

    def __post_init__(self):
        object.__setattr__(self, "vars", _tup(self.vars))
        object.__setattr__(self, "catch_vars", _tup(self.catch_vars))


NonValue = Union[
    EFun, EValues, ECons, ETuple, EMap, ECall, EPrimOp, EApply,
    ECase, ELet, ESeq, ELetRec, ETry,
]
Expression = Union[Val, NonValue]


# ---------------------------------------------------------------------------
# results and redexes


EXC_CLASSES = ("throw", "exit", "error")


@dataclass(frozen=True)
class Exc:
    """An exception: class plus reason and details values."""

    cls: str
    reason: Value
    details: Value

    def __post_init__(self):
        if self.cls not in EXC_CLASSES:
            raise ValueError(f"bad exception class {self.cls!r}")


@dataclass(frozen=True)
class ValSeq:
    """The value sequence ``<v1,...,vn>`` every expression reduces to."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", _tup(self.values))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Box:
    """The placeholder redex that opens a pending parameter list."""


BOX = Box()

Result = Union[ValSeq, Exc]
Redex = Union[Expression, ValSeq, Exc, Box]


def seq_of(*values: Value) -> ValSeq:
    return ValSeq(values)


def list_value(items: Iterable[Value], tail: Value = NIL) -> Value:
    """Build the list value ``[i1 | [i2 | ... tail]]``."""
    out = tail
    for item in reversed(tuple(items)):
        out = VCons(item, out)
    return out


# ---------------------------------------------------------------------------
# scoping


def names_of(defs: Iterable[FunDef]) -> frozenset:
    """The set of function identifiers bound by a definition list."""
    return frozenset(d.id for d in defs)


def pattern_vars(p: Pattern) -> frozenset:
    """All variables occurring in a pattern.  The wildcard ``_`` binds
    nothing and is excluded."""
    match p:
        case Var(name=n):
            return frozenset() if n == WILDCARD else frozenset((p,))
        case Int() | Atom() | Nil():
            return frozenset()
        case PCons(head=h, tail=t):
            return pattern_vars(h) | pattern_vars(t)
        case PTuple(elems=es):
            return frozenset().union(*(pattern_vars(e) for e in es)) if es else frozenset()
        case PMap(pairs=ps):
            out: frozenset = frozenset()
            for k, v in ps:
                out |= pattern_vars(k) | pattern_vars(v)
            return out
    raise TypeError(f"not a pattern: {p!r}")


def _clause_free(cl: Clause) -> frozenset:
    bound: frozenset = frozenset()
    for p in cl.patterns:
        bound |= pattern_vars(p)
    return (free_names(cl.guard) | free_names(cl.body)) - bound


def _defs_free(defs: tuple) -> frozenset:
    rec = names_of(defs)
    free: frozenset = frozenset()
    for d in defs:
        free |= free_names(d.body) - rec - frozenset(d.params)
    return free


def free_names(term) -> frozenset:
    """Free names of a value, expression, or redex.

    Pattern variables bind in their clause's guard and body; letrec (and a
    closure's ext) binds its function identifiers in every definition body
    and in the main body; fun/let/try bind their listed variables.
    """
    match term:
        case Var() | FunId():
            return frozenset((term,))
        case Int() | Atom() | Nil() | Box():
            return frozenset()
        case VCons(head=h, tail=t) | ECons(head=h, tail=t):
            return free_names(h) | free_names(t)
        case VTuple(elems=es) | ETuple(elems=es) | EValues(elems=es):
            return frozenset().union(*(free_names(e) for e in es)) if es else frozenset()
        case VMap(pairs=ps) | EMap(pairs=ps):
            out: frozenset = frozenset()
            for k, v in ps:
                out |= free_names(k) | free_names(v)
            return out
        case Closure(ext=ext, params=params, body=body):
            return _defs_free(ext) | (free_names(body) - names_of(ext) - frozenset(params))
        case Val(value=v):
            return free_names(v)
        case EFun(params=params, body=body):
            return free_names(body) - frozenset(params)
        case ECall(module=m, function=f, args=args):
            out = free_names(m) | free_names(f)
            for a in args:
                out |= free_names(a)
            return out
        case EPrimOp(args=args):
            out = frozenset()
            for a in args:
                out |= free_names(a)
            return out
        case EApply(fn=fn, args=args):
            out = free_names(fn)
            for a in args:
                out |= free_names(a)
            return out
        case ECase(scrutinee=s, clauses=cls):
            out = free_names(s)
            for cl in cls:
                out |= _clause_free(cl)
            return out
        case ELet(vars=xs, bind=b, body=e):
            return free_names(b) | (free_names(e) - frozenset(xs))
        case ESeq(first=a, second=b):
            return free_names(a) | free_names(b)
        case ELetRec(defs=defs, body=body):
            return _defs_free(defs) | (free_names(body) - names_of(defs))
        case ETry(expr=e1, vars=xs, body=e2, catch_vars=ys, handler=e3):
            return (
                free_names(e1)
                | (free_names(e2) - frozenset(xs))
                | (free_names(e3) - frozenset(ys))
            )
        case ValSeq(values=vs):
            return frozenset().union(*(free_names(v) for v in vs)) if vs else frozenset()
        case Exc(reason=r, details=d):
            return free_names(r) | free_names(d)
    raise TypeError(f"not a term: {term!r}")


def is_closed(term) -> bool:
    return not free_names(term)


def well_formed(term) -> bool:
    """Structural sanity beyond scoping: uniform clause arity per case,
    three catch variables per try, ext arities matching parameter counts,
    canonical map values."""
    match term:
        case Var() | FunId() | Int() | Atom() | Nil() | Box():
            return True
        case VCons(head=h, tail=t) | ECons(head=h, tail=t):
            return well_formed(h) and well_formed(t)
        case VTuple(elems=es) | ETuple(elems=es) | EValues(elems=es):
            return all(well_formed(e) for e in es)
        case VMap(pairs=ps):
            keys = [value_key(k) for k, _ in ps]
            if any(a >= b for a, b in zip(keys, keys[1:])):
                return False
            return all(well_formed(k) and well_formed(v) for k, v in ps)
        case EMap(pairs=ps):
            return all(well_formed(k) and well_formed(v) for k, v in ps)
        case Closure(ext=ext, params=_, body=body):
            return all(
                d.id.arity == len(d.params) and well_formed(d.body) for d in ext
            ) and well_formed(body)
        case Val(value=v):
            return well_formed(v)
        case EFun(body=body):
            return well_formed(body)
        case ECall(module=m, function=f, args=args):
            return well_formed(m) and well_formed(f) and all(well_formed(a) for a in args)
        case EPrimOp(args=args):
            return all(well_formed(a) for a in args)
        case EApply(fn=fn, args=args):
            return well_formed(fn) and all(well_formed(a) for a in args)
        case ECase(scrutinee=s, clauses=cls):
            arities = {len(cl.patterns) for cl in cls}
            if len(arities) > 1:
                return False
            return well_formed(s) and all(
                well_formed(cl.guard) and well_formed(cl.body) for cl in cls
            )
        case ELet(bind=b, body=e):
            return well_formed(b) and well_formed(e)
        case ESeq(first=a, second=b):
            return well_formed(a) and well_formed(b)
        case ELetRec(defs=defs, body=body):
            return all(
                d.id.arity == len(d.params) and well_formed(d.body) for d in defs
            ) and well_formed(body)
        case ETry(expr=e1, body=e2, catch_vars=ys, handler=e3):
            return len(ys) == 3 and well_formed(e1) and well_formed(e2) and well_formed(e3)
        case ValSeq(values=vs):
            return all(well_formed(v) for v in vs)
        case Exc(reason=r, details=d):
            return well_formed(r) and well_formed(d)
    raise TypeError(f"not a term: {term!r}")


def check_scope(gamma: frozenset, r) -> bool:
    """True iff the free names of ``r`` are contained in ``gamma`` and the
    term is well formed."""
    return free_names(r) <= frozenset(gamma) and well_formed(r)


# ---------------------------------------------------------------------------
# total order on values
#
# Int < Atom < FunId < Closure < Nil < Cons < Tuple < Map, recursing
# lexicographically inside compound values.  Closures order by arity and
# then by raw structure (no ext inlining), so two closures compare equal
# only when identical.  The order exists to canonicalize map keys and to
# back the comparison builtins.

_RANK = {
    Var: -1,
    Int: 0,
    Atom: 1,
    FunId: 2,
    Closure: 3,
    Nil: 4,
    VCons: 5,
    VTuple: 6,
    VMap: 7,
}


def value_key(v: Value) -> tuple:
    match v:
        case Var(name=n):
            return (-1, n)
        case Int(value=i):
            return (0, i)
        case Atom(name=n):
            return (1, n)
        case FunId(atom=a, arity=k):
            return (2, a, k)
        case Closure(ext=ext, params=params, body=body):
            return (
                3,
                len(params),
                tuple(n.name for n in params),
                _expr_key(body),
                tuple(
                    (d.id.atom, d.id.arity, tuple(p.name for p in d.params), _expr_key(d.body))
                    for d in ext
                ),
            )
        case Nil():
            return (4,)
        case VCons(head=h, tail=t):
            return (5, value_key(h), value_key(t))
        case VTuple(elems=es):
            return (6, tuple(value_key(e) for e in es))
        case VMap(pairs=ps):
            return (7, tuple((value_key(k), value_key(w)) for k, w in ps))
    raise TypeError(f"not a value: {v!r}")


def _pattern_key(p: Pattern) -> tuple:
    match p:
        case Int() | Atom() | Var() | Nil():
            return (0, value_key(p))
        case PCons(head=h, tail=t):
            return (1, _pattern_key(h), _pattern_key(t))
        case PTuple(elems=es):
            return (2, tuple(_pattern_key(e) for e in es))
        case PMap(pairs=ps):
            return (3, tuple((_pattern_key(k), _pattern_key(w)) for k, w in ps))
    raise TypeError(f"not a pattern: {p!r}")


def _clause_key(cl: Clause) -> tuple:
    return (
        tuple(_pattern_key(p) for p in cl.patterns),
        _expr_key(cl.guard),
        _expr_key(cl.body),
    )


def _defs_key(defs: tuple) -> tuple:
    return tuple(
        (d.id.atom, d.id.arity, tuple(p.name for p in d.params), _expr_key(d.body))
        for d in defs
    )


def _expr_key(e: Expression) -> tuple:
    match e:
        case Val(value=v):
            return (0, value_key(v))
        case EFun(params=params, body=body):
            return (1, tuple(p.name for p in params), _expr_key(body))
        case EValues(elems=es):
            return (2, tuple(_expr_key(x) for x in es))
        case ECons(head=h, tail=t):
            return (3, _expr_key(h), _expr_key(t))
        case ETuple(elems=es):
            return (4, tuple(_expr_key(x) for x in es))
        case EMap(pairs=ps):
            return (5, tuple((_expr_key(k), _expr_key(v)) for k, v in ps))
        case ECall(module=m, function=f, args=args):
            return (6, _expr_key(m), _expr_key(f), tuple(_expr_key(a) for a in args))
        case EPrimOp(name=n, args=args):
            return (7, n, tuple(_expr_key(a) for a in args))
        case EApply(fn=fn, args=args):
            return (8, _expr_key(fn), tuple(_expr_key(a) for a in args))
        case ECase(scrutinee=s, clauses=cls):
            return (9, _expr_key(s), tuple(_clause_key(c) for c in cls))
        case ELet(vars=xs, bind=b, body=body):
            return (10, tuple(x.name for x in xs), _expr_key(b), _expr_key(body))
        case ESeq(first=a, second=b):
            return (11, _expr_key(a), _expr_key(b))
        case ELetRec(defs=defs, body=body):
            return (12, _defs_key(defs), _expr_key(body))
        case ETry(expr=e1, vars=xs, body=e2, catch_vars=ys, handler=e3):
            return (
                13,
                _expr_key(e1),
                tuple(x.name for x in xs),
                _expr_key(e2),
                tuple(y.name for y in ys),
                _expr_key(e3),
            )
    raise TypeError(f"not an expression: {e!r}")


def compare_values(v1: Value, v2: Value) -> int:
    k1, k2 = value_key(v1), value_key(v2)
    return (k1 > k2) - (k1 < k2)


def make_map(pairs: Iterable) -> VMap:
    """Canonical map construction: later occurrences of a key override
    earlier ones, keys end up sorted by the value order."""
    merged = {}
    for k, v in pairs:
        merged[value_key(k)] = (k, v)
    return VMap(tuple(merged[key] for key in sorted(merged)))
