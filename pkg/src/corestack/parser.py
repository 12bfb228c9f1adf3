"""Parser for the textual Core Erlang subset.

Atoms are single-quoted, value lists use ``<...>``, lists ``[h|t]``, tuples
``{...}``, maps ``~{k=>v}~``; the keyword forms are ``fun``, ``let``,
``letrec``, ``do``, ``case``/``of``/``when``/``end``, ``call m:f(...)``,
``primop 'a'(...)``, ``apply e(...)`` and ``try``/``of``/``catch``.
Annotated compiler output is not accepted; strip annotations upstream.

A source unit is either a bare expression or a sequence of top-level
definitions ``'f'/k = fun(...) -> e`` that behave as a letrec body; the
last definition is the entry point unless another one is requested.
Two-variable ``catch`` binders are normalized to three with a fresh
variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .syntax import (
    Atom,
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
    Expression,
    FunDef,
    FunId,
    Int,
    NIL,
    PCons,
    PMap,
    PTuple,
    Pattern,
    Val,
    Var,
    free_names,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected=()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = frozenset(expected)
        where = f"line {line}, column {col}"
        hint = f" (expected one of: {', '.join(sorted(self.expected))})" if expected else ""
        super().__init__(f"{message} at {where}{hint}")


KEYWORDS = {
    "fun", "let", "letrec", "in", "do", "case", "of", "when", "end",
    "call", "primop", "apply", "try", "catch",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<int>-?\d+)
  | (?P<atom>'(?:[^'\\]|\\.)*')
  | (?P<word>[a-z][A-Za-z0-9_@]*)
  | (?P<var>[A-Z_][A-Za-z0-9_@]*)
  | (?P<sym>~\{|\}~|=>|->|\(|\)|\{|\}|\[|\]|<|>|\||,|;|:|/|=)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str):
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        lexeme = m.group(0)
        kind = m.lastgroup
        if kind == "word":
            if lexeme in KEYWORDS:
                kind = "kw"
            else:
                raise ParseError(
                    f"bare word {lexeme!r}: atoms must be quoted", line, col
                )
        if kind != "ws":
            tokens.append(Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text[1:-1])


@dataclass(frozen=True)
class SourceUnit:
    """A parsed file: either a bare expression or top-level definitions."""

    defs: tuple
    expr: Optional[Expression]

    def entry(self, name: Optional[FunId] = None) -> FunId:
        if not self.defs:
            raise ValueError("source unit has no definitions")
        if name is None:
            return self.defs[-1].id
        for d in self.defs:
            if d.id == name:
                return name
        raise ValueError(f"no definition named {name.atom}/{name.arity}")


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.peek()
        if not self.at(kind, text):
            want = text if text is not None else kind
            raise ParseError(
                f"unexpected {tok.text!r}", tok.line, tok.col, expected=(want,)
            )
        return self.next()

    def fail(self, message: str, expected=()):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.col, expected=expected)

    # -- atoms, names, lists ----------------------------------------------

    def atom_text(self) -> str:
        return _unquote(self.expect("atom").text)

    def var(self) -> Var:
        return Var(self.expect("var").text)

    def int_value(self) -> int:
        return int(self.expect("int").text)

    def comma_list(self, parse_item, close_text: str):
        items = []
        if not self.at("sym", close_text):
            items.append(parse_item())
            while self.at("sym", ","):
                self.next()
                items.append(parse_item())
        self.expect("sym", close_text)
        return tuple(items)

    def varlist(self) -> tuple:
        if self.at("var"):
            return (self.var(),)
        self.expect("sym", "<")
        return self.comma_list(self.var, ">")

    # -- patterns -----------------------------------------------------------

    def pattern(self) -> Pattern:
        tok = self.peek()
        if tok.kind == "int":
            return Int(self.int_value())
        if tok.kind == "atom":
            return Atom(self.atom_text())
        if tok.kind == "var":
            return self.var()
        if self.at("sym", "["):
            self.next()
            if self.at("sym", "]"):
                self.next()
                return NIL
            return self._list_tail(self.pattern, lambda h, t: PCons(h, t), NIL)
        if self.at("sym", "{"):
            self.next()
            return PTuple(self.comma_list(self.pattern, "}"))
        if self.at("sym", "~{"):
            self.next()
            return PMap(self.comma_list(self._map_pair(self.pattern), "}~"))
        self.fail("expected a pattern", expected=("integer", "atom", "variable", "[", "{", "~{"))

    def _map_pair(self, parse_item):
        def pair():
            k = parse_item()
            self.expect("sym", "=>")
            v = parse_item()
            return (k, v)

        return pair

    def _list_tail(self, parse_item, cons, nil):
        items = [parse_item()]
        while self.at("sym", ","):
            self.next()
            items.append(parse_item())
        tail = nil
        if self.at("sym", "|"):
            self.next()
            tail = parse_item()
        self.expect("sym", "]")
        out = tail
        for item in reversed(items):
            out = cons(item, out)
        return out

    def patlist(self) -> tuple:
        if self.at("sym", "<"):
            self.next()
            return self.comma_list(self.pattern, ">")
        return (self.pattern(),)

    # -- expressions ---------------------------------------------------------

    def expr(self) -> Expression:
        tok = self.peek()
        if tok.kind == "int":
            return Val(Int(self.int_value()))
        if tok.kind == "atom":
            name = self.atom_text()
            if self.at("sym", "/"):
                self.next()
                arity = self.int_value()
                if arity < 0:
                    raise ParseError("arity must be nonnegative", tok.line, tok.col)
                return Val(FunId(name, arity))
            return Val(Atom(name))
        if tok.kind == "var":
            return Val(self.var())
        if self.at("sym", "("):
            self.next()
            inner = self.expr()
            self.expect("sym", ")")
            return inner
        if self.at("sym", "["):
            self.next()
            if self.at("sym", "]"):
                self.next()
                return Val(NIL)
            return self._list_tail(self.expr, ECons, Val(NIL))
        if self.at("sym", "{"):
            self.next()
            return ETuple(self.comma_list(self.expr, "}"))
        if self.at("sym", "~{"):
            self.next()
            return EMap(self.comma_list(self._map_pair(self.expr), "}~"))
        if self.at("sym", "<"):
            self.next()
            return EValues(self.comma_list(self.expr, ">"))
        if tok.kind == "kw":
            return self._keyword_expr(tok.text)
        self.fail("expected an expression")

    def _keyword_expr(self, word: str) -> Expression:
        if word == "fun":
            self.next()
            self.expect("sym", "(")
            params = self.comma_list(self.var, ")")
            self.expect("sym", "->")
            return EFun(params, self.expr())
        if word == "let":
            self.next()
            xs = self.varlist()
            self.expect("sym", "=")
            bind = self.expr()
            self.expect("kw", "in")
            return ELet(xs, bind, self.expr())
        if word == "letrec":
            self.next()
            defs = [self.fundef()]
            while self.at("atom"):
                defs.append(self.fundef())
            self.expect("kw", "in")
            return ELetRec(tuple(defs), self.expr())
        if word == "do":
            self.next()
            first = self.expr()
            return ESeq(first, self.expr())
        if word == "case":
            self.next()
            scrutinee = self.expr()
            self.expect("kw", "of")
            clauses = []
            while not self.at("kw", "end"):
                clauses.append(self.clause())
                if self.at("sym", ";"):
                    self.next()
            self.expect("kw", "end")
            return ECase(scrutinee, tuple(clauses))
        if word == "call":
            self.next()
            module = self.expr()
            self.expect("sym", ":")
            function = self.expr()
            self.expect("sym", "(")
            return ECall(module, function, self.comma_list(self.expr, ")"))
        if word == "primop":
            self.next()
            name = self.atom_text()
            self.expect("sym", "(")
            return EPrimOp(name, self.comma_list(self.expr, ")"))
        if word == "apply":
            self.next()
            fn = self.expr()
            self.expect("sym", "(")
            return EApply(fn, self.comma_list(self.expr, ")"))
        if word == "try":
            self.next()
            e1 = self.expr()
            self.expect("kw", "of")
            xs = self.varlist()
            self.expect("sym", "->")
            e2 = self.expr()
            self.expect("kw", "catch")
            ys = self.varlist()
            self.expect("sym", "->")
            e3 = self.expr()
            ys = self._normalize_catch(ys, e3)
            return ETry(e1, xs, e2, ys, e3)
        self.fail(f"unexpected keyword {word!r}")

    def _normalize_catch(self, ys: tuple, handler: Expression) -> tuple:
        if len(ys) == 3:
            return ys
        if len(ys) == 2:
            taken = {v.name for v in ys} | {
                n.name for n in free_names(handler) if isinstance(n, Var)
            }
            base, i = "_details", 0
            fresh = base
            while fresh in taken:
                i += 1
                fresh = f"{base}{i}"
            return ys + (Var(fresh),)
        tok = self.peek()
        raise ParseError(
            f"catch must bind 2 or 3 variables, got {len(ys)}", tok.line, tok.col
        )

    def clause(self) -> Clause:
        ps = self.patlist()
        self.expect("kw", "when")
        guard = self.expr()
        self.expect("sym", "->")
        return Clause(ps, guard, self.expr())

    def fundef(self) -> FunDef:
        tok = self.peek()
        name = self.atom_text()
        self.expect("sym", "/")
        arity = self.int_value()
        if arity < 0:
            raise ParseError("arity must be nonnegative", tok.line, tok.col)
        self.expect("sym", "=")
        self.expect("kw", "fun")
        self.expect("sym", "(")
        params = self.comma_list(self.var, ")")
        self.expect("sym", "->")
        body = self.expr()
        if arity != len(params):
            raise ParseError(
                f"{name}/{arity} defined with {len(params)} parameters",
                tok.line,
                tok.col,
            )
        return FunDef(FunId(name, arity), params, body)

    # -- units -----------------------------------------------------------------

    def at_fundef(self) -> bool:
        return (
            self.at("atom")
            and self.peek(1).kind == "sym"
            and self.peek(1).text == "/"
            and self.peek(2).kind == "int"
            and self.peek(3).kind == "sym"
            and self.peek(3).text == "="
        )

    def unit(self) -> SourceUnit:
        if self.at_fundef():
            defs = []
            while self.at_fundef():
                defs.append(self.fundef())
                if self.at("sym", ";"):
                    self.next()
            self.expect("eof")
            return SourceUnit(tuple(defs), None)
        expr = self.expr()
        self.expect("eof")
        return SourceUnit((), expr)


def parse(text: str) -> Expression:
    """Parse a single expression."""
    parser = Parser(text)
    expr = parser.expr()
    parser.expect("eof")
    return expr


def parse_unit(text: str) -> SourceUnit:
    return Parser(text).unit()


def unit_expression(unit: SourceUnit, args=(), entry: Optional[FunId] = None) -> Expression:
    """Close a source unit into a runnable expression: definition files wrap
    their entry application in a letrec; bare expressions are applied to the
    arguments when any are given."""
    args = tuple(args)
    if unit.defs:
        fid = unit.entry(entry)
        return ELetRec(unit.defs, EApply(Val(fid), tuple(Val(a) for a in args)))
    if args:
        return EApply(unit.expr, tuple(Val(a) for a in args))
    return unit.expr
