"""Surface syntax for formulas.

Precedence, tightest first: ``!``, ``X``/``Y``, ``&``, ``|``, ``->``,
``U``, ``S``, ``<->``.  ``G(f)``, ``F(f)`` and ``Last[f]`` are function
forms.  Relations compare linear integer expressions built from literals,
variables, ``X(t)``, ``Y(t)``, ``min(t, t)`` and ``max(t, t)``.  A boolean
variable read at a fixed offset is written ``p@1``.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from cosmop.errors import FormulaSyntaxError
from cosmop.logic.ast import (
    FALSE, TRUE, Always, And, Atom, Bool, Const, Eventually, Formula, Implies, Last, Max, Min,
    Next, NextTerm, Not, Or, Prev, PrevTerm, Rel, Scale, Since, Sum, Term, Until, Var, conj,
)

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*(?:\[\d+\])?(?:\.[A-Za-z_][A-Za-z0-9_]*(?:\[\d+\])?)*"
_TOKEN = re.compile(
    rf"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>\#[^\n]*)"
    rf"|(?P<int>\d+)|(?P<ident>{_IDENT})"
    r"|(?P<op><->|->|<=|>=|!=|[!&|()\[\],+\-*<>=@])"
)
_KEYWORDS = {"X", "Y", "U", "S", "G", "F", "Last", "true", "false", "min", "max"}
_RELOPS = {"=", "!=", "<", "<=", ">", ">="}


@dataclass
class Tok:
    kind: str  # int | ident | kw | op | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    toks, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind == "ident":
            toks.append(Tok("kw" if m.group() in _KEYWORDS else "ident", m.group(), line, col))
        elif kind in ("int", "op"):
            toks.append(Tok(kind, m.group(), line, col))
        pos = m.end()
    toks.append(Tok("eof", "", line, len(text) - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    # -- helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        shown = tok.text or "end of input"
        return FormulaSyntaxError(f"{msg}, found {shown!r}", tok.line, tok.col)

    def at(self, text):
        return self.tok.text == text and self.tok.kind in ("op", "kw")

    def expect(self, text):
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        self.i += 1

    # -- formulas
    def parse(self):
        f = self.iff()
        if self.tok.kind != "eof":
            raise self.error("unexpected trailing input")
        return f

    def iff(self):
        f = self.since()
        while self.at("<->"):
            self.i += 1
            g = self.since()
            f = conj(Implies(f, g), Implies(g, f))
        return f

    def since(self):
        f = self.until()
        if self.at("S"):
            self.i += 1
            return Since(f, self.since())
        return f

    def until(self):
        f = self.implies()
        if self.at("U"):
            self.i += 1
            return Until(f, self.until())
        return f

    def implies(self):
        f = self.disj()
        if self.at("->"):
            self.i += 1
            return Implies(f, self.implies())
        return f

    def disj(self):
        args = [self.conj()]
        while self.at("|"):
            self.i += 1
            args.append(self.conj())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conj(self):
        args = [self.unary()]
        while self.at("&"):
            self.i += 1
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self):
        rel = self.try_relation()
        if rel is not None:
            return rel
        if self.at("!"):
            self.i += 1
            return Not(self.unary())
        if self.at("X"):
            self.i += 1
            return Next(self.unary())
        if self.at("Y"):
            self.i += 1
            return Prev(self.unary())
        return self.primary()

    def primary(self):
        tok = self.tok
        if self.at("true"):
            self.i += 1
            return TRUE
        if self.at("false"):
            self.i += 1
            return FALSE
        if self.at("G") or self.at("F"):
            self.i += 1
            self.expect("(")
            f = self.iff()
            self.expect(")")
            return Always(f) if tok.text == "G" else Eventually(f)
        if self.at("Last"):
            self.i += 1
            self.expect("[")
            f = self.iff()
            self.expect("]")
            return Last(f)
        if self.at("("):
            self.i += 1
            f = self.iff()
            self.expect(")")
            return f
        if tok.kind == "ident":
            self.i += 1
            offset = 0
            if self.at("@"):
                self.i += 1
                offset = self.signed_int()
            return Atom(tok.text, offset)
        raise self.error("expected a formula")

    def try_relation(self):
        start = self.i
        try:
            lhs = self.expr()
            if not (self.tok.kind == "op" and self.tok.text in _RELOPS):
                raise self.error("expected a relation operator")
            op = self.tok.text
            self.i += 1
        except FormulaSyntaxError as err:
            if getattr(err, "fatal", False):
                raise
            self.i = start
            return None
        # past the relation operator there is no other reading to fall back on
        return Rel(lhs, op, self.expr())

    # -- terms
    def signed_int(self):
        neg = False
        if self.at("-"):
            neg = True
            self.i += 1
        if self.tok.kind != "int":
            raise self.error("expected an integer")
        v = int(self.tok.text)
        self.i += 1
        return -v if neg else v

    def expr(self) -> Term:
        t = self.product()
        while self.at("+") or self.at("-"):
            neg = self.tok.text == "-"
            self.i += 1
            rhs = self.product()
            t = Sum(t, Scale(-1, rhs) if neg else rhs)
        return t

    def product(self) -> Term:
        t = self.neg()
        while self.at("*"):
            star = self.tok
            self.i += 1
            rhs = self.neg()
            if isinstance(t, Const):
                t = Scale(t.c, rhs)
            elif isinstance(rhs, Const):
                t = Scale(rhs.c, t)
            else:
                err = self.error("non-linear product", star)
                err.fatal = True
                raise err
        return t

    def neg(self) -> Term:
        if self.at("-"):
            self.i += 1
            if self.tok.kind == "int":
                v = int(self.tok.text)
                self.i += 1
                return Const(-v)
            return Scale(-1, self.neg())
        return self.term_atom()

    def term_atom(self) -> Term:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return Const(int(tok.text))
        if tok.kind == "ident":
            self.i += 1
            return Var(tok.text)
        if self.at("X") or self.at("Y"):
            self.i += 1
            self.expect("(")
            t = self.expr()
            self.expect(")")
            return NextTerm(t) if tok.text == "X" else PrevTerm(t)
        if self.at("min") or self.at("max"):
            self.i += 1
            self.expect("(")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return Min(a, b) if tok.text == "min" else Max(a, b)
        if self.at("("):
            self.i += 1
            t = self.expr()
            self.expect(")")
            return t
        raise self.error("expected a term")


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


# ------------------------------------------------------------------ printing

def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return str(t.c)
    if isinstance(t, NextTerm):
        return f"X({format_term(t.t)})"
    if isinstance(t, PrevTerm):
        return f"Y({format_term(t.t)})"
    if isinstance(t, Scale):
        inner = format_term(t.t)
        return f"{t.c}*({inner})" if isinstance(t.t, Scale) else f"{t.c}*{inner}"
    if isinstance(t, Sum):
        return f"({format_term(t.lhs)} + {format_term(t.rhs)})"
    if isinstance(t, Min):
        return f"min({format_term(t.a)}, {format_term(t.b)})"
    if isinstance(t, Max):
        return f"max({format_term(t.a)}, {format_term(t.b)})"
    raise TypeError(f"not a term: {t!r}")


def format_formula(f: Formula) -> str:
    p = format_formula
    if isinstance(f, Bool):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f.p if f.offset == 0 else f"{f.p}@{f.offset}"
    if isinstance(f, Rel):
        return f"{format_term(f.lhs)} {f.op} {format_term(f.rhs)}"
    if isinstance(f, Not):
        return f"!({p(f.f)})"
    if isinstance(f, And):
        return "(" + " & ".join(p(g) for g in f.args) + ")"
    if isinstance(f, Or):
        return "(" + " | ".join(p(g) for g in f.args) + ")"
    if isinstance(f, Implies):
        return f"({p(f.lhs)} -> {p(f.rhs)})"
    if isinstance(f, Next):
        return f"X({p(f.f)})"
    if isinstance(f, Prev):
        return f"Y({p(f.f)})"
    if isinstance(f, Until):
        return f"({p(f.lhs)} U {p(f.rhs)})"
    if isinstance(f, Since):
        return f"({p(f.lhs)} S {p(f.rhs)})"
    if isinstance(f, Eventually):
        return f"F({p(f.f)})"
    if isinstance(f, Always):
        return f"G({p(f.f)})"
    if isinstance(f, Last):
        return f"Last[{p(f.f)}]"
    raise TypeError(f"not a formula: {f!r}")
