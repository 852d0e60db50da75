"""Compile temporal formulas over a horizon ``K`` into QF_LIA assertions.

Each state variable becomes an array of solver constants ``name@0 ..
name@K``; term-level next/previous shift the index.  Existential temporal
operators (eventually, until, since) introduce one fresh integer witness
per occurrence and instant when they occur positively; under negation the
witness trick is unsound, so those occurrences are unrolled into plain
disjunctions instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from cosmop.errors import DecodeError, EncodingError
from cosmop.logic.ast import (
    Always, And, Atom, Bool, Const, Eventually, Formula, Implies, Last, Max, Min, Next, NextTerm,
    Not, Or, Prev, PrevTerm, Rel, Scale, Since, Sum, Term, Trace, Until, Var,
)
from cosmop.logic.evaluate import symbol_table
from cosmop.logic.parser import format_formula
from cosmop.smt.terms import add, and_, cmp, implies, mul, not_, or_, term_max, term_min

_OPS = {"=": "=", "!=": "distinct", "<": "<", "<=": "<=", ">": ">", ">=": ">="}


class _OffsetOverflow(Exception):
    pass


@dataclass
class EncodingContext:
    K: int
    var_map: dict = field(default_factory=dict)  # (symbol, k) -> solver name
    symbols: dict = field(default_factory=dict)  # symbol -> "Int" | "Bool"
    declarations: list = field(default_factory=list)
    aux_counter: int = 0

    def declare_symbol(self, symbol: str, sort: str):
        known = self.symbols.get(symbol)
        if known is not None:
            if known != sort:
                raise EncodingError(f"symbol {symbol!r} used as both {known} and {sort}")
            return
        self.symbols[symbol] = sort
        for k in range(self.K + 1):
            name = f"{symbol}@{k}"
            self.var_map[(symbol, k)] = name
            self.declarations.append((name, sort))

    def var(self, symbol: str, k: int):
        if not 0 <= k <= self.K:
            raise _OffsetOverflow(f"{symbol} at instant {k}, outside [0, {self.K}]")
        return self.var_map[(symbol, k)]

    def fresh_aux(self, lo: int, hi: int):
        """Fresh integer witness constrained to ``[lo, hi]``."""
        name = f"__j{self.aux_counter}"
        self.aux_counter += 1
        self.declarations.append((name, "Int"))
        return name, and_(cmp("<=", lo, name), cmp("<=", name, hi))


@dataclass
class AssertionSet:
    declarations: list
    assertions: list

    def __len__(self):
        return len(self.assertions)


def encode(f: Formula, K: int, ctx: EncodingContext | None = None) -> AssertionSet:
    """Assertions satisfiable iff some length-``K`` trace satisfies ``f`` at 0."""
    if K < 0:
        raise EncodingError("horizon K must be >= 0")
    ctx = ctx or EncodingContext(K)
    if ctx.K != K:
        raise EncodingError("context horizon does not match K")
    ints, bools = symbol_table(f)
    for s in sorted(ints):
        ctx.declare_symbol(s, "Int")
    for s in sorted(bools):
        ctx.declare_symbol(s, "Bool")
    out: list = []
    _Encoder(ctx).top(f, 0, out)
    assertions = [a for a in out if a is not True]
    return AssertionSet(list(ctx.declarations), assertions)


def encode_term(t: Term, k: int, ctx: EncodingContext):
    try:
        return _Encoder(ctx).term(t, k)
    except _OffsetOverflow as exc:
        raise EncodingError(f"term index out of range: {exc}") from None


class _Encoder:
    def __init__(self, ctx: EncodingContext):
        self.ctx = ctx
        self.K = ctx.K

    def top(self, f, k, out):
        # split top-level conjunctions and always-blocks into separate assertions
        if isinstance(f, And):
            for g in f.args:
                self.top(g, k, out)
        elif isinstance(f, Always):
            for i in range(k, self.K + 1):
                out.append(self.formula(f.f, i, True))
        else:
            out.append(self.formula(f, k, True))

    # -- terms
    def term(self, t, k):
        if isinstance(t, Var):
            return self.ctx.var(t.name, k)
        if isinstance(t, Const):
            return t.c
        if isinstance(t, NextTerm):
            return self.term(t.t, k + 1)
        if isinstance(t, PrevTerm):
            return self.term(t.t, k - 1)
        if isinstance(t, Scale):
            return mul(t.c, self.term(t.t, k))
        if isinstance(t, Sum):
            return add(self.term(t.lhs, k), self.term(t.rhs, k))
        if isinstance(t, Min):
            return term_min(self.term(t.a, k), self.term(t.b, k))
        if isinstance(t, Max):
            return term_max(self.term(t.a, k), self.term(t.b, k))
        raise TypeError(f"not a term: {t!r}")

    _FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<="}

    def rel(self, lhs, op, rhs, k):
        """Comparison; an outer min/max bounded from the safe side splits into a conjunction.

        ``max(a, b) <= c`` is ``a <= c & b <= c`` and ``min(a, b) >= c`` is
        ``a >= c & b >= c``; every other shape keeps the ``ite`` term.
        """
        if isinstance(rhs, (Max, Min)) and op in self._FLIP and not isinstance(lhs, (Max, Min)):
            lhs, op, rhs = rhs, self._FLIP[op], lhs
        split = ((isinstance(lhs, Max) and op in ("<", "<="))
                 or (isinstance(lhs, Min) and op in (">", ">=")))
        if split:
            return and_(self.rel(lhs.a, op, rhs, k), self.rel(lhs.b, op, rhs, k))
        return cmp(_OPS[op], self.term(lhs, k), self.term(rhs, k))

    # -- formulas
    def formula(self, f, k, pos):
        try:
            return self._f(f, k, pos)
        except _OffsetOverflow as exc:
            raise EncodingError(f"offset overflow in {format_formula(f)[:160]}: {exc}") from None

    def _f(self, f, k, pos):
        K = self.K
        if isinstance(f, Bool):
            return f.value
        if isinstance(f, Atom):
            return self.ctx.var(f.p, k + f.offset)
        if isinstance(f, Rel):
            return self.rel(f.lhs, f.op, f.rhs, k)
        if isinstance(f, Not):
            return not_(self._f(f.f, k, not pos))
        if isinstance(f, And):
            parts = []
            for g in f.args:
                e = self._f(g, k, pos)
                if e is False:
                    return False
                parts.append(e)
            return and_(*parts)
        if isinstance(f, Or):
            parts = []
            for g in f.args:
                e = self._f(g, k, pos)
                if e is True:
                    return True
                parts.append(e)
            return or_(*parts)
        if isinstance(f, Implies):
            lhs = self._f(f.lhs, k, not pos)
            if lhs is False:
                return True
            return implies(lhs, self._f(f.rhs, k, pos))
        if isinstance(f, Next):
            return False if k == K else self._f(f.f, k + 1, pos)
        if isinstance(f, Prev):
            return False if k == 0 else self._f(f.f, k - 1, pos)
        if isinstance(f, Always):
            return and_(*(self._f(f.f, i, pos) for i in range(k, K + 1)))
        if isinstance(f, Last):
            return self._f(f.f, K, pos)
        if isinstance(f, Eventually):
            if not pos:
                return or_(*(self._f(f.f, i, pos) for i in range(k, K + 1)))
            j, dom = self.ctx.fresh_aux(k, K)
            return and_(dom, *(implies(cmp("=", i, j), self._f(f.f, i, pos)) for i in range(k, K + 1)))
        if isinstance(f, Until):
            if not pos:
                u = self._f(f.rhs, K, pos)
                for i in range(K - 1, k - 1, -1):
                    u = or_(self._f(f.rhs, i, pos), and_(self._f(f.lhs, i, pos), u))
                return u
            j, dom = self.ctx.fresh_aux(k, K)
            parts = [dom]
            for i in range(k, K + 1):
                if i < K:  # i < j is impossible at i = K since j <= K
                    parts.append(implies(cmp("<", i, j), self._f(f.lhs, i, pos)))
                parts.append(implies(cmp("=", i, j), self._f(f.rhs, i, pos)))
            return and_(*parts)
        if isinstance(f, Since):
            if not pos:
                u = self._f(f.rhs, 0, pos)
                for i in range(1, k + 1):
                    u = or_(self._f(f.rhs, i, pos), and_(self._f(f.lhs, i, pos), u))
                return u
            j, dom = self.ctx.fresh_aux(0, k)
            parts = [dom]
            for i in range(0, k + 1):
                if i > 0:
                    parts.append(implies(cmp(">", i, j), self._f(f.lhs, i, pos)))
                parts.append(implies(cmp("=", i, j), self._f(f.rhs, i, pos)))
            return and_(*parts)
        raise TypeError(f"not a formula: {f!r}")


def decode_model(model: dict, ctx: EncodingContext) -> Trace:
    """Rebuild the trace arrays from an assignment to the indexed constants."""
    ints, bools = {}, {}
    for symbol, sort in ctx.symbols.items():
        values = []
        for k in range(ctx.K + 1):
            name = ctx.var_map[(symbol, k)]
            if name not in model:
                raise DecodeError(f"model assigns no value to {name}")
            values.append(model[name])
        if sort == "Int":
            ints[symbol] = tuple(int(v) for v in values)
        else:
            bools[symbol] = tuple(bool(v) for v in values)
    return Trace(ctx.K, ints, bools)
