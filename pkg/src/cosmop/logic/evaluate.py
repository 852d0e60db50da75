"""Reference finite-trace evaluator.

Every SMT answer is checked against this module, so it deliberately
follows the textbook clauses one by one and shares no code with the
encoder.
"""

from __future__ import annotations

from cosmop.errors import EvaluationError
from cosmop.logic.ast import (
    TRUE, Always, And, Atom, Bool, Const, Eventually, Formula, Implies, Last, Max, Min, Next,
    NextTerm, Not, Or, Prev, PrevTerm, Rel, Scale, Since, Sum, Term, Trace, Until, Var,
)

_CMP = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def eval_term(t: Term, rho: Trace, k: int) -> int:
    if isinstance(t, Var):
        return rho.int_at(t.name, k)
    if isinstance(t, Const):
        return t.c
    if isinstance(t, NextTerm):
        return eval_term(t.t, rho, k + 1)
    if isinstance(t, PrevTerm):
        return eval_term(t.t, rho, k - 1)
    if isinstance(t, Scale):
        return t.c * eval_term(t.t, rho, k)
    if isinstance(t, Sum):
        return eval_term(t.lhs, rho, k) + eval_term(t.rhs, rho, k)
    if isinstance(t, Min):
        return min(eval_term(t.a, rho, k), eval_term(t.b, rho, k))
    if isinstance(t, Max):
        return max(eval_term(t.a, rho, k), eval_term(t.b, rho, k))
    raise TypeError(f"not a term: {t!r}")


def evaluate(f: Formula, rho: Trace, k: int = 0) -> bool:
    """``rho(k) |= f`` on the finite trace ``rho``.

    Formula-level next is strong: it is false at the last instant, and
    previous is false at instant 0.  A term reaching outside ``[0, K]``
    raises :class:`EvaluationError` instead of producing a value.
    """
    if not 0 <= k <= rho.K:
        raise EvaluationError(f"instant {k} outside [0, {rho.K}]")
    return _ev(f, rho, k)


def _ev(f, rho, k):
    K = rho.K
    if isinstance(f, Bool):
        return f.value
    if isinstance(f, Atom):
        return rho.bool_at(f.p, k + f.offset)
    if isinstance(f, Rel):
        return _CMP[f.op](eval_term(f.lhs, rho, k), eval_term(f.rhs, rho, k))
    if isinstance(f, Not):
        return not _ev(f.f, rho, k)
    if isinstance(f, And):
        return all(_ev(g, rho, k) for g in f.args)
    if isinstance(f, Or):
        return any(_ev(g, rho, k) for g in f.args)
    if isinstance(f, Implies):
        return (not _ev(f.lhs, rho, k)) or _ev(f.rhs, rho, k)
    if isinstance(f, Next):
        return k < K and _ev(f.f, rho, k + 1)
    if isinstance(f, Prev):
        return k > 0 and _ev(f.f, rho, k - 1)
    if isinstance(f, Until):
        for i in range(k, K + 1):
            if _ev(f.rhs, rho, i):
                return True
            if not _ev(f.lhs, rho, i):
                return False
        return False
    if isinstance(f, Since):
        for i in range(k, -1, -1):
            if _ev(f.rhs, rho, i):
                return True
            if not _ev(f.lhs, rho, i):
                return False
        return False
    if isinstance(f, Eventually):
        return any(_ev(f.f, rho, i) for i in range(k, K + 1))
    if isinstance(f, Always):
        return all(_ev(f.f, rho, i) for i in range(k, K + 1))
    if isinstance(f, Last):
        return _ev(f.f, rho, K)
    raise TypeError(f"not a formula: {f!r}")


def normalize(f: Formula) -> Formula:
    """Rewrite the abbreviations into the core grammar.

    Core: booleans, atoms, relations, not, and, next, prev, until, since.
    """
    n = normalize
    if isinstance(f, (Bool, Atom, Rel)):
        return f
    if isinstance(f, Not):
        return Not(n(f.f))
    if isinstance(f, And):
        return And(tuple(n(g) for g in f.args))
    if isinstance(f, Or):
        return Not(And(tuple(Not(n(g)) for g in f.args)))
    if isinstance(f, Implies):
        return Not(And((n(f.lhs), Not(n(f.rhs)))))
    if isinstance(f, Next):
        return Next(n(f.f))
    if isinstance(f, Prev):
        return Prev(n(f.f))
    if isinstance(f, Until):
        return Until(n(f.lhs), n(f.rhs))
    if isinstance(f, Since):
        return Since(n(f.lhs), n(f.rhs))
    if isinstance(f, Eventually):
        return Until(TRUE, n(f.f))
    if isinstance(f, Always):
        return Not(Until(TRUE, Not(n(f.f))))
    if isinstance(f, Last):
        return Until(TRUE, And((Not(Next(TRUE)), n(f.f))))
    raise TypeError(f"not a formula: {f!r}")


# ------------------------------------------------------------------ symbols

def _term_symbols(t, off, out):
    if isinstance(t, Var):
        lo, hi = out.get(t.name, (off, off))
        out[t.name] = (min(lo, off), max(hi, off))
    elif isinstance(t, Const):
        pass
    elif isinstance(t, NextTerm):
        _term_symbols(t.t, off + 1, out)
    elif isinstance(t, PrevTerm):
        _term_symbols(t.t, off - 1, out)
    elif isinstance(t, Scale):
        _term_symbols(t.t, off, out)
    elif isinstance(t, (Sum,)):
        _term_symbols(t.lhs, off, out)
        _term_symbols(t.rhs, off, out)
    elif isinstance(t, (Min, Max)):
        _term_symbols(t.a, off, out)
        _term_symbols(t.b, off, out)
    else:
        raise TypeError(f"not a term: {t!r}")


def _walk(f, ints, bools):
    if isinstance(f, Bool):
        return
    if isinstance(f, Atom):
        lo, hi = bools.get(f.p, (f.offset, f.offset))
        bools[f.p] = (min(lo, f.offset), max(hi, f.offset))
    elif isinstance(f, Rel):
        _term_symbols(f.lhs, 0, ints)
        _term_symbols(f.rhs, 0, ints)
    elif isinstance(f, (And, Or)):
        for g in f.args:
            _walk(g, ints, bools)
    elif isinstance(f, (Implies, Until, Since)):
        _walk(f.lhs, ints, bools)
        _walk(f.rhs, ints, bools)
    else:
        _walk(f.f, ints, bools)


def symbol_table(f: Formula):
    """``(ints, bools)``: symbol -> (min_offset, max_offset) per sort."""
    ints, bools = {}, {}
    _walk(f, ints, bools)
    clash = ints.keys() & bools.keys()
    if clash:
        raise TypeError(f"symbols used both as integer and boolean: {sorted(clash)}")
    return ints, bools


def collect_symbols(f: Formula) -> set[tuple[str, int, int]]:
    """Every symbol with the offset window it is read in, relative to the current instant.

    The window always contains offset 0, so ``Y(Y(y)) < 0`` gives ``(y, -2, 0)``.
    """
    ints, bools = symbol_table(f)
    return {(s, min(lo, 0), max(hi, 0)) for s, (lo, hi) in {**ints, **bools}.items()}
