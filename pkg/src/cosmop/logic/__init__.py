"""Counter temporal logic over linear integer constraints on finite traces."""

from cosmop.logic.ast import (
    FALSE, TRUE, Always, And, Atom, Bool, Const, Eventually, Formula, Implies, Last, Max, Min,
    Next, NextTerm, Not, Or, Prev, PrevTerm, Rel, Scale, Since, Sum, Term, Trace, Until, Var,
    as_term, conj, disj, not_last, steps,
)
from cosmop.logic.evaluate import collect_symbols, eval_term, evaluate, normalize, symbol_table
from cosmop.logic.parser import format_formula, format_term, parse_formula

eval = evaluate  # noqa: A001  (short alias: logic.eval)
