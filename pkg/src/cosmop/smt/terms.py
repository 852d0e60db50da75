"""Solver terms as nested tuples, with SMT-LIB2 printing and in-process evaluation.

A term is an ``int``, a ``bool``, a variable name (``str``) or a tuple
``(op, *args)`` whose ``op`` is an SMT-LIB2 function symbol.  The builders
fold constants so the encoder never emits trivially decided guards.
"""

from __future__ import annotations

import re

from cosmop.errors import SolverError

BOOL_OPS = {"and", "or", "not", "=>"}
CMP_OPS = {"=", "distinct", "<", "<=", ">", ">="}
ARITH_OPS = {"+", "-", "*"}
KNOWN_OPS = BOOL_OPS | CMP_OPS | ARITH_OPS | {"ite"}

_SIMPLE = re.compile(r"^[A-Za-z~!@$%^&*_+=<>.?/\-][A-Za-z0-9~!@$%^&*_+=<>.?/\-]*$")


def and_(*args):
    out = []
    for a in args:
        if a is False:
            return False
        if a is True:
            continue
        if isinstance(a, tuple) and a[0] == "and":
            out.extend(a[1:])
        else:
            out.append(a)
    if not out:
        return True
    return out[0] if len(out) == 1 else ("and", *out)


def or_(*args):
    out = []
    for a in args:
        if a is True:
            return True
        if a is False:
            continue
        if isinstance(a, tuple) and a[0] == "or":
            out.extend(a[1:])
        else:
            out.append(a)
    if not out:
        return False
    return out[0] if len(out) == 1 else ("or", *out)


def not_(a):
    if isinstance(a, bool):
        return not a
    if isinstance(a, tuple) and a[0] == "not":
        return a[1]
    return ("not", a)


def implies(a, b):
    if a is False or b is True:
        return True
    if a is True:
        return b
    if b is False:
        return not_(a)
    return ("=>", a, b)


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


_PY_CMP = {
    "=": lambda a, b: a == b,
    "distinct": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def cmp(op, a, b):
    if _is_int(a) and _is_int(b):
        return _PY_CMP[op](a, b)
    return (op, a, b)


def add(*args):
    const, rest = 0, []
    for a in args:
        if _is_int(a):
            const += a
        elif isinstance(a, tuple) and a[0] == "+":
            for b in a[1:]:
                if _is_int(b):
                    const += b
                else:
                    rest.append(b)
        else:
            rest.append(a)
    if const:
        rest.append(const)
    if not rest:
        return 0
    return rest[0] if len(rest) == 1 else ("+", *rest)


def mul(c, a):
    if c == 0:
        return 0
    if c == 1:
        return a
    if _is_int(a):
        return c * a
    return ("*", c, a)


def ite(c, a, b):
    if c is True:
        return a
    if c is False:
        return b
    if a == b:
        return a
    return ("ite", c, a, b)


def term_max(a, b):
    return ite(cmp(">", a, b), a, b)


def term_min(a, b):
    return ite(cmp("<", a, b), a, b)


# ------------------------------------------------------------------ printing

def quote(name: str) -> str:
    if _SIMPLE.match(name):
        return name
    if "|" in name or "\\" in name:
        raise SolverError(f"symbol {name!r} cannot be quoted")
    return f"|{name}|"


def to_smtlib(t) -> str:
    parts: list[str] = []
    _emit(t, parts)
    return "".join(parts)


def _emit(t, out):
    if t is True:
        out.append("true")
    elif t is False:
        out.append("false")
    elif isinstance(t, int):
        out.append(str(t) if t >= 0 else f"(- {-t})")
    elif isinstance(t, str):
        out.append(quote(t))
    elif isinstance(t, tuple):
        out.append("(")
        out.append(t[0])
        for a in t[1:]:
            out.append(" ")
            _emit(a, out)
        out.append(")")
    else:
        raise SolverError(f"malformed term {t!r}")


# ------------------------------------------------------------------ checking

def term_vars(t, acc=None) -> set:
    acc = set() if acc is None else acc
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, str):
            acc.add(x)
        elif isinstance(x, tuple):
            stack.extend(x[1:])
    return acc


def check_term(t, sorts: dict, expect="Bool"):
    """Sort-check ``t`` against declared ``sorts``; raises :class:`SolverError`."""
    got = _sort(t, sorts)
    if got != expect:
        raise SolverError(f"term has sort {got}, expected {expect}: {to_smtlib(t)[:120]}")


def _sort(t, sorts):
    if isinstance(t, bool):
        return "Bool"
    if isinstance(t, int):
        return "Int"
    if isinstance(t, str):
        try:
            return sorts[t]
        except KeyError:
            raise SolverError(f"undeclared symbol {t!r}") from None
    if not isinstance(t, tuple) or not t or t[0] not in KNOWN_OPS:
        raise SolverError(f"malformed term {t!r}")
    op, args = t[0], t[1:]
    if not args:
        raise SolverError(f"operator {op} needs arguments")
    kinds = [_sort(a, sorts) for a in args]
    if op in BOOL_OPS:
        if op == "not" and len(args) != 1:
            raise SolverError("not takes one argument")
        if any(k != "Bool" for k in kinds):
            raise SolverError(f"{op} expects Bool arguments")
        return "Bool"
    if op in CMP_OPS:
        if op in ("=", "distinct"):
            if len(set(kinds)) != 1:
                raise SolverError(f"{op} mixes sorts {kinds}")
        elif any(k != "Int" for k in kinds):
            raise SolverError(f"{op} expects Int arguments")
        return "Bool"
    if op in ARITH_OPS:
        if any(k != "Int" for k in kinds):
            raise SolverError(f"{op} expects Int arguments")
        if op == "*" and sum(not _is_int(a) for a in args) > 1:
            raise SolverError("non-linear multiplication")
        return "Int"
    # ite
    if len(args) != 3 or kinds[0] != "Bool" or kinds[1] != kinds[2]:
        raise SolverError("ite expects (Bool, S, S)")
    return kinds[1]


def evaluate_term(t, model: dict):
    """Value of ``t`` under a total ``model``; independent of any solver."""
    if isinstance(t, bool) or isinstance(t, int):
        return t
    if isinstance(t, str):
        return model[t]
    op, args = t[0], t[1:]
    if op == "ite":
        return evaluate_term(args[1], model) if evaluate_term(args[0], model) else evaluate_term(args[2], model)
    if op == "and":
        return all(evaluate_term(a, model) for a in args)
    if op == "or":
        return any(evaluate_term(a, model) for a in args)
    if op == "=>":
        return (not evaluate_term(args[0], model)) or evaluate_term(args[1], model)
    vals = [evaluate_term(a, model) for a in args]
    if op == "not":
        return not vals[0]
    if op == "+":
        return sum(vals)
    if op == "-":
        return -vals[0] if len(vals) == 1 else vals[0] - sum(vals[1:])
    if op == "*":
        out = 1
        for v in vals:
            out *= v
        return out
    if op == "=":
        return all(v == vals[0] for v in vals[1:])
    if op == "distinct":
        return len(set(vals)) == len(vals)
    f = _PY_CMP[op]
    return all(f(a, b) for a, b in zip(vals, vals[1:]))
