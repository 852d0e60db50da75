"""Minimal S-expression reader for solver responses."""

from __future__ import annotations

import re

from cosmop.errors import SolverError

_TOK = re.compile(r'\s+|;[^\n]*|(\()|(\))|(\|[^|]*\|)|("(?:[^"]|"")*")|([^\s()|";]+)')


def tokens(text: str):
    pos = 0
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m:
            raise SolverError(f"cannot tokenize solver output near {text[pos:pos + 40]!r}")
        pos = m.end()
        if m.group(1):
            yield "("
        elif m.group(2):
            yield ")"
        elif m.group(3):
            yield ("sym", m.group(3)[1:-1])
        elif m.group(4):
            yield ("str", m.group(4)[1:-1].replace('""', '"'))
        elif m.group(5):
            yield m.group(5)


def read_all(text: str) -> list:
    """Parse every top-level S-expression.

    Lists become Python lists, quoted symbols lose their bars, numerals
    become ``int`` and ``true``/``false`` become ``bool``.
    """
    stack: list[list] = [[]]
    for tok in tokens(text):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise SolverError("unbalanced ')' in solver output")
            done = stack.pop()
            stack[-1].append(done)
        elif isinstance(tok, tuple):
            stack[-1].append(tok[1] if tok[0] == "sym" else tok)
        else:
            stack[-1].append(_atom(tok))
    if len(stack) != 1:
        raise SolverError("unbalanced '(' in solver output")
    return stack[0]


def _atom(tok):
    if tok == "true":
        return True
    if tok == "false":
        return False
    if tok.isdigit():
        return int(tok)
    return tok


def value_of(expr):
    """Literal value of a model entry: ``5``, ``(- 5)``, ``true``."""
    if isinstance(expr, (bool, int)):
        return expr
    if isinstance(expr, list) and len(expr) == 2 and expr[0] == "-" and isinstance(expr[1], int):
        return -expr[1]
    raise SolverError(f"unsupported model value {expr!r}")
