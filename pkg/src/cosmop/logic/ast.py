"""Formula and term trees for the counter temporal logic, plus finite traces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from cosmop.errors import EvaluationError

# ------------------------------------------------------------------ terms


class Term:
    """Arithmetic temporal term.  Arithmetic operators build linear terms."""

    __slots__ = ()

    def __add__(self, other):
        return Sum(self, as_term(other))

    def __radd__(self, other):
        return Sum(as_term(other), self)

    def __sub__(self, other):
        return Sum(self, Scale(-1, as_term(other)))

    def __rsub__(self, other):
        return Sum(as_term(other), Scale(-1, self))

    def __neg__(self):
        return Scale(-1, self)

    def __mul__(self, c):
        if not isinstance(c, int):
            raise TypeError("terms may only be scaled by integer constants")
        return Scale(c, self)

    __rmul__ = __mul__

    def eq(self, other):
        return Rel(self, "=", as_term(other))

    def ne(self, other):
        return Rel(self, "!=", as_term(other))

    def lt(self, other):
        return Rel(self, "<", as_term(other))

    def le(self, other):
        return Rel(self, "<=", as_term(other))

    def gt(self, other):
        return Rel(self, ">", as_term(other))

    def ge(self, other):
        return Rel(self, ">=", as_term(other))

    @property
    def next(self):
        return NextTerm(self)

    @property
    def prev(self):
        return PrevTerm(self)


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Const(Term):
    c: int


@dataclass(frozen=True, slots=True)
class NextTerm(Term):
    t: Term


@dataclass(frozen=True, slots=True)
class PrevTerm(Term):
    t: Term


@dataclass(frozen=True, slots=True)
class Scale(Term):
    c: int
    t: Term


@dataclass(frozen=True, slots=True)
class Sum(Term):
    lhs: Term
    rhs: Term


@dataclass(frozen=True, slots=True)
class Min(Term):
    a: Term
    b: Term


@dataclass(frozen=True, slots=True)
class Max(Term):
    a: Term
    b: Term


def as_term(x) -> Term:
    if isinstance(x, Term):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Const(x)
    raise TypeError(f"cannot use {x!r} as an arithmetic term")


# ------------------------------------------------------------------ formulas

RELOPS = ("=", "!=", "<", "<=", ">", ">=")


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return conj(self, other)

    def __or__(self, other):
        return disj(self, other)

    def __invert__(self):
        return Not(self)

    def __rshift__(self, other):
        return Implies(self, other)


@dataclass(frozen=True, slots=True)
class Bool(Formula):
    value: bool


TRUE = Bool(True)
FALSE = Bool(False)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    """Boolean state variable, read ``offset`` instants away (0 = now)."""

    p: str
    offset: int = 0


@dataclass(frozen=True, slots=True)
class Rel(Formula):
    lhs: Term
    op: str
    rhs: Term

    def __post_init__(self):
        if self.op not in RELOPS:
            raise ValueError(f"unknown relation {self.op!r}")


@dataclass(frozen=True, slots=True)
class Not(Formula):
    f: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    args: tuple


@dataclass(frozen=True, slots=True)
class Or(Formula):
    args: tuple


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class Next(Formula):
    f: Formula


@dataclass(frozen=True, slots=True)
class Prev(Formula):
    f: Formula


@dataclass(frozen=True, slots=True)
class Until(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class Since(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class Eventually(Formula):
    f: Formula


@dataclass(frozen=True, slots=True)
class Always(Formula):
    f: Formula


@dataclass(frozen=True, slots=True)
class Last(Formula):
    f: Formula


def conj(*fs) -> Formula:
    """Flattened conjunction; ``conj()`` is ``TRUE``."""
    args = []
    for f in fs:
        if isinstance(f, And):
            args.extend(f.args)
        elif f != TRUE:
            args.append(f)
    if not args:
        return TRUE
    return args[0] if len(args) == 1 else And(tuple(args))


def disj(*fs) -> Formula:
    args = []
    for f in fs:
        if isinstance(f, Or):
            args.extend(f.args)
        elif f != FALSE:
            args.append(f)
    if not args:
        return FALSE
    return args[0] if len(args) == 1 else Or(tuple(args))


def not_last() -> Formula:
    """Holds at every instant except the final one."""
    return Next(TRUE)


def steps(body: Formula) -> Formula:
    """``body`` at every instant that has a successor (k = 0..K-1)."""
    return Always(Implies(not_last(), body))


# ------------------------------------------------------------------ traces

@dataclass(frozen=True)
class Trace:
    """Finite valuation of state variables over instants ``0..K``."""

    K: int
    int_vars: Mapping[str, Sequence[int]]
    bool_vars: Mapping[str, Sequence[bool]]

    def __post_init__(self):
        if self.K < 0:
            raise ValueError("trace length K must be >= 0")
        for name, seq in list(self.int_vars.items()) + list(self.bool_vars.items()):
            if len(seq) != self.K + 1:
                raise ValueError(f"{name}: expected {self.K + 1} values, got {len(seq)}")

    def int_at(self, name, k):
        if not 0 <= k <= self.K:
            raise EvaluationError(f"{name} accessed at instant {k}, outside [0, {self.K}]")
        try:
            return self.int_vars[name][k]
        except KeyError:
            raise EvaluationError(f"unknown integer symbol {name!r}") from None

    def bool_at(self, name, k):
        if not 0 <= k <= self.K:
            raise EvaluationError(f"{name} accessed at instant {k}, outside [0, {self.K}]")
        try:
            return self.bool_vars[name][k]
        except KeyError:
            raise EvaluationError(f"unknown boolean symbol {name!r}") from None

    def to_dict(self):
        return {
            "K": self.K,
            "int_vars": {k: list(v) for k, v in self.int_vars.items()},
            "bool_vars": {k: list(v) for k, v in self.bool_vars.items()},
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            int(data["K"]),
            {k: tuple(int(x) for x in v) for k, v in data.get("int_vars", {}).items()},
            {k: tuple(bool(x) for x in v) for k, v in data.get("bool_vars", {}).items()},
        )


TermLike = Union[Term, int]
