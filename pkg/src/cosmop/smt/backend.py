"""Solver sessions.

:class:`SolverSession` does the bookkeeping (declarations, sort checks,
state machine); :class:`SmtLibProcess` ships the accumulated problem to any
SMT-LIB2 executable over a pipe and parses the model it prints.
"""

from __future__ import annotations

import logging
import os
import shlex
import subprocess
from dataclasses import dataclass, field

from cosmop.errors import SolverError
from cosmop.smt import sexpr
from cosmop.smt.terms import check_term, evaluate_term, quote, to_smtlib

log = logging.getLogger(__name__)

DEFAULT_SOLVER_CMD = "z3 -in"
SORTS = ("Int", "Bool")


@dataclass(frozen=True)
class Sat:
    model: dict = field(repr=False)


@dataclass(frozen=True)
class Unsat:
    pass


@dataclass(frozen=True)
class Unknown:
    reason: str


@dataclass(frozen=True)
class Timeout:
    timeout_ms: int


def solver_command(config=None) -> list[str]:
    """Solver argv: ``COSMOP_SMT_CMD`` wins over ``solver.cmd`` in ``config``."""
    cmd = os.environ.get("COSMOP_SMT_CMD") or (config or {}).get("solver.cmd") or DEFAULT_SOLVER_CMD
    return shlex.split(cmd)


class SolverSession:
    """One-shot satisfiability query over QF_LIA with Booleans."""

    logic = "QF_LIA"

    def __init__(self, seed: int | None = None):
        self.sorts: dict[str, str] = {}
        self.assertions: list = []
        self.state = "open"
        self.seed = seed

    def _require_open(self):
        if self.state != "open":
            raise SolverError(f"session is {self.state}; only open sessions accept input")

    def declare(self, name: str, sort: str) -> str:
        self._require_open()
        if sort not in SORTS:
            raise SolverError(f"unsupported sort {sort!r}")
        if name in self.sorts:
            raise SolverError(f"duplicate declaration of {name!r}")
        quote(name)
        self.sorts[name] = sort
        return name

    def assert_term(self, term) -> None:
        self._require_open()
        check_term(term, self.sorts)
        self.assertions.append(term)

    def check(self, timeout_ms: int = 120_000, verify: bool = True):
        self._require_open()
        result = self._solve(timeout_ms)
        if isinstance(result, Sat):
            model = {n: result.model.get(n, 0 if s == "Int" else False) for n, s in self.sorts.items()}
            result = Sat(model)
            if verify:
                bad = first_violated(self.assertions, model)
                if bad is not None:
                    raise SolverError(f"solver model violates assertion: {to_smtlib(bad)[:200]}")
            self.state = "checked-sat"
        elif isinstance(result, Unsat):
            self.state = "checked-unsat"
        else:
            self.state = "closed"
        return result

    def _solve(self, timeout_ms):
        raise NotImplementedError

    def close(self):
        self.state = "closed"

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def seed_options(self, seed: int) -> list[str]:
        return [f"(set-option :random-seed {seed})"]

    def script(self) -> str:
        lines = ["(set-option :produce-models true)"]
        if self.seed is not None:
            lines += self.seed_options(int(self.seed))
        lines.append(f"(set-logic {self.logic})")
        lines += [f"(declare-const {quote(n)} {s})" for n, s in self.sorts.items()]
        lines += [f"(assert {to_smtlib(a)})" for a in self.assertions]
        lines += ["(check-sat)", "(get-model)", "(exit)"]
        return "\n".join(lines) + "\n"


def first_violated(assertions, model):
    for a in assertions:
        if evaluate_term(a, model) is not True:
            return a
    return None


class SmtLibProcess(SolverSession):
    def __init__(self, cmd=None, config=None, seed=None):
        super().__init__(seed)
        self.cmd = list(cmd) if cmd else solver_command(config)

    def seed_options(self, seed: int) -> list[str]:
        opts = super().seed_options(seed)
        # z3 accepts the standard option but its SMT core only reads its own
        # seed, so without this every repetition replays the same search
        if os.path.basename(self.cmd[0]).startswith("z3"):
            opts.append(f"(set-option :smt.random_seed {seed})")
        return opts

    def _solve(self, timeout_ms):
        script = self.script()
        try:
            proc = subprocess.run(self.cmd, input=script, capture_output=True, text=True,
                                  timeout=timeout_ms / 1000.0)
        except subprocess.TimeoutExpired:
            return Timeout(timeout_ms)
        except OSError as exc:
            return Unknown(f"cannot start solver {self.cmd!r}: {exc}")
        return parse_response(proc.stdout, proc.stderr, proc.returncode)


def parse_response(stdout: str, stderr: str = "", returncode: int = 0):
    try:
        exprs = sexpr.read_all(stdout)
    except SolverError as exc:
        return Unknown(f"unparseable solver output: {exc}")
    if not exprs:
        return Unknown(f"solver produced no verdict (exit {returncode}): {stderr.strip()[:200]}")
    verdict = exprs[0]
    if verdict == "unsat":
        return Unsat()
    if verdict == "unknown":
        return Unknown("solver answered unknown")
    if verdict != "sat":
        return Unknown(f"unexpected solver reply {verdict!r}")
    if len(exprs) < 2:
        return Unknown("solver answered sat but printed no model")
    return Sat(parse_model(exprs[1]))


def parse_model(expr) -> dict:
    if isinstance(expr, list) and expr and expr[0] == "model":
        expr = expr[1:]
    if isinstance(expr, list) and expr and expr[0] == "error":
        raise SolverError(f"solver error: {expr[1:]}")
    model = {}
    for entry in expr:
        if not (isinstance(entry, list) and len(entry) == 5 and entry[0] == "define-fun"):
            raise SolverError(f"unexpected model entry {entry!r}")
        _, name, params, _sort, value = entry
        if params:
            continue  # function definitions are irrelevant to constant models
        model[name] = sexpr.value_of(value)
    return model
