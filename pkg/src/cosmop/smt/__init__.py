"""SMT-LIB2 encoding of bounded temporal formulas and solver sessions."""

from cosmop.smt.backend import Sat, SmtLibProcess, SolverSession, Timeout, Unknown, Unsat, solver_command
from cosmop.smt.encode import AssertionSet, EncodingContext, decode_model, encode, encode_term


def open_session(assertion_set: AssertionSet, config=None, seed=None) -> SolverSession:
    """Fresh solver session loaded with ``assertion_set``.

    ``seed`` (or ``solver.seed`` in ``config``) is passed on as the SMT-LIB
    ``:random-seed`` option.
    """
    if seed is None and config:
        seed = config.get("solver.seed")
    session = SmtLibProcess(config=config, seed=seed)
    for name, sort in assertion_set.declarations:
        session.declare(name, sort)
    for a in assertion_set.assertions:
        session.assert_term(a)
    return session
