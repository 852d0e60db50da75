import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosmop.errors import EvaluationError, FormulaSyntaxError
from cosmop.logic.ast import (
    TRUE, Always, And, Atom, Const, Eventually, Last, Next, NextTerm, Not, Prev, PrevTerm, Rel,
    Trace, Until, Var, conj, disj, steps,
)
from cosmop.logic.evaluate import collect_symbols, evaluate, normalize
from cosmop.logic.parser import format_formula, parse_formula
from cosmop.tasks import cleanup_goal, load_bundled_goal
from formula_gen import formula_and_trace, formulas

# ------------------------------------------------------------------ parser


def test_parse_always_bound():
    assert parse_formula("G( robot.x <= 2300 )") == Always(Rel(Var("robot.x"), "<=", Const(2300)))


def test_parse_temporary_area_band():
    f = parse_formula("F( obj[1].x >= -1500 & obj[1].x <= -500 )")
    x = Var("obj[1].x")
    assert f == Eventually(And((Rel(x, ">=", Const(-1500)), Rel(x, "<=", Const(-500)))))


def test_parse_object_goal():
    f = parse_formula("Last[ obj[1].x = 1900 & obj[1].y = 1000 & !obj[1].p ]")
    assert f == Last(And((Var("obj[1].x").eq(1900), Var("obj[1].y").eq(1000), Not(Atom("obj[1].p")))))


def test_parse_comments_whitespace_and_terms():
    f = parse_formula("""
        # a comment line
        X(x) - 2*Y(y) + min(x, 3) != max(-1, y)   # trailing comment
    """)
    assert isinstance(f, Rel) and f.op == "!="
    assert collect_symbols(f) == {("x", 0, 1), ("y", -1, 0)}


def test_parse_precedence():
    # & binds tighter than |, which binds tighter than ->, then U, then S
    f = parse_formula("p & q | r -> p U q S r")

    assert f.__class__.__name__ == "Since"
    assert f.lhs.__class__.__name__ == "Until"
    assert f.lhs.lhs.__class__.__name__ == "Implies"
    assert parse_formula("!X p") == Not(Next(Atom("p")))
    assert parse_formula("Y !p") == Prev(Not(Atom("p")))


@pytest.mark.parametrize("text, line, col", [
    ("G( x <= )", 1, 9),
    ("G( x <= 1 + )", 1, 13),
    ("p &\n  & q", 2, 3),
    ("x * y = 1", 1, 3),
    ("Last[p", 1, 7),
])
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(FormulaSyntaxError) as err:
        parse_formula(text)
    assert (err.value.line, err.value.column) == (line, col)


def test_bundled_cleanup_goal_matches_builder():
    assert load_bundled_goal("cleanup.ltl") == cleanup_goal()


@given(formulas())
@settings(max_examples=300)
def test_format_reparses_structurally(f):
    assert parse_formula(format_formula(f)) == f


# ------------------------------------------------------------------ evaluator examples


def _bools(K, **seqs):
    return Trace(K, {}, {k: tuple(v) for k, v in seqs.items()})


def test_always_on_constant_trace():
    assert evaluate(Always(Atom("p")), _bools(3, p=[True] * 4), 0)


def test_until_hand_unrolled():
    p, q = Atom("p"), Atom("q")
    rho = _bools(3, p=[True, True, False, False], q=[False, False, True, False])
    assert evaluate(Until(p, q), rho, 0)
    rho = _bools(3, p=[True, False, False, False], q=[False, False, True, False])
    assert not evaluate(Until(p, q), rho, 0)


@pytest.mark.parametrize("last", [False, True])
def test_last_reads_final_instant(last):
    rho = _bools(4, p=[not last] * 4 + [last])
    assert evaluate(Last(Atom("p")), rho, 0) is last


def test_strong_next_and_prev_at_trace_ends():
    rho = _bools(2, p=[True] * 3)
    assert not evaluate(Next(TRUE), rho, 2)
    assert evaluate(Next(TRUE), rho, 1)
    assert not evaluate(Prev(TRUE), rho, 0)
    assert evaluate(Prev(Atom("p")), rho, 1)


def test_term_offset_outside_trace_is_an_error():
    rho = Trace(1, {"x": (0, 1)}, {})
    f = Rel(NextTerm(Var("x")), ">", Const(0))
    assert evaluate(f, rho, 0)
    with pytest.raises(EvaluationError):
        evaluate(f, rho, 1)
    with pytest.raises(EvaluationError):
        evaluate(Rel(PrevTerm(Var("x")), "=", Const(0)), rho, 0)
    with pytest.raises(EvaluationError):
        evaluate(Atom("missing"), rho, 0)
    with pytest.raises(EvaluationError):
        evaluate(TRUE, rho, 2)


def test_steps_skips_the_last_instant():
    # x grows by one at every instant that has a successor; no access past K
    rho = Trace(3, {"x": (0, 1, 2, 3)}, {})
    x = Var("x")
    assert evaluate(steps(x.next.eq(x + 1)), rho, 0)
    assert not evaluate(steps(x.next.eq(x)), rho, 0)


def test_collect_symbols_examples():
    x, y = Var("x"), Var("y")
    assert collect_symbols(Rel(NextTerm(x), "=", x)) == {("x", 0, 1)}
    assert collect_symbols(Always(Atom("p"))) == {("p", 0, 0)}
    assert collect_symbols(Rel(PrevTerm(PrevTerm(y)), "<", Const(0))) == {("y", -2, 0)}


def test_conj_disj_flatten():
    p, q, r = Atom("p"), Atom("q"), Atom("r")
    assert conj() == TRUE
    assert conj(p) == p
    assert conj(conj(p, q), r) == And((p, q, r))
    assert disj(disj(p, q), r).args == (p, q, r)


def test_trace_shape_checked():
    with pytest.raises(ValueError):
        Trace(2, {"x": (0, 1)}, {})
    rho = Trace(1, {"x": (0, 1)}, {"p": (True, False)})
    assert Trace.from_dict(rho.to_dict()) == rho


# ------------------------------------------------------------------ properties


def _ev(f, rho, k):
    return evaluate(f, rho, k)


@given(formula_and_trace())
@settings(max_examples=500)
def test_eventually_is_true_until(case):
    f, rho, k = case
    assert _ev(Eventually(f), rho, k) == _ev(Until(TRUE, f), rho, k)


@given(formula_and_trace())
@settings(max_examples=500)
def test_always_is_dual_of_eventually(case):
    f, rho, k = case
    assert _ev(Always(f), rho, k) == _ev(Not(Eventually(Not(f))), rho, k)


@given(formula_and_trace())
@settings(max_examples=500)
def test_last_is_eventually_at_end(case):
    f, rho, k = case
    assert _ev(Last(f), rho, k) == _ev(Eventually(And((Not(Next(TRUE)), f))), rho, k)


@given(formula_and_trace())
@settings(max_examples=500)
def test_until_expansion(case):
    f, rho, k = case
    g = Until(f, Not(f)) if isinstance(f, Until) else Until(f, Next(f))
    lhs = _ev(g, rho, k)
    rhs = _ev(g.rhs, rho, k) or (_ev(g.lhs, rho, k) and k < rho.K and _ev(g, rho, k + 1))
    assert lhs == rhs


@given(formula_and_trace())
@settings(max_examples=500)
def test_normalize_preserves_meaning(case):
    f, rho, k = case
    assert _ev(normalize(f), rho, k) == _ev(f, rho, k)


@given(formula_and_trace(), st.integers(0, 3))
def test_evaluation_is_deterministic(case, _):
    f, rho, k = case
    assert _ev(f, rho, k) == _ev(f, rho, k)


def test_normal_form_uses_core_operators_only():
    rng = random.Random(7)
    from formula_gen import random_formula
    core = {"Bool", "Atom", "Rel", "Not", "And", "Next", "Prev", "Until", "Since"}

    def kinds(f):
        yield type(f).__name__
        for child in getattr(f, "args", ()):
            yield from kinds(child)
        for attr in ("f", "lhs", "rhs"):
            child = getattr(f, attr, None)
            if child is not None and not isinstance(f, Rel):
                yield from kinds(child)

    for _ in range(200):
        assert set(kinds(normalize(random_formula(rng)))) <= core
