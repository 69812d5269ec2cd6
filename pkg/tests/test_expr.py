from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pinbn.expr import (
    BinOp,
    Const,
    ExpressionError,
    Not,
    Var,
    expression_table,
    minimize_table,
    parse_expression,
    render_expression,
    substitute,
    to_text,
    variables,
)

NAMES = ["a", "b", "c"]


def table(text, names=NAMES):
    return list(expression_table(parse_expression(text), names))


def test_precedence_loosest_to_tightest():
    assert parse_expression("a <-> b -> c | a ^ b & !c") == BinOp(
        "<->", Var("a"),
        BinOp("->", Var("b"),
              BinOp("|", Var("c"),
                    BinOp("^", Var("a"), BinOp("&", Var("b"), Not(Var("c")))))))


def test_implication_is_right_associative():
    assert parse_expression("a -> b -> c") == BinOp("->", Var("a"), BinOp("->", Var("b"), Var("c")))
    assert table("a -> b -> c") == table("a -> (b -> c)")
    assert table("a -> b -> c") != table("(a -> b) -> c")


def test_associative_chains_are_balanced():
    assert parse_expression("a | b | c | a") == BinOp(
        "|", BinOp("|", Var("a"), Var("b")), BinOp("|", Var("c"), Var("a")))
    assert to_text(parse_expression("a | b | c | a")) == "a | b | c | a"
    assert to_text(parse_expression("a <-> b <-> c")) == "a <-> b <-> c"
    assert table("a ^ b ^ c") == table("(a ^ b) ^ c") == table("a ^ (b ^ c)")


def test_constants_and_variables():
    assert parse_expression("!0") == Not(Const(0))
    assert variables(parse_expression("c & (a | c) & b")) == ["c", "a", "b"]


def test_truth_table_order_all_true_first():
    assert table("a", ["a", "b"]) == [1, 1, 0, 0]
    assert table("b", ["a", "b"]) == [1, 0, 1, 0]
    assert table("a <-> b", ["a", "b"]) == [1, 0, 0, 1]
    assert table("a -> b", ["a", "b"]) == [1, 0, 1, 1]
    assert table("a ^ b", ["a", "b"]) == [0, 1, 1, 0]
    assert table("1", []) == [1]


def test_unbound_variable():
    with pytest.raises(KeyError):
        expression_table(parse_expression("a & z"), ["a"])


@pytest.mark.parametrize("text,col", [
    ("a &", 4),
    ("(a | b", 7),
    ("a $ b", 3),
    ("a b", 3),
    ("", 1),
    ("a <- b", 3),
])
def test_syntax_errors_carry_column(text, col):
    with pytest.raises(ExpressionError) as err:
        parse_expression(text)
    assert err.value.col == col


def test_substitute_and_print():
    e = substitute(parse_expression("u <-> f"), {"u": parse_expression("a | b"),
                                                 "f": parse_expression("!c")})
    assert to_text(e) == "a | b <-> !c"
    assert to_text(parse_expression("!!a")) == "a"
    assert to_text(parse_expression("(a -> b) -> c")) == "(a -> b) -> c"
    assert to_text(parse_expression("a & (b | c)")) == "a & (b | c)"


@st.composite
def expressions(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return draw(st.sampled_from([Var("a"), Var("b"), Var("c"), Const(0), Const(1)]))
    if draw(st.integers(0, 4)) == 0:
        return Not(draw(expressions(depth - 1)))
    op = draw(st.sampled_from(["<->", "->", "|", "^", "&"]))
    return BinOp(op, draw(expressions(depth - 1)), draw(expressions(depth - 1)))


@settings(max_examples=300, deadline=None)
@given(expressions())
def test_print_parse_round_trip(e):
    again = parse_expression(to_text(e))
    assert np.array_equal(expression_table(again, NAMES), expression_table(e, NAMES))


def test_render_examples():
    assert render_expression([0, 1], ["x4"]) == "!x4"
    assert render_expression([1, 1, 1, 0], ["x4", "x6"]) == "x4 | x6"
    implies = render_expression([1, 0, 1, 1], ["x4", "x6"])
    assert table(implies, ["x4", "x6"]) == [1, 0, 1, 1]
    assert render_expression([0, 0], ["a"]) == "0"
    assert render_expression([1, 1, 1, 1], ["a", "b"]) == "1"


@pytest.mark.parametrize("k", [1, 2, 3])
def test_render_round_trip_exhaustive(k):
    names = [f"v{m}" for m in range(k)]
    for t in product((0, 1), repeat=1 << k):
        assert table(render_expression(t, names), names) == list(t)


def test_render_round_trip_random_and_large(rng):
    for k in (4, 6, 8, 11, 12):
        names = [f"v{m}" for m in range(k)]
        for _ in range(5):
            t = rng.integers(0, 2, 1 << k)
            assert table(render_expression(t, names), names) == list(t)


def test_render_length_mismatch():
    with pytest.raises(ValueError):
        render_expression([0, 1, 1], ["a", "b"])


def test_minimized_cover_is_prime_and_small():
    # majority of three needs exactly its three pairwise terms
    t = table("a & b | a & c | b & c")
    assert len(minimize_table(t)) == 3
    assert len(minimize_table(table("a | b | c"))) == 3
    assert len(minimize_table(table("a"))) == 1
