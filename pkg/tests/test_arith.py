import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import arith_eval, arith_text, random_arith_tree, OracleError
from smolsh.arith import ArithError, evaluate_text, var_value, wrap
from smolsh.state import ReadonlyError, ShellState

# values recorded from dash
DASH_VALUES = [
    ("-7/2", -3), ("-7%2", -1), ("7%-2", 1), ("1<<63", -9223372036854775808), ("010", 8),
    ("0x1f", 31), ("9223372036854775807+1", -9223372036854775808), ("~5", -6), ("!0", 1),
    ("1?2:3", 2), ("-8>>1", -4), ("3&&0", 0), ("0||4", 1), ("1<<64", 1), ("2+3*4", 14),
]


@pytest.mark.parametrize("src,value", DASH_VALUES)
def test_matches_dash(src, value):
    assert evaluate_text(ShellState(), src) == value


def test_assignment_updates_state():
    sh = ShellState()
    sh.set_global("y", "42")
    assert evaluate_text(sh, "y += 5") == 47
    assert sh.lookup("y") == "47"


def test_postfix_and_prefix():
    sh = ShellState()
    sh.set_global("i", "1")
    assert evaluate_text(sh, "i++") == 1 and sh.lookup("i") == "2"
    assert evaluate_text(sh, "--i") == 1 and sh.lookup("i") == "1"


def test_short_circuit_skips_side_effects():
    sh = ShellState()
    assert evaluate_text(sh, "0 && (z = 1)") == 0
    assert sh.lookup("z") is None


def test_division_by_zero():
    with pytest.raises(ArithError):
        evaluate_text(ShellState(), "1/0")
    with pytest.raises(ArithError):
        evaluate_text(ShellState(), "1%0")


def test_variable_text_forms():
    assert var_value(None) == 0 and var_value("") == 0
    assert var_value(" 12 ") == 12 and var_value("-0x10") == -16
    with pytest.raises(ArithError):
        var_value("abc")


def test_bad_octal_is_error():
    with pytest.raises(ArithError):
        evaluate_text(ShellState(), "08")


def test_readonly_assignment_fails():
    sh = ShellState()
    sh.set_global("r", "1")
    sh.set_readonly("r")
    with pytest.raises(ArithError):
        evaluate_text(sh, "r = 2")
    with pytest.raises(ReadonlyError):
        sh.set_global("r", "3")


def test_wrap():
    assert wrap(2 ** 63) == -2 ** 63 and wrap(-1) == -1 and wrap(2 ** 64 + 5) == 5


PURE = st.recursive(
    st.integers(0, 99).map(str) | st.sampled_from(["x", "y"]),
    lambda inner: st.tuples(inner, st.sampled_from(["+", "-", "*", "<", "==", "&", "|", "^"]), inner)
    .map(lambda t: "(%s %s %s)" % t),
    max_leaves=8,
)


@given(PURE)
def test_pure_expression_leaves_state_unchanged(src):
    sh = ShellState()
    sh.set_global("x", "3")
    sh.set_global("y", "-4")
    before = sh.visible_vars()
    evaluate_text(sh, src)
    assert sh.visible_vars() == before


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_agrees_with_oracle(seed):
    rng = random.Random(seed)
    tree = random_arith_tree(rng, 4)
    env = {"x": rng.randint(-50, 50), "y": rng.randint(-5, 5), "z": rng.randint(0, 70)}
    sh = ShellState()
    for k, v in env.items():
        sh.set_global(k, str(v))
    try:
        expected = arith_eval(tree, dict(env))
    except OracleError:
        with pytest.raises(ArithError):
            evaluate_text(sh, arith_text(tree))
        return
    assert evaluate_text(sh, arith_text(tree)) == expected

