import pytest
from hypothesis import given, strategies as st

from conftest import scalars
from oddpoisson.parsing import ExpressionError, parse_expression, variable
from oddpoisson.scalars import SQRT2
from oddpoisson.superpoly import Family, SuperPolynomial, Theta, VariableId, format_polynomial, p, q, theta


def test_transposition_sign():
    assert parse_expression("T2*T1") == -(Theta(1) * Theta(2))


def test_grammar_exercise():
    expected = Theta(1).scale(SQRT2 / 2) + q(1) * q(1)
    assert parse_expression("1/2 r2 * T1 + q1*q1") == expected


def test_nilpotent_on_parse():
    assert parse_expression("T1*T1").is_zero()


def test_parentheses_and_unary_minus():
    assert parse_expression("-(T1 + q2)*(2 - p1)") == -(Theta(1) + q(2)) * (2 - p(1))
    assert parse_expression("th3 - -1") == theta(3) + 1


def test_multiline_error_position():
    with pytest.raises(ExpressionError) as info:
        parse_expression("T1 +\n  q1 * * T2")
    assert (info.value.line, info.value.column) == (2, 8)


@pytest.mark.parametrize("src", ["T0", "T1 + ", "Y1", "(T1", "T1)", "1/0", "q1 q2", ""])
def test_syntax_errors(src):
    with pytest.raises(ExpressionError):
        parse_expression(src)


def test_index_range():
    assert parse_expression("T3", dim=3) == Theta(3)
    with pytest.raises(ExpressionError) as info:
        parse_expression("T1 + T4", dim=3)
    assert info.value.column == 6


def test_variable_names():
    assert variable("th12") == VariableId(Family.THETA_SMALL, 12)
    assert variable("X1") == VariableId(Family.X, 1)
    with pytest.raises(ExpressionError):
        variable("Z1")


names = st.sampled_from(["T1", "T2", "T3", "th1", "th2", "q1", "q2", "p1", "X3"])
monos = st.tuples(scalars, st.lists(names, max_size=4))


@given(st.lists(monos, max_size=4))
def test_round_trip(terms):
    poly = SuperPolynomial.zero()
    for c, factors in terms:
        m = SuperPolynomial.const(c)
        for f in factors:
            m = m * parse_expression(f)
        poly = poly + m
    text = format_polynomial(poly)
    again = parse_expression(text)
    assert again == poly
    assert format_polynomial(again) == text
