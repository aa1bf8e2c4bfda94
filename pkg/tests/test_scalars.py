import random
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import random_scalar, scalars
from oddpoisson.scalars import (
    ONE,
    SQRT2,
    SQRT3,
    SQRT6,
    ZERO,
    Scalar,
    format_scalar,
    parse_scalar,
    scalar_add,
    scalar_inv,
    scalar_mul,
    scalar_neg,
)


def test_extension_relations():
    assert SQRT2 * SQRT2 == Scalar(2)
    assert SQRT3 * SQRT3 == Scalar(3)
    assert SQRT6 * SQRT6 == Scalar(6)
    assert SQRT2 * SQRT3 == SQRT6
    assert SQRT2 * SQRT6 == Scalar(0, 0, 2, 0)
    assert SQRT3 * SQRT6 == Scalar(0, 3, 0, 0)


def test_difference_of_squares():
    assert scalar_mul(ONE + SQRT2, ONE - SQRT2) == Scalar(-1)


@pytest.mark.parametrize(
    "x, inv",
    [(Scalar(2), Scalar(Fraction(1, 2))), (SQRT2, Scalar(0, Fraction(1, 2))), (ONE + SQRT2, Scalar(-1, 1))],
)
def test_inverse_examples(x, inv):
    assert scalar_inv(x) == inv


def test_inverse_by_expansion():
    # (1 + r2)(-1 + r2) = -1 + r2 - r2 + 2 = 1
    a, b = (1, 1), (-1, 1)
    prod = (a[0] * b[0] + 2 * a[1] * b[1], a[0] * b[1] + a[1] * b[0])
    assert prod == (1, 0)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        scalar_inv(ZERO)


def test_thousand_random_inverses():
    rng = random.Random(7)
    for _ in range(1000):
        x = random_scalar(rng, nonzero=True)
        assert x * scalar_inv(x) == ONE


@given(scalars, scalars, scalars)
def test_field_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert (x + y) + z == x + (y + z)
    assert x * y == y * x
    assert x + y == scalar_add(y, x)
    assert x * (y + z) == x * y + x * z
    assert x + scalar_neg(x) == ZERO


@given(scalars)
def test_norm_is_nonzero_rational(x):
    n = x.norm()
    assert isinstance(n, Fraction)
    assert (n != 0) == bool(x)
    conj = x.conjugate(True, False) * x.conjugate(False, True) * x.conjugate(True, True) * x
    assert conj == Scalar(n)


@given(scalars)
def test_text_round_trip(x):
    text = format_scalar(x)
    assert parse_scalar(text) == x
    assert format_scalar(parse_scalar(text)) == text


@pytest.mark.parametrize(
    "text, value",
    [
        ("0", ZERO),
        ("1/2 + 3/4 r2", Scalar(Fraction(1, 2), Fraction(3, 4))),
        ("r6", SQRT6),
        ("-r3", -SQRT3),
        ("-2/3 r2 - 5 r6", Scalar(0, Fraction(-2, 3), 0, -5)),
    ],
)
def test_parse_examples(text, value):
    assert parse_scalar(text) == value


def test_equality_is_coordinatewise():
    assert Scalar(1, 2, 3, 4) == Scalar(Fraction(2, 2), 2, 3, 4)
    assert Scalar(1, 2, 3, 4) != Scalar(1, 2, 3, 5)
    assert hash(Scalar(Fraction(3, 3))) == hash(ONE)
