import math
from fractions import Fraction

import pytest

from subfactor_workbench.quadratic_field import ONE, SQRT5, ZERO, QSqrt5

import tests.log_setup as log_setup

logger = log_setup.get_logger(__name__, "logs/quadratic-field-test.log")


def test_sqrt5_squares_to_five():
    assert SQRT5 * SQRT5 == 5
    assert (SQRT5 * SQRT5).is_rational


def test_golden_ratio_identity():
    phi = (1 + SQRT5) / 2
    logger.info(f"{phi = }, {phi * phi = }")

    assert phi * phi == phi + 1
    assert phi * phi.conjugate() == -1


def test_sign_and_ordering():
    assert QSqrt5(2, -1).sign() == -1
    assert QSqrt5(-2, 1).sign() == 1
    assert QSqrt5(3, -1).sign() == 1
    assert ZERO.sign() == 0

    assert sorted([QSqrt5(3), SQRT5, QSqrt5(2)]) == [QSqrt5(2), SQRT5, QSqrt5(3)]
    assert QSqrt5(Fraction(2, 5), Fraction(0)) < ONE
    assert 2 / SQRT5 < ONE


def test_inverse_and_division():
    x = QSqrt5(2, 1)

    assert x.inverse() == QSqrt5(-2, 1)
    assert x * x.inverse() == 1
    assert SQRT5 / 5 == QSqrt5(0, Fraction(1, 5))
    assert x**-2 * x**2 == ONE

    with pytest.raises(ZeroDivisionError):
        _ = ONE / ZERO


def test_equality_and_hash_with_rationals():
    assert QSqrt5(3) == 3
    assert hash(QSqrt5(3)) == hash(3)
    assert QSqrt5(Fraction(1, 2)) == Fraction(1, 2)
    assert len({QSqrt5(1, 1), QSqrt5(1, 1), ONE}) == 2


def test_text_forms():
    assert str(SQRT5) == "√5"
    assert str(QSqrt5(2, -3)) == "2-3√5"
    assert str(QSqrt5(Fraction(1, 2), 1)) == "1/2+√5"
    assert str(-SQRT5) == "-√5"
    assert QSqrt5(2, 1).to_json() == {"a": "2", "b": "1", "text": "2+√5"}

    assert math.isclose(float(3 * SQRT5), 3 * math.sqrt(5))


if __name__ == "__main__":
    test_sqrt5_squares_to_five()
    test_golden_ratio_identity()
    test_sign_and_ordering()
    test_inverse_and_division()
    test_equality_and_hash_with_rationals()
    test_text_forms()
