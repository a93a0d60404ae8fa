import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Self, override

Rational = int | Fraction

SQRT5_FLOAT: float = math.sqrt(5)


@total_ordering
@dataclass(frozen=True)
class QSqrt5:
    """
    Exact element a + b√5 of Q(√5) with rational a, b
    """

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def of(cls, value: "Rational | QSqrt5") -> Self:
        if isinstance(value, cls):
            return value

        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value), Fraction(0))

        raise TypeError(f"Cannot convert {value!r} to QSqrt5")

    @classmethod
    def sqrt5(cls) -> Self:
        return cls(Fraction(0), Fraction(1))

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "QSqrt5":
        return QSqrt5(self.a, -self.b)

    def field_norm(self) -> Fraction:
        return self.a * self.a - 5 * self.b * self.b

    def sign(self) -> int:
        a_sign = (self.a > 0) - (self.a < 0)
        b_sign = (self.b > 0) - (self.b < 0)

        if a_sign == b_sign or b_sign == 0:
            return a_sign

        if a_sign == 0:
            return b_sign

        # a and b of opposite signs: compare a² with 5b²
        difference = self.a * self.a - 5 * self.b * self.b
        return a_sign * ((difference > 0) - (difference < 0))

    def _coerce(self, other: object) -> "QSqrt5 | None":
        if isinstance(other, QSqrt5):
            return other

        if isinstance(other, (int, Fraction)):
            return QSqrt5(Fraction(other), Fraction(0))

        return None

    @override
    def __eq__(self, other: object) -> bool:
        value = self._coerce(other)

        if value is None:
            return NotImplemented

        return self.a == value.a and self.b == value.b

    @override
    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)

        return hash((self.a, self.b))

    def __lt__(self, other: object) -> bool:
        value = self._coerce(other)

        if value is None:
            return NotImplemented

        return (self - value).sign() < 0

    def __add__(self, other: "Rational | QSqrt5") -> "QSqrt5":
        value = self._coerce(other)

        if value is None:
            return NotImplemented

        return QSqrt5(self.a + value.a, self.b + value.b)

    def __radd__(self, other: "Rational | QSqrt5") -> "QSqrt5":
        return self + other

    def __neg__(self) -> "QSqrt5":
        return QSqrt5(-self.a, -self.b)

    def __sub__(self, other: "Rational | QSqrt5") -> "QSqrt5":
        value = self._coerce(other)

        if value is None:
            return NotImplemented

        return QSqrt5(self.a - value.a, self.b - value.b)

    def __rsub__(self, other: "Rational | QSqrt5") -> "QSqrt5":
        return -self + other

    def __mul__(self, other: "Rational | QSqrt5") -> "QSqrt5":
        value = self._coerce(other)

        if value is None:
            return NotImplemented

        return QSqrt5(
            self.a * value.a + 5 * self.b * value.b,
            self.a * value.b + self.b * value.a,
        )

    def __rmul__(self, other: "Rational | QSqrt5") -> "QSqrt5":
        return self * other

    def inverse(self) -> "QSqrt5":
        norm = self.field_norm()

        if norm == 0:
            raise ZeroDivisionError("QSqrt5 division by zero")

        return QSqrt5(self.a / norm, -self.b / norm)

    def __truediv__(self, other: "Rational | QSqrt5") -> "QSqrt5":
        value = self._coerce(other)

        if value is None:
            return NotImplemented

        return self * value.inverse()

    def __rtruediv__(self, other: "Rational | QSqrt5") -> "QSqrt5":
        return QSqrt5.of(other) * self.inverse()

    def __pow__(self, exponent: int) -> "QSqrt5":
        if exponent < 0:
            return self.inverse() ** (-exponent)

        result = QSqrt5(Fraction(1))
        for _ in range(exponent):
            result = result * self

        return result

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * SQRT5_FLOAT

    @override
    def __repr__(self) -> str:
        return f"QSqrt5({self.a}, {self.b})"

    @override
    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)

        if self.b == 1:
            irrational = "√5"
        elif self.b == -1:
            irrational = "-√5"
        else:
            irrational = f"{self.b}√5"

        if self.a == 0:
            return irrational

        return f"{self.a}{'' if irrational.startswith('-') else '+'}{irrational}"

    def to_json(self) -> dict[str, str]:
        return {"a": str(self.a), "b": str(self.b), "text": str(self)}


SQRT5: QSqrt5 = QSqrt5.sqrt5()
ONE: QSqrt5 = QSqrt5(Fraction(1))
ZERO: QSqrt5 = QSqrt5()
