# pyright: reportUnknownMemberType=false
# pyright: reportMissingTypeStubs=false

import functools
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import portion as P
import sympy as sp

from subfactor_workbench.data.bigraph_models import Bigraph, Vertex
from subfactor_workbench.quadratic_field import ONE, SQRT5, ZERO, QSqrt5

logger = logging.getLogger(__name__)

MU = sp.Symbol("mu")

# Width below which a largest-root isolating interval is accepted
ISOLATION_PRECISION: Fraction = Fraction(1, 2**40)


class DimensionInconsistencyError(ValueError):
    pass


class NonPositiveDimensionError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralData:
    char_poly: tuple[int, ...]  # coefficients of det(mu - M M^T), highest degree first
    isolating_interval: P.Interval  # contains the largest root (norm squared)
    exact_target: int | None = None

    @property
    def estimate(self) -> float:
        return float((self.isolating_interval.lower + self.isolating_interval.upper) / 2)

    def to_json(self) -> dict[str, object]:
        return {
            "char_poly": list(self.char_poly),
            "isolating_interval": [
                str(self.isolating_interval.lower),
                str(self.isolating_interval.upper),
            ],
            "estimate": self.estimate,
            "exact_target": self.exact_target,
        }


@dataclass(frozen=True)
class DimensionVector:
    vertices: tuple[Vertex, ...]
    values: tuple[QSqrt5, ...]

    def __getitem__(self, vertex: Vertex) -> QSqrt5:
        return self.values[self.vertices.index(vertex)]

    def at_depth(self, depth: int) -> list[QSqrt5]:
        return [
            value
            for vertex, value in zip(self.vertices, self.values)
            if vertex[0] == depth
        ]

    def items(self) -> list[tuple[Vertex, QSqrt5]]:
        return list(zip(self.vertices, self.values))

    def to_json(self) -> list[dict[str, object]]:
        return [
            {"vertex": [depth, index + 1], "dimension": str(value)}
            for (depth, index), value in self.items()
        ]


def gram_matrix(graph: Bigraph) -> list[list[int]]:
    """
    M M^T on the even vertices, M the even-by-odd multiplicity matrix
    """

    even = graph.even_vertices()
    odd = graph.odd_vertices()
    incidence = [[graph.multiplicity(e, o) for o in odd] for e in even]

    return [
        [sum(x * y for x, y in zip(row_a, row_b)) for row_b in incidence]
        for row_a in incidence
    ]


@functools.lru_cache(maxsize=1024)
def characteristic_polynomial(graph: Bigraph) -> tuple[int, ...]:
    polynomial = sp.Matrix(gram_matrix(graph)).charpoly(MU)
    return tuple(int(c) for c in polynomial.all_coeffs())


def _to_fraction(value: sp.Expr) -> Fraction:
    rational = sp.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def _evaluate(coefficients: Sequence[Fraction], x: Fraction) -> Fraction:
    result = Fraction(0)
    for coefficient in coefficients:
        result = result * x + coefficient

    return result


def polynomial_sturm_chain(polynomial: sp.Poly) -> list[list[Fraction]]:
    """
    Sturm sequence of the square-free part
    """

    square_free = polynomial.sqf_part()
    return [[_to_fraction(c) for c in p.all_coeffs()] for p in square_free.sturm()]


@functools.lru_cache(maxsize=1024)
def _cached_sturm_chain(coefficients: tuple[int, ...]) -> list[list[Fraction]]:
    return polynomial_sturm_chain(sp.Poly(list(coefficients), MU))


def sturm_chain(coefficients: Sequence[int]) -> list[list[Fraction]]:
    return _cached_sturm_chain(tuple(coefficients))


def _sign_variations(chain: Sequence[Sequence[Fraction]], x: Fraction) -> int:
    signs = [value for value in (_evaluate(p, x) for p in chain) if value != 0]
    return sum(1 for left, right in zip(signs, signs[1:]) if (left > 0) != (right > 0))


def count_roots(chain: Sequence[Sequence[Fraction]], lower: Fraction, upper: Fraction) -> int:
    """
    Number of distinct real roots in (lower, upper]
    """

    return _sign_variations(chain, lower) - _sign_variations(chain, upper)


def root_bound(coefficients: Sequence[int]) -> Fraction:
    leading = Fraction(coefficients[0])
    return 1 + max((abs(Fraction(c) / leading) for c in coefficients[1:]), default=Fraction(0))


def largest_root_interval(
    coefficients: Sequence[int], precision: Fraction = ISOLATION_PRECISION
) -> P.Interval:
    fractions = [Fraction(c) for c in coefficients]
    chain = sturm_chain(coefficients)
    bound = root_bound(coefficients)

    lower, upper = -bound, bound
    if count_roots(chain, lower, upper) == 0:
        raise ValueError("Polynomial has no real roots")

    while True:
        if _evaluate(fractions, upper) == 0:
            return P.singleton(upper)

        if upper - lower <= precision and count_roots(chain, lower, upper) == 1:
            return P.closed(lower, upper)

        middle = (lower + upper) / 2
        if count_roots(chain, middle, bound) >= 1:
            lower = middle
        else:
            upper = middle


def is_largest_root(coefficients: Sequence[int], target: int) -> bool:
    if _evaluate([Fraction(c) for c in coefficients], Fraction(target)) != 0:
        return False

    chain = sturm_chain(coefficients)
    return count_roots(chain, Fraction(target), root_bound(coefficients)) == 0


@functools.lru_cache(maxsize=1024)
def norm_squared(graph: Bigraph, target: int | None = None) -> SpectralData:
    coefficients = characteristic_polynomial(graph)
    interval = largest_root_interval(coefficients)

    exact_target = None
    if target is not None and is_largest_root(coefficients, target):
        exact_target = target

    return SpectralData(
        char_poly=coefficients,
        isolating_interval=interval,
        exact_target=exact_target,
    )


@functools.lru_cache(maxsize=1024)
def norms_agree(first: Bigraph, second: Bigraph) -> bool:
    """
    Exact comparison of the largest roots of both characteristic polynomials
    """

    first_coefficients = characteristic_polynomial(first)
    second_coefficients = characteristic_polynomial(second)
    second_chain = sturm_chain(second_coefficients)
    second_bound = root_bound(second_coefficients)

    interval = largest_root_interval(first_coefficients)
    lower, upper = Fraction(interval.lower), Fraction(interval.upper)

    if lower == upper:
        return _evaluate([Fraction(c) for c in second_coefficients], upper) == 0 and (
            count_roots(second_chain, upper, max(upper, second_bound)) == 0
        )

    common = sp.Poly(list(first_coefficients), MU).gcd(sp.Poly(list(second_coefficients), MU))
    if common.degree() <= 0:
        return False

    common_chain = polynomial_sturm_chain(common)
    if count_roots(common_chain, lower, upper) == 0:
        return False

    first_chain = sturm_chain(first_coefficients)
    bound = max(upper, second_bound)
    while count_roots(second_chain, lower, upper) > 1:
        middle = (lower + upper) / 2
        if count_roots(first_chain, middle, upper) >= 1:
            lower = middle
        else:
            upper = middle

    return count_roots(second_chain, upper, bound) == 0


def is_exact_index(graph: Bigraph, target: int = 5) -> bool:
    return norm_squared(graph, target).exact_target == target


@functools.lru_cache(maxsize=1024)
def dimension_vector(graph: Bigraph, delta: QSqrt5 = SQRT5) -> DimensionVector:
    """
    Solves delta * d(v) = sum of multiplicity * d(u) over neighbours u,
    normalised by d(star) = 1
    """

    vertices = list(graph.vertices())
    index = {vertex: i for i, vertex in enumerate(vertices)}
    unknowns = len(vertices) - 1

    # augmented rows over the unknowns d(v), v != star
    rows: list[list[QSqrt5]] = []
    for vertex in vertices:
        coefficients = [ZERO] * len(vertices)
        coefficients[index[vertex]] = coefficients[index[vertex]] + delta
        for neighbour, multiplicity in graph.neighbours(vertex):
            coefficients[index[neighbour]] = coefficients[index[neighbour]] - multiplicity

        rows.append(coefficients[1:] + [-coefficients[0]])

    pivot_row = 0
    for column in range(unknowns):
        pivot = next(
            (r for r in range(pivot_row, len(rows)) if rows[r][column] != 0), None
        )
        if pivot is None:
            raise DimensionInconsistencyError(
                f"delta = {delta} does not determine a unique dimension vector"
            )

        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        scale = rows[pivot_row][column].inverse()
        rows[pivot_row] = [value * scale for value in rows[pivot_row]]

        for r in range(len(rows)):
            if r == pivot_row or rows[r][column] == 0:
                continue

            factor = rows[r][column]
            rows[r] = [a - factor * b for a, b in zip(rows[r], rows[pivot_row])]

        pivot_row += 1

    for row in rows[pivot_row:]:
        if row[-1] != 0:
            raise DimensionInconsistencyError(
                f"delta = {delta} is not an eigenvalue with a star-normalised eigenvector"
            )

    values = [ONE] + [rows[i][-1] for i in range(unknowns)]

    for vertex, value in zip(vertices, values):
        if value.sign() <= 0:
            raise NonPositiveDimensionError(
                f"Vertex {vertex} has non-positive dimension {value}"
            )

    return DimensionVector(vertices=tuple(vertices), values=tuple(values))


def odd_dimension_disagreements(
    plus: Bigraph, minus: Bigraph, delta: QSqrt5 = SQRT5
) -> list[Vertex]:
    plus_dimensions = dimension_vector(plus, delta)
    minus_dimensions = dimension_vector(minus, delta)

    disagreements = [
        vertex
        for vertex in plus.odd_vertices()
        if vertex in minus_dimensions.vertices
        and plus_dimensions[vertex] != minus_dimensions[vertex]
    ]

    if disagreements:
        logger.warning(f"Odd vertex dimensions disagree at {disagreements}")

    return disagreements


def supertransitivity(graph: Bigraph) -> int:
    """
    Largest n with the truncation to depth n a simple path from the star
    """

    n = 0
    for depth in range(1, graph.depth + 1):
        layer = graph.edges[depth - 1]
        if len(layer) != 1 or layer[0] != (1,):
            break

        n = depth

    return n
