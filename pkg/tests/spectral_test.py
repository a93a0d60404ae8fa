from fractions import Fraction

import pytest

import subfactor_workbench.data.bigraph_models as bigraph_models
import subfactor_workbench.data.catalog as catalog
import subfactor_workbench.spectral as spectral
from subfactor_workbench.quadratic_field import ONE, SQRT5, QSqrt5
from subfactor_workbench.spectral import DimensionInconsistencyError

import tests.log_setup as log_setup

logger = log_setup.get_logger(__name__, "logs/spectral-test.log")


def test_z5_characteristic_polynomial():
    graph = catalog.lookup(catalog.Z5).pair.plus
    coefficients = spectral.characteristic_polynomial(graph)

    assert coefficients == (1, -5, 0, 0, 0, 0)
    assert spectral.is_exact_index(graph, 5)


def test_a4_a5_shares_its_cubic():
    graph = catalog.lookup(catalog.A4_A5).pair.plus
    coefficients = spectral.characteristic_polynomial(graph)
    logger.info(f"{coefficients = }")

    # mu^2 (mu^3 - 8 mu^2 + 17 mu - 10), roots 0, 1, 2, 5
    assert coefficients == (1, -8, 17, -10, 0, 0)
    assert spectral.norm_squared(graph, 5).exact_target == 5


def test_single_edge_has_norm_one():
    graph = bigraph_models.parse_bigraph("bwd1duals1")
    data = spectral.norm_squared(graph, 5)

    assert data.char_poly == (1, -1)
    assert data.exact_target is None
    assert data.isolating_interval.lower <= 1 <= data.isolating_interval.upper


def test_isolating_interval_is_tight():
    graph = bigraph_models.parse_bigraph("bwd1v1duals1v1")  # A3, norm squared 2
    data = spectral.norm_squared(graph)

    assert abs(data.estimate - 2) < 1e-9
    assert data.isolating_interval.upper - data.isolating_interval.lower <= Fraction(1, 2**40)


def test_sturm_root_counts():
    chain = spectral.sturm_chain([1, 0, -2])

    assert spectral.count_roots(chain, Fraction(0), Fraction(2)) == 1
    assert spectral.count_roots(chain, Fraction(-2), Fraction(2)) == 2
    assert spectral.count_roots(chain, Fraction(2), Fraction(10)) == 0


def test_largest_root_check():
    assert spectral.is_largest_root([1, -8, 17, -10], 5)
    assert not spectral.is_largest_root([1, -8, 17, -10], 2)
    assert not spectral.is_largest_root([1, -8, 17, -10], 4)


def test_norms_agree():
    z5 = catalog.lookup(catalog.Z5).pair.plus
    z4 = catalog.lookup(catalog.Z4).pair.plus
    d4 = bigraph_models.parse_bigraph("bwd1v1p1duals1v1x2")

    assert spectral.norms_agree(z5, z4)
    assert not spectral.norms_agree(z5, d4)


def test_sturm_chains_are_shared():
    coefficients = spectral.characteristic_polynomial(catalog.lookup(catalog.D10).pair.plus)

    assert spectral.sturm_chain(coefficients) is spectral.sturm_chain(list(coefficients))

    plus = catalog.lookup(catalog.S4_S5).pair.plus
    minus = catalog.lookup(catalog.S4_S5).pair.minus
    assert spectral.norms_agree(plus, minus)
    assert spectral.norms_agree(minus, plus)


def test_s4_s5_dimensions():
    pair = catalog.lookup(catalog.S4_S5).pair
    plus = spectral.dimension_vector(pair.plus)
    minus = spectral.dimension_vector(pair.minus)

    assert plus[(0, 0)] == ONE
    assert plus.at_depth(1) == [SQRT5]
    assert plus.at_depth(2) == [QSqrt5(4)]
    assert plus.at_depth(3) == [3 * SQRT5]
    assert plus.at_depth(4) == [QSqrt5(5), QSqrt5(6)]
    assert plus.at_depth(5) == [2 * SQRT5, 3 * SQRT5]
    assert plus.at_depth(6) == [QSqrt5(5), QSqrt5(4)]
    assert plus.at_depth(7) == [SQRT5]
    assert plus.at_depth(8) == [ONE]

    assert minus.at_depth(4) == [QSqrt5(3), QSqrt5(8)]
    assert minus.at_depth(6) == [QSqrt5(2), QSqrt5(3), QSqrt5(4)]

    assert spectral.odd_dimension_disagreements(pair.plus, pair.minus) == []


def test_d10_dimensions():
    graph = catalog.lookup(catalog.D10).pair.plus
    dimensions = spectral.dimension_vector(graph)

    assert dimensions.at_depth(2) == [QSqrt5(2), QSqrt5(2)]
    assert dimensions.at_depth(3) == [SQRT5]
    assert dimensions.at_depth(4) == [ONE]


def test_candidate_dimensions():
    g1 = spectral.dimension_vector(catalog.lookup("G_1").pair.plus)
    g6 = spectral.dimension_vector(catalog.lookup("G_6").pair.plus)
    g14 = spectral.dimension_vector(catalog.lookup("G_14").pair.plus)

    assert g1.at_depth(4) == [QSqrt5(2), QSqrt5(2), QSqrt5(2), ONE]
    assert g6[(2, 0)] == 4
    assert 2 / SQRT5 in g14.values


def test_wrong_delta_is_inconsistent():
    graph = bigraph_models.parse_bigraph("bwd1v1duals1v1")

    with pytest.raises(DimensionInconsistencyError):
        _ = spectral.dimension_vector(graph, SQRT5)


def test_supertransitivity():
    assert spectral.supertransitivity(catalog.lookup(catalog.S4_S5).pair.plus) == 3
    assert spectral.supertransitivity(catalog.lookup(catalog.Z5).pair.plus) == 1
    assert spectral.supertransitivity(bigraph_models.parse_bigraph("bwd1duals1")) == 1


def test_spectral_json():
    data = spectral.norm_squared(catalog.lookup(catalog.Z5).pair.plus, 5)
    encoded = data.to_json()

    assert encoded["char_poly"] == [1, -5, 0, 0, 0, 0]
    assert encoded["exact_target"] == 5


if __name__ == "__main__":
    test_z5_characteristic_polynomial()
    test_a4_a5_shares_its_cubic()
    test_s4_s5_dimensions()
