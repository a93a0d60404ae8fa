import pytest

import subfactor_workbench.data.bigraph_pairs as bigraph_pairs
import subfactor_workbench.data.catalog as catalog
import subfactor_workbench.spectral as spectral
from subfactor_workbench.data.catalog import Fate, FateKind, Role

import tests.log_setup as log_setup

logger = log_setup.get_logger(__name__, "logs/catalog-test.log")


def test_names_are_unique():
    names = [entry.name for entry in catalog.entries()]

    assert len(names) == len(set(names))


def test_every_entry_parses():
    for entry in catalog.entries():
        plus, minus = entry.pair.strings()
        assert (plus, minus) == (entry.plus_text, entry.minus_text)


def test_canonical_entries():
    names = {entry.name for entry in catalog.canonical_entries()}

    assert names == {catalog.Z5, catalog.D10, catalog.Z4, catalog.A4_A5, catalog.S4_S5}


def test_realised_fates_name_canonical_entries():
    canonical = {entry.name for entry in catalog.canonical_entries()}

    for entry in catalog.entries():
        if entry.expected_fate.kind == FateKind.REALIZED_UNIQUE:
            assert entry.expected_fate.detail in canonical


def test_g12_minus_duals():
    assert catalog.lookup("G_12").minus_text.endswith("duals1v1v1x2x3")


def test_lookup_unknown():
    with pytest.raises(KeyError):
        _ = catalog.lookup("G_99")


def test_alternate_presentation():
    alternate = catalog.lookup("subgroup/S4-S5-alternate")

    assert alternate.role == Role.ALTERNATE
    assert bigraph_pairs.pair_isomorphic(alternate.pair, catalog.lookup(catalog.S4_S5).pair)


def test_every_graph_has_index_five():
    for entry in catalog.entries():
        pair = entry.pair
        exact = [spectral.is_exact_index(graph, 5) for graph in (pair.plus, pair.minus)]

        if entry.name == "Gamma_4621":
            assert exact == [False, False]
        else:
            assert exact == [True, True], entry.name


def test_expected_survivors():
    canonical = {entry.name for entry in catalog.canonical_entries()}
    expected = catalog.EXPECTED_SELF_OPPOSITE

    assert set(expected) == canonical
    assert sum(1 if self_opposite else 2 for self_opposite in expected.values()) == (
        catalog.STANDARD_INVARIANT_COUNT
    )


def test_fate_strings():
    assert str(Fate(FateKind.UNRESOLVED)) == "UNRESOLVED"
    assert str(catalog.lookup("G_6").expected_fate) == "ELIMINATED(connection_prerequisite)"
    assert catalog.lookup("G_6").to_json()["role"] == "candidate"


if __name__ == "__main__":
    test_names_are_unique()
    test_every_entry_parses()
