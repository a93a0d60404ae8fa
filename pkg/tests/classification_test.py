import dataclasses
import random

import pytest

import subfactor_workbench.classification as classification
import subfactor_workbench.data.bigraph_pairs as bigraph_pairs
import subfactor_workbench.data.catalog as catalog
from subfactor_workbench.classification import ClassificationMismatchError
from subfactor_workbench.data.catalog import CatalogEntry, Fate, FateKind

import tests.log_setup as log_setup
from tests.obstructions_test import ONE_ST_DEPTH_TWO_1_3

logger = log_setup.get_logger(__name__, "logs/classification-test.log")


@pytest.fixture(scope="module")
def report() -> classification.Report:
    return classification.reproduce_classification()


def test_dual_mismatch_candidate():
    record = classification.classify_pair(catalog.lookup("G_1").pair, name="G_1")

    assert record.fate == Fate(FateKind.ELIMINATED, "dual_dimension_mismatch")
    assert record.matched_orientation is None


def test_opposite_of_a_subgroup_is_realised():
    record = classification.classify_pair(catalog.lookup("G_5").pair, name="G_5")

    assert record.fate == Fate(FateKind.REALIZED_UNIQUE, catalog.S4_S5)
    assert record.matched_orientation == "opposite"

    same = classification.classify_pair(catalog.lookup(catalog.Z4).pair)
    assert same.matched_orientation == "same"


def test_wrong_index_is_out_of_scope():
    pair = bigraph_pairs.pair_from_strings("bwd1v1duals1v1", "bwd1v1duals1v1")
    record = classification.classify_pair(pair)

    assert record.fate.kind == FateKind.OUT_OF_SCOPE
    assert record.fate.detail is not None
    assert record.fate.detail.startswith("norm^2 ~ 2.0")


# Five arms of length two around the depth 2 vertex: norm squared 6
SPOKE_2_5 = "bwd1v1v1p1p1p1v1x0x0x0p0x1x0x0p0x0x1x0p0x0x0x1duals1v1v1x2x3x4"


def test_index_is_checked_before_the_battery():
    pair = bigraph_pairs.pair_from_strings(SPOKE_2_5, SPOKE_2_5)
    record = classification.classify_pair(pair)
    logger.info(f"{record.fate = }")

    assert record.fate.kind == FateKind.OUT_OF_SCOPE
    assert record.fate.detail is not None
    assert record.fate.detail.startswith("norm^2 ~ 6.0")


def test_one_supertransitive_screen_decides():
    pair = bigraph_pairs.pair_from_strings(ONE_ST_DEPTH_TWO_1_3, ONE_ST_DEPTH_TWO_1_3)
    record = classification.classify_pair(pair)

    assert record.fate == Fate(FateKind.ELIMINATED, "one_supertransitive_screen")


def test_cylinder_family():
    record = classification.classify_entry(catalog.lookup("Gamma_4621"))
    logger.info(f"{record.fate = }")

    assert record.fate == Fate(FateKind.CYLINDER_FAMILY, "schou_star_obstruction")
    assert len(record.members) == 15
    assert len(record.to_json()["members"]) == 15  # pyright: ignore[reportArgumentType]


def test_invariant_count(report: classification.Report):
    logger.info(f"{report.summary() = }")

    assert report.mismatches == []
    assert report.invariant_count == 7
    assert set(report.survivors) == {
        catalog.Z5,
        catalog.D10,
        catalog.S4_S5,
        catalog.A4_A5,
        catalog.Z4,
    }
    assert report.survivors[catalog.S4_S5] == ["G_5"]
    assert report.survivors[catalog.A4_A5] == ["G_8"]
    assert report.survivors[catalog.Z4] == ["G_13"]
    assert report.self_opposite == {
        catalog.Z5: True,
        catalog.D10: True,
        catalog.S4_S5: False,
        catalog.A4_A5: False,
        catalog.Z4: True,
    }


def test_external_and_schou_fates(report: classification.Report):
    fates = {record.name: record.fate for record in report.records}

    for name in catalog.EXTERNAL_ELIMINATIONS:
        assert fates[name] == Fate(FateKind.ELIMINATED_EXTERNAL, catalog.CHIRALITY_CITATION)

    assert fates["Gamma_5521"] == Fate(FateKind.ELIMINATED, "schou_star_obstruction")
    assert catalog.Z4 not in fates


def test_summary_and_markdown(report: classification.Report):
    summary = report.summary()

    assert summary["total"] == len(report.records)
    assert summary["external"] == 2
    assert summary["standard_invariants"] == 7
    assert summary["mismatches"] == []

    markdown = report.to_markdown()
    assert markdown.startswith("# Index 5 classification")
    assert "Standard invariants at index 5: 7" in markdown
    assert "## Mismatches" not in markdown

    assert set(report.to_json()) == {"summary", "records", "connections"}


def test_dropping_the_triple_branch_keeps_the_count():
    entries = [
        entry for entry in catalog.entries() if entry.name != catalog.TRIPLE_BRANCH_SHAPE
    ]

    assert classification.reproduce_classification(entries).invariant_count == 7


def test_forged_expectation_is_reported():
    entries = [
        classification.with_expected_fate(entry, Fate(FateKind.REALIZED_UNIQUE, catalog.Z5))
        if entry.name == "G_1"
        else entry
        for entry in catalog.entries()
    ]

    with pytest.raises(ClassificationMismatchError) as error:
        _ = classification.reproduce_classification(entries)

    assert "G_1" in str(error.value)
    assert [mismatch.name for mismatch in error.value.report.mismatches] == ["G_1"]

    lenient = classification.reproduce_classification(entries, strict=False)
    assert "## Mismatches" in lenient.to_markdown()


def test_missing_survivor_is_a_mismatch():
    entries = [entry for entry in catalog.entries() if entry.name != "G_13"]

    with pytest.raises(ClassificationMismatchError) as error:
        _ = classification.reproduce_classification(entries)

    report = error.value.report
    assert [mismatch.name for mismatch in report.mismatches] == [
        "survivors",
        "self_opposite",
        "invariant_count",
    ]
    assert report.invariant_count == 6
    assert str(report.mismatches[-1]) == "invariant_count: expected 7, computed 6"


def test_survivors_do_not_depend_on_labels():
    rng = random.Random(11)
    entries: list[CatalogEntry] = []
    for entry in catalog.entries():
        relabelled, _ = bigraph_pairs.random_relabel(entry.pair, rng)
        plus_text, minus_text = relabelled.strings()
        entries.append(dataclasses.replace(entry, plus_text=plus_text, minus_text=minus_text))

    report = classification.reproduce_classification(entries, strict=False)
    logger.info(f"{report.summary() = }")

    assert set(report.survivors) == set(catalog.EXPECTED_SELF_OPPOSITE)
    assert report.self_opposite == catalog.EXPECTED_SELF_OPPOSITE
    assert report.invariant_count == 7

if __name__ == "__main__":
    test_cylinder_family()
    test_invariant_count(classification.reproduce_classification())
