import json
import pathlib

import pytest

import subfactor_workbench.data.catalog as catalog
from subfactor_workbench.data.pair_records import PairRecord

import tests.log_setup as log_setup

logger = log_setup.get_logger(__name__, "logs/pair-records-test.log")


def test_json_file(tmp_path: pathlib.Path):
    record = PairRecord.from_entry(catalog.lookup("G_6"))
    path = tmp_path / "g6.json"

    record.save_file(path)
    loaded = PairRecord.load_file(path)

    assert loaded == record
    assert json.loads(path.read_text())["expected_fate"] == "ELIMINATED(connection_prerequisite)"


def test_two_line_file(tmp_path: pathlib.Path):
    entry = catalog.lookup(catalog.A4_A5)
    path = tmp_path / "a4a5.txt"
    path.write_text(f"\n{entry.plus_text}\n\n{entry.minus_text}\n")

    loaded = PairRecord.load_file(path)

    assert loaded.name == "a4a5"
    assert loaded.pair == entry.pair


def test_bad_files(tmp_path: pathlib.Path):
    one_line = tmp_path / "one.txt"
    one_line.write_text("bwd1duals1\n")
    with pytest.raises(ValueError):
        _ = PairRecord.load_file(one_line)

    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]")
    with pytest.raises(ValueError):
        _ = PairRecord.load_file(listing)

    with pytest.raises(ValueError):
        _ = PairRecord.from_json({"plus": "bwd1duals1"})

    with pytest.raises(ValueError):
        _ = PairRecord.from_json({"plus": "bwd1duals1", "minus": 3})
