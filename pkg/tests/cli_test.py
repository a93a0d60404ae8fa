import json
import pathlib

import pytest

import subfactor_workbench.cli as cli
import subfactor_workbench.data.catalog as catalog
from subfactor_workbench.data.pair_records import PairRecord

import tests.log_setup as log_setup

logger = log_setup.get_logger(__name__, "logs/cli-test.log")


def _run(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, str]:
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_parse(capsys: pytest.CaptureFixture[str]):
    code, out = _run(capsys, "parse", "bwd1v1duals1v1")
    data = json.loads(out)

    assert code == cli.EXIT_OK
    assert data["depth"] == 2
    assert data["layer_sizes"] == [1, 1, 1]
    assert data["duals"] == [[1], [1]]


def test_bad_string_is_an_input_error(capsys: pytest.CaptureFixture[str]):
    code = cli.main(["parse", "bwd1v1duals"])
    captured = capsys.readouterr()

    assert code == cli.EXIT_INPUT_ERROR
    assert "error:" in captured.err


def test_info(capsys: pytest.CaptureFixture[str]):
    code, out = _run(capsys, "info", catalog.Z5)
    data = json.loads(out)

    assert code == cli.EXIT_OK
    assert data["name"] == catalog.Z5
    assert data["index_five"] is True
    assert "dimensions" in data["plus"]


def test_obstruct_short_circuit(capsys: pytest.CaptureFixture[str]):
    code, out = _run(capsys, "obstruct", "G_1", "--short-circuit")
    verdicts = json.loads(out)

    assert code == cli.EXIT_OK
    assert verdicts[1]["outcome"] == "ELIMINATED"
    assert verdicts[-1]["witness"] == {"skipped": True}


def test_iso(capsys: pytest.CaptureFixture[str]):
    _, out = _run(capsys, "iso", catalog.S4_S5, "G_5")
    assert json.loads(out)["isomorphic"] is False

    _, out = _run(capsys, "iso", catalog.S4_S5, "G_5", "--opposite")
    data = json.loads(out)
    assert data["isomorphic"] is True
    assert data["iso"]["swapped"] is True


def test_classify_from_file(capsys: pytest.CaptureFixture[str], tmp_path: pathlib.Path):
    path = tmp_path / "candidate.json"
    PairRecord.from_entry(catalog.lookup("G_7")).save_file(path)

    code, out = _run(capsys, "classify", str(path))
    records = json.loads(out)

    assert code == cli.EXIT_OK
    assert records[0]["name"] == "G_7"
    assert records[0]["fate"] == "ELIMINATED(invertible_group_obstruction)"


def test_classify_needs_a_pair(capsys: pytest.CaptureFixture[str]):
    assert cli.main(["classify"]) == cli.EXIT_INPUT_ERROR
    _ = capsys.readouterr()


def test_comma_separated_pair():
    name, pair = cli.resolve_pair("bwd1v1duals1v1, bwd1v1duals1v1")

    assert name is None
    assert pair.plus == pair.minus


def test_report(capsys: pytest.CaptureFixture[str]):
    code, out = _run(capsys, "report", "--markdown")

    assert code == cli.EXIT_OK
    assert "Standard invariants at index 5: 7" in out


def test_report_exits_with_mismatch_when_a_survivor_is_lost(
    capsys: pytest.CaptureFixture[str], monkeypatch: pytest.MonkeyPatch
):
    kept = tuple(entry for entry in catalog.entries() if entry.name != "G_13")
    monkeypatch.setattr(catalog, "entries", lambda: kept)

    code, out = _run(capsys, "report", "--markdown")

    assert code == cli.EXIT_MISMATCH
    assert "Standard invariants at index 5: 6" in out
    assert "- invariant_count: expected 7, computed 6" in out


def test_config_file(capsys: pytest.CaptureFixture[str], tmp_path: pathlib.Path):
    env = tmp_path / "workbench.env"
    env.write_text("log_level=loud\n")

    assert cli.main(["--config", str(env), "parse", "bwd1duals1"]) == cli.EXIT_INPUT_ERROR
    _ = capsys.readouterr()


if __name__ == "__main__":
    print(cli.main(["report", "--markdown"]))
