import json
import pathlib
from dataclasses import dataclass
from typing import Self, cast

import subfactor_workbench.data.bigraph_pairs as bigraph_pairs
from subfactor_workbench.data.bigraph_pairs import BigraphPair
from subfactor_workbench.data.catalog import CatalogEntry


# A pair as stored on disk: either a JSON object with "plus"/"minus" (and an
# optional "name"), or a text file with the two bigraph strings on two lines
@dataclass(frozen=True)
class PairRecord:
    plus: str
    minus: str
    name: str | None = None
    expected_fate: str | None = None

    @property
    def pair(self) -> BigraphPair:
        return bigraph_pairs.pair_from_strings(self.plus, self.minus)

    @classmethod
    def from_pair(cls, pair: BigraphPair, name: str | None = None) -> Self:
        plus, minus = pair.strings()
        return cls(plus=plus, minus=minus, name=name)

    @classmethod
    def from_entry(cls, entry: CatalogEntry) -> Self:
        return cls(
            plus=entry.plus_text,
            minus=entry.minus_text,
            name=entry.name,
            expected_fate=str(entry.expected_fate),
        )

    @classmethod
    def from_json(cls, data: dict[str, object]) -> Self:
        try:
            plus, minus = data["plus"], data["minus"]
        except KeyError as error:
            raise ValueError(f"Pair record is missing key {error}") from error

        if not isinstance(plus, str) or not isinstance(minus, str):
            raise ValueError("Pair record 'plus' and 'minus' must be strings")

        name = data.get("name")
        expected = data.get("expected_fate")
        return cls(
            plus=plus,
            minus=minus,
            name=name if isinstance(name, str) else None,
            expected_fate=expected if isinstance(expected, str) else None,
        )

    def to_json(self) -> dict[str, object]:
        data: dict[str, object] = {"plus": self.plus, "minus": self.minus}
        if self.name is not None:
            data["name"] = self.name
        if self.expected_fate is not None:
            data["expected_fate"] = self.expected_fate

        return data

    @classmethod
    def load_file(cls, path: pathlib.Path) -> Self:
        text = path.read_text()

        if path.suffix == ".json":
            data = json.loads(text)
            if not isinstance(data, dict):
                raise ValueError(f"{path} does not hold a JSON object")
            return cls.from_json(cast(dict[str, object], data))

        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if len(lines) != 2:
            raise ValueError(f"{path} must hold exactly two bigraph lines, found {len(lines)}")

        return cls(plus=lines[0], minus=lines[1], name=path.stem)

    def save_file(self, path: pathlib.Path):
        if path.suffix == ".json":
            path.write_text(json.dumps(self.to_json(), indent=2) + "\n")
        else:
            path.write_text(f"{self.plus}\n{self.minus}\n")

