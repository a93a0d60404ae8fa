import dataclasses
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import subfactor_workbench.connection_solver_torch as connection_solver
import subfactor_workbench.data.bigraph_pairs as bigraph_pairs
import subfactor_workbench.data.catalog as catalog
import subfactor_workbench.graph_ops as graph_ops
import subfactor_workbench.obstructions as obstructions
import subfactor_workbench.spectral as spectral
from subfactor_workbench.config import WorkbenchConfig
from subfactor_workbench.data.bigraph_pairs import BigraphPair
from subfactor_workbench.data.catalog import CatalogEntry, Fate, FateKind, Role
from subfactor_workbench.obstructions import Outcome, Verdict

logger = logging.getLogger(__name__)


@dataclass
class ClassificationRecord:
    name: str | None
    pair: BigraphPair
    plus_spectral: spectral.SpectralData
    minus_spectral: spectral.SpectralData
    supertransitivity: int
    verdicts: list[Verdict]
    fate: Fate
    matched_orientation: str | None = None  # "same" or "opposite" when realised
    members: list["ClassificationRecord"] = field(default_factory=list)

    def to_json(self) -> dict[str, object]:
        plus_text, minus_text = self.pair.strings()
        return {
            "name": self.name,
            "plus": plus_text,
            "minus": minus_text,
            "norm_squared": {
                "plus": self.plus_spectral.to_json(),
                "minus": self.minus_spectral.to_json(),
            },
            "supertransitivity": self.supertransitivity,
            "verdicts": [verdict.to_json() for verdict in self.verdicts],
            "fate": str(self.fate),
            "matched_orientation": self.matched_orientation,
            "members": [member.to_json() for member in self.members],
            "advisories": list(self.pair.advisories),
        }


def _match_canonical(pair: BigraphPair) -> tuple[str, str] | None:
    for entry in catalog.canonical_entries():
        iso = bigraph_pairs.pair_isomorphic(pair, entry.pair, allow_opposite=True)
        if iso is not None:
            return entry.name, "opposite" if iso.swapped else "same"

    return None


def classify_pair(
    pair: BigraphPair, name: str | None = None, short_circuit: bool = False
) -> ClassificationRecord:
    plus_spectral = spectral.norm_squared(pair.plus, 5)
    minus_spectral = spectral.norm_squared(pair.minus, 5)
    index_five = obstructions.is_index_five(pair)

    verdicts = obstructions.run_battery(pair, short_circuit=short_circuit)
    record = ClassificationRecord(
        name=name,
        pair=pair,
        plus_spectral=plus_spectral,
        minus_spectral=minus_spectral,
        supertransitivity=spectral.supertransitivity(pair.plus),
        verdicts=verdicts,
        fate=Fate(FateKind.UNRESOLVED),
    )

    eliminated = obstructions.first_elimination(verdicts)
    external = next(
        (v for v in verdicts if v.outcome == Outcome.ELIMINATED_EXTERNAL), None
    )

    if not index_five:
        record.fate = Fate(FateKind.OUT_OF_SCOPE, f"norm^2 ~ {plus_spectral.estimate:.9f}")
    elif eliminated is not None:
        record.fate = Fate(FateKind.ELIMINATED, eliminated.check_name)
    elif external is not None:
        record.fate = Fate(FateKind.ELIMINATED_EXTERNAL, external.notes or external.reference)
    else:
        matched = _match_canonical(pair)
        if matched is not None:
            record.fate = Fate(FateKind.REALIZED_UNIQUE, matched[0])
            record.matched_orientation = matched[1]

    logger.info(f"{name or pair.strings()[0]}: {record.fate}")
    return record


def classify_cylinder(
    pair: BigraphPair,
    name: str | None = None,
    max_translation: int = catalog.CYLINDER_MAX_TRANSLATION,
    extra_depths: int = catalog.CYLINDER_EXTRA_DEPTHS,
) -> ClassificationRecord:
    """
    Classifies every translation of every stable extension; the family fate
    names the first check that eliminates all members
    """

    members = [
        classify_pair(member, name=f"{name}[{k}]" if name else None)
        for k, member in enumerate(
            graph_ops.translated_stable_extensions(pair, max_translation, extra_depths)
        )
    ]
    base = classify_pair(pair, name=name)
    base.members = members

    for check_name, _ in obstructions.BATTERY:
        if all(
            any(
                v.check_name == check_name and v.outcome == Outcome.ELIMINATED
                for v in member.verdicts
            )
            for member in members
        ):
            base.fate = Fate(FateKind.CYLINDER_FAMILY, check_name)
            return base

    survivors = [m.name for m in members if m.fate.kind != FateKind.ELIMINATED]
    base.fate = Fate(FateKind.UNRESOLVED, f"cylinder members not eliminated: {survivors}")
    return base


def classify_entry(entry: CatalogEntry) -> ClassificationRecord:
    if entry.expected_fate.kind == FateKind.CYLINDER_FAMILY:
        return classify_cylinder(entry.pair, name=entry.name)

    return classify_pair(entry.pair, name=entry.name)


@dataclass(frozen=True)
class Mismatch:
    name: str  # an entry name, or "survivors", "self_opposite", "invariant_count"
    expected: Fate | str
    computed: Fate | str

    def __str__(self) -> str:
        return f"{self.name}: expected {self.expected}, computed {self.computed}"


@dataclass
class Report:
    records: list[ClassificationRecord]
    mismatches: list[Mismatch]
    survivors: dict[str, list[str]]  # canonical name -> entries realising it
    self_opposite: dict[str, bool]
    connections: dict[str, dict[str, object]] = field(default_factory=dict)

    @property
    def invariant_count(self) -> int:
        return sum(1 if self_opposite else 2 for self_opposite in self.self_opposite.values())

    def summary(self) -> dict[str, object]:
        counts: dict[str, int] = {}
        for record in self.records:
            counts[record.fate.kind.value] = counts.get(record.fate.kind.value, 0) + 1

        return {
            "total": len(self.records),
            "eliminated": counts.get(FateKind.ELIMINATED.value, 0)
            + counts.get(FateKind.CYLINDER_FAMILY.value, 0),
            "external": counts.get(FateKind.ELIMINATED_EXTERNAL.value, 0),
            "fates": counts,
            "survivors": self.survivors,
            "self_opposite": self.self_opposite,
            "standard_invariants": self.invariant_count,
            "mismatches": [str(m) for m in self.mismatches],
        }

    def to_json(self) -> dict[str, object]:
        return {
            "summary": self.summary(),
            "records": [record.to_json() for record in self.records],
            "connections": self.connections,
        }

    def to_markdown(self) -> str:
        lines = [
            "# Index 5 classification",
            "",
            "| entry | fate | first decisive check |",
            "| --- | --- | --- |",
        ]
        for record in self.records:
            decisive = next(
                (
                    v.check_name
                    for v in record.verdicts
                    if v.outcome in (Outcome.ELIMINATED, Outcome.ELIMINATED_EXTERNAL)
                ),
                "",
            )
            lines.append(f"| {record.name} | {record.fate} | {decisive} |")

        lines += ["", "## Survivors", ""]
        for canonical, names in self.survivors.items():
            orientation = "self-opposite" if self.self_opposite[canonical] else "with distinct opposite"
            lines.append(f"- {canonical} ({orientation}): {', '.join(names)}")

        lines += ["", f"Standard invariants at index 5: {self.invariant_count}"]

        if self.connections:
            lines += ["", "## Connections (numerical evidence)", ""]
            for name, evidence in self.connections.items():
                lines.append(f"- {name}: {evidence.get('orbits')}")

        if self.mismatches:
            lines += ["", "## Mismatches", ""]
            lines += [f"- {mismatch}" for mismatch in self.mismatches]

        return "\n".join(lines) + "\n"


class ClassificationMismatchError(ValueError):
    report: Report

    def __init__(self, report: Report):
        super().__init__(
            "Classification disagrees with the catalog:\n"
            + "\n".join(str(mismatch) for mismatch in report.mismatches)
        )
        self.report = report


CONNECTION_EVIDENCE: tuple[str, ...] = (catalog.S4_S5, catalog.Z4, catalog.Z5)


def connection_evidence(
    pair: BigraphPair, config: WorkbenchConfig
) -> dict[str, object]:
    solver = connection_solver.ConnectionSolverTorch.from_config(pair, config)
    result = solver.solve()
    orbits = solver.count_orbits()

    return {
        "cells": solver.cell_complex.to_json(),
        "solve": {
            key: value for key, value in result.to_json().items() if key != "best"
        },
        "orbits": orbits.to_json(),
    }


def _summary_mismatches(report: Report) -> list[Mismatch]:
    expected = catalog.EXPECTED_SELF_OPPOSITE
    mismatches: list[Mismatch] = []

    if set(report.survivors) != set(expected):
        mismatches.append(
            Mismatch("survivors", str(sorted(expected)), str(sorted(report.survivors)))
        )

    if report.self_opposite != expected:
        mismatches.append(
            Mismatch(
                "self_opposite",
                str(dict(sorted(expected.items()))),
                str(dict(sorted(report.self_opposite.items()))),
            )
        )

    if report.invariant_count != catalog.STANDARD_INVARIANT_COUNT:
        mismatches.append(
            Mismatch(
                "invariant_count",
                str(catalog.STANDARD_INVARIANT_COUNT),
                str(report.invariant_count),
            )
        )

    return mismatches


def reproduce_classification(
    entries: Sequence[CatalogEntry] | None = None,
    strict: bool = True,
    with_connections: bool = False,
    config: WorkbenchConfig | None = None,
) -> Report:
    """
    Classifies every non-canonical catalog entry, compares against the
    expected fates and counts the surviving standard invariants
    """

    if entries is None:
        entries = catalog.entries()

    records: list[ClassificationRecord] = []
    mismatches: list[Mismatch] = []
    survivors: dict[str, list[str]] = {}

    for entry in entries:
        if entry.role == Role.CANONICAL:
            continue

        record = classify_entry(entry)
        records.append(record)

        if record.fate != entry.expected_fate:
            mismatch = Mismatch(entry.name, entry.expected_fate, record.fate)
            logger.warning(str(mismatch))
            mismatches.append(mismatch)

        if record.fate.kind == FateKind.REALIZED_UNIQUE and entry.role != Role.ALTERNATE:
            assert record.fate.detail is not None
            survivors.setdefault(record.fate.detail, []).append(entry.name)

    self_opposite = {
        name: bigraph_pairs.pair_isomorphic(
            catalog.lookup(name).pair, bigraph_pairs.opposite(catalog.lookup(name).pair)
        )
        is not None
        for name in survivors
    }

    report = Report(
        records=records,
        mismatches=mismatches,
        survivors=survivors,
        self_opposite=self_opposite,
    )

    for mismatch in _summary_mismatches(report):
        logger.warning(str(mismatch))
        mismatches.append(mismatch)

    if with_connections:
        config = config or WorkbenchConfig()
        for name in CONNECTION_EVIDENCE:
            report.connections[name] = connection_evidence(catalog.lookup(name).pair, config)

    if strict and mismatches:
        raise ClassificationMismatchError(report)

    return report


def with_expected_fate(entry: CatalogEntry, fate: Fate) -> CatalogEntry:
    return dataclasses.replace(entry, expected_fate=fate)
