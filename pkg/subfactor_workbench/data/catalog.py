import enum
import functools
from dataclasses import dataclass

import subfactor_workbench.data.bigraph_pairs as bigraph_pairs
from subfactor_workbench.data.bigraph_pairs import BigraphPair


class FateKind(enum.Enum):
    REALIZED_UNIQUE = "REALIZED_UNIQUE"
    ELIMINATED = "ELIMINATED"
    ELIMINATED_EXTERNAL = "ELIMINATED_EXTERNAL"
    CYLINDER_FAMILY = "CYLINDER_FAMILY"
    OUT_OF_SCOPE = "OUT_OF_SCOPE"
    UNRESOLVED = "UNRESOLVED"


@dataclass(frozen=True)
class Fate:
    kind: FateKind
    detail: str | None = None  # check name, matched subgroup, citation or norm

    def __str__(self) -> str:
        if self.detail is None:
            return self.kind.value

        return f"{self.kind.value}({self.detail})"


class Role(enum.Enum):
    CANONICAL = "canonical"
    ONE_SUPERTRANSITIVE = "one_supertransitive"
    CANDIDATE = "candidate"
    ALTERNATE = "alternate"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    plus_text: str
    minus_text: str
    expected_fate: Fate
    role: Role
    source: str
    notes: str = ""

    @property
    def pair(self) -> BigraphPair:
        return _parse_pair(self.plus_text, self.minus_text)

    def to_json(self) -> dict[str, object]:
        return {
            "name": self.name,
            "plus": self.plus_text,
            "minus": self.minus_text,
            "expected_fate": str(self.expected_fate),
            "role": self.role.value,
            "source": self.source,
            "notes": self.notes,
        }


@functools.lru_cache(maxsize=None)
def _parse_pair(plus_text: str, minus_text: str) -> BigraphPair:
    return bigraph_pairs.pair_from_strings(plus_text, minus_text)


def _realized(subgroup: str) -> Fate:
    return Fate(FateKind.REALIZED_UNIQUE, subgroup)


def _eliminated(check: str) -> Fate:
    return Fate(FateKind.ELIMINATED, check)


SUBGROUP_SOURCE = "subgroup subfactor realising an index 5 standard invariant"
CANDIDATE_SOURCE = "candidate pair from the index 5 enumeration"
ONE_ST_SOURCE = "1-supertransitive index 5 pair"

Z5 = "subgroup/1-Z5"
D10 = "subgroup/Z2-D10"
Z4 = "subgroup/Z4-F5xF5*"
A4_A5 = "subgroup/A4-A5"
S4_S5 = "subgroup/S4-S5"

CHIRALITY_CITATION = "external chirality result for 2-supertransitive subfactors"

_G1_BODY = "bwd1v1v1p1v1x0p1x0p1x0p0x1"

CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry(
        name=Z5,
        plus_text="bwd1v1p1p1p1duals1v4x3x2x1",
        minus_text="bwd1v1p1p1p1duals1v4x3x2x1",
        expected_fate=_realized(Z5),
        role=Role.ONE_SUPERTRANSITIVE,
        source=ONE_ST_SOURCE,
    ),
    CatalogEntry(
        name=D10,
        plus_text="bwd1v1p1v1x1v1duals1v1x2v1",
        minus_text="bwd1v1p1v1x1v1duals1v1x2v1",
        expected_fate=_realized(D10),
        role=Role.ONE_SUPERTRANSITIVE,
        source=ONE_ST_SOURCE,
    ),
    CatalogEntry(
        name=Z4,
        plus_text="bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v2x1x3",
        minus_text="bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v2x1x3",
        expected_fate=_realized(Z4),
        role=Role.CANONICAL,
        source=SUBGROUP_SOURCE,
        notes="principal graph is the 2222 spoke",
    ),
    CatalogEntry(
        name=A4_A5,
        plus_text="bwd1v1v1v1p1p1v0x0x1p0x0x1duals1v1v1x2x3",
        minus_text="bwd1v1v1v1p1p1v0x1x0p0x0x1v1x0p0x1duals1v1v1x2x3v2x1",
        expected_fate=_realized(A4_A5),
        role=Role.CANONICAL,
        source=SUBGROUP_SOURCE,
    ),
    CatalogEntry(
        name=S4_S5,
        plus_text="bwd1v1v1v1p1v1x0p0x1v1x1p0x1v0x1v1duals1v1v1x2v1x2v1",
        minus_text="bwd1v1v1v1p1v0x1p0x1v1x0p0x1p0x1v0x0x1v1duals1v1v1x2v1x2x3v1",
        expected_fate=_realized(S4_S5),
        role=Role.CANONICAL,
        source=SUBGROUP_SOURCE,
    ),
    CatalogEntry(
        name="subgroup/S4-S5-alternate",
        plus_text="bwd1v1v1v1p1v1x0p0x1v1x0p1x1v1x0v1duals1v1v1x2v1x2v1",
        minus_text="bwd1v1v1v1p1v0x1p0x1v1x0p1x0p0x1v0x1x0v1duals1v1v1x2v1x2x3v1",
        expected_fate=_realized(S4_S5),
        role=Role.ALTERNATE,
        source=SUBGROUP_SOURCE,
        notes="second presentation of the S4-S5 pair, isomorphic to the first",
    ),
    CatalogEntry(
        name="G_1",
        plus_text=f"{_G1_BODY}duals1v1v4x2x3x1",
        minus_text=f"{_G1_BODY}duals1v1v4x2x3x1",
        expected_fate=_eliminated("dual_dimension_mismatch"),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
    ),
    CatalogEntry(
        name="G_2",
        plus_text=f"{_G1_BODY}duals1v1v4x3x2x1",
        minus_text=f"{_G1_BODY}duals1v1v4x2x3x1",
        expected_fate=_eliminated("dual_dimension_mismatch"),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
    ),
    CatalogEntry(
        name="G_3",
        plus_text=f"{_G1_BODY}duals1v1v4x3x2x1",
        minus_text=f"{_G1_BODY}duals1v1v4x3x2x1",
        expected_fate=_eliminated("dual_dimension_mismatch"),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
    ),
    CatalogEntry(
        name="G_4",
        plus_text="bwd1v1v1p1v1x0p1x0p0x1v0x1x0p0x1x0p0x0x1v1x0x0p0x0x1p0x0x1v0x0x1duals1v1v3x2x1v3x2x1",
        minus_text="bwd1v1v1p1v1x0p1x0p0x1v0x1x0p0x0x1p0x1x0v1x0x0p0x1x0p0x1x0v0x0x1duals1v1v3x2x1v3x2x1",
        expected_fate=_eliminated("subunit_vertex"),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
    ),
    CatalogEntry(
        name="G_5",
        plus_text="bwd1v1v1v1p1v1x0p1x0v1x0p1x0p0x1v1x0x0v1duals1v1v1x2v1x2x3v1",
        minus_text="bwd1v1v1v1p1v1x0p0x1v1x1p1x0v0x1v1duals1v1v1x2v1x2v1",
        expected_fate=_realized(S4_S5),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
        notes="opposite of the S4-S5 pair",
    ),
    CatalogEntry(
        name="G_6",
        plus_text="bwd1v1v1v1p1p1v1x0x0p1x0x0duals1v1v1x2x3",
        minus_text="bwd1v1v1v1p1p1v1x0x0p1x0x0duals1v1v1x2x3",
        expected_fate=_eliminated("connection_prerequisite"),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
    ),
    CatalogEntry(
        name="G_7",
        plus_text="bwd1v1v1v1p1p1v1x0x0p0x1x0v1x0p0x1duals1v1v1x2x3v1x2",
        minus_text="bwd1v1v1v1p1p1v1x0x0p0x1x0v1x0p0x1duals1v1v1x2x3v1x2",
        expected_fate=_eliminated("invertible_group_obstruction"),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
    ),
    CatalogEntry(
        name="G_8",
        plus_text="bwd1v1v1v1p1p1v1x0x0p0x1x0v1x0p0x1duals1v1v1x2x3v2x1",
        minus_text="bwd1v1v1v1p1p1v1x0x0p1x0x0duals1v1v1x2x3",
        expected_fate=_realized(A4_A5),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
        notes="opposite of the A4-A5 pair",
    ),
    CatalogEntry(
        name="G_9",
        plus_text="bwd1v1v1v1p1p1v0x1x0p0x1x0duals1v1v3x2x1",
        minus_text="bwd1v1v1v1p1p1v0x1x0p0x1x0duals1v1v3x2x1",
        expected_fate=Fate(FateKind.ELIMINATED_EXTERNAL, CHIRALITY_CITATION),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
    ),
    CatalogEntry(
        name="G_10",
        plus_text="bwd1v1v1v1p1p1v1x0x0p0x0x1v1x0p0x1duals1v1v3x2x1v1x2",
        minus_text="bwd1v1v1v1p1p1v0x1x0p0x1x0duals1v1v3x2x1",
        expected_fate=_eliminated("invertible_group_obstruction"),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
    ),
    CatalogEntry(
        name="G_11",
        plus_text="bwd1v1v1v1p1p1v1x0x0p0x0x1v1x0p0x1duals1v1v3x2x1v2x1",
        minus_text="bwd1v1v1v1p1p1v1x0x0p0x0x1v1x0p0x1duals1v1v3x2x1v2x1",
        expected_fate=Fate(FateKind.ELIMINATED_EXTERNAL, CHIRALITY_CITATION),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
    ),
    CatalogEntry(
        name="G_12",
        plus_text="bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v1x2x3",
        minus_text="bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v1x2x3",
        expected_fate=_eliminated("spoke_2n_obstruction"),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
    ),
    CatalogEntry(
        name="G_13",
        plus_text="bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v3x2x1",
        minus_text="bwd1v1v1p1p1v1x0x0p0x1x0p0x0x1duals1v1v3x2x1",
        expected_fate=_realized(Z4),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
    ),
    CatalogEntry(
        name="G_14",
        plus_text="bwd1v1v1p1p1v1x0x0p0x1x0v1x0p1x0duals1v1v1x2",
        minus_text="bwd1v1v1p1p1v1x0x0p0x1x0v1x0p1x0duals1v1v1x2",
        expected_fate=_eliminated("subunit_vertex"),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
    ),
    CatalogEntry(
        name="G_15",
        plus_text="bwd1v1v1p1p1v1x0x0p0x1x0v1x0p0x1v1x0p0x1v1x0p0x1duals1v1v2x1v2x1",
        minus_text="bwd1v1v1p1p1v1x0x0p0x1x0v1x0p0x1v1x0p0x1v1x0p0x1duals1v1v2x1v2x1",
        expected_fate=_eliminated("subunit_vertex"),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
    ),
    CatalogEntry(
        name="Gamma_5521",
        plus_text="bwd1v1v1v1v1v1p1p1v1x0x0p0x1x0v1x0v1v1duals1v1v1v1x2x3v1v1",
        minus_text="bwd1v1v1v1v1v1p1p1v1x0x0p0x1x0v1x0v1v1duals1v1v1v1x2x3v1v1",
        expected_fate=_eliminated("schou_star_obstruction"),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
        notes="the 4-star S(1,2,5,5) with the star on a longest arm",
    ),
    CatalogEntry(
        name="Gamma_4621",
        plus_text="bwd1v1v1v1v1p1p1v1x0x0p0x1x0v1x0v1v1v1duals1v1v1v1x2v1v1",
        minus_text="bwd1v1v1v1v1p1p1v1x0x0p0x1x0v1x0v1v1v1duals1v1v1v1x2v1v1",
        expected_fate=Fate(FateKind.CYLINDER_FAMILY, "schou_star_obstruction"),
        role=Role.CANDIDATE,
        source=CANDIDATE_SOURCE,
        notes="vine: translations and stable extensions are classified as a family",
    ),
)

# Translations and stable extensions generated for cylinder entries
CYLINDER_MAX_TRANSLATION = 4
CYLINDER_EXTRA_DEPTHS = 4

# Shapes whose elimination is a citation, not a mechanised check
EXTERNAL_ELIMINATIONS: tuple[str, ...] = ("G_9", "G_11")

SPOKE_CANONICAL = Z4
TRIPLE_BRANCH_SHAPE = "G_6"

# What the classification must reproduce: each survivor and whether it is
# its own opposite. A survivor with a distinct opposite counts twice.
EXPECTED_SELF_OPPOSITE: dict[str, bool] = {
    Z5: True,
    D10: True,
    Z4: True,
    A4_A5: False,
    S4_S5: False,
}
STANDARD_INVARIANT_COUNT = 7


def entries() -> tuple[CatalogEntry, ...]:
    return CATALOG


def lookup(name: str) -> CatalogEntry:
    for entry in CATALOG:
        if entry.name == name:
            return entry

    raise KeyError(f"No catalog entry named {name!r}")


def canonical_entries() -> list[CatalogEntry]:
    return [
        entry
        for entry in CATALOG
        if entry.role in (Role.CANONICAL, Role.ONE_SUPERTRANSITIVE)
    ]
