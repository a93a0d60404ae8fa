# pyright: reportUnknownMemberType=false

import enum
import functools
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import sympy as sp

import subfactor_workbench.data.bigraph_pairs as bigraph_pairs
import subfactor_workbench.data.catalog as catalog
import subfactor_workbench.graph_ops as graph_ops
import subfactor_workbench.spectral as spectral
from subfactor_workbench.data.bigraph_models import Bigraph, Vertex
from subfactor_workbench.data.bigraph_pairs import BigraphPair
from subfactor_workbench.quadratic_field import ONE, SQRT5, QSqrt5

logger = logging.getLogger(__name__)


class Outcome(enum.Enum):
    ELIMINATED = "ELIMINATED"
    PASSES = "PASSES"
    NOT_APPLICABLE = "NOT_APPLICABLE"
    ELIMINATED_EXTERNAL = "ELIMINATED_EXTERNAL"


@dataclass(frozen=True)
class Verdict:
    check_name: str
    outcome: Outcome
    witness: dict[str, object] = field(default_factory=dict)
    reference: str = ""
    notes: str = ""

    def to_json(self) -> dict[str, object]:
        return {
            "check": self.check_name,
            "outcome": self.outcome.value,
            "witness": self.witness,
            "reference": self.reference,
            "notes": self.notes,
        }


@dataclass(frozen=True)
class PairDimensions:
    plus: spectral.DimensionVector
    minus: spectral.DimensionVector

    def side(self, side: str) -> spectral.DimensionVector:
        return self.plus if side == "plus" else self.minus


def pair_dimensions(pair: BigraphPair) -> PairDimensions:
    return PairDimensions(
        plus=spectral.dimension_vector(pair.plus, SQRT5),
        minus=spectral.dimension_vector(pair.minus, SQRT5),
    )


@functools.lru_cache(maxsize=1024)
def is_index_five(pair: BigraphPair) -> bool:
    return spectral.is_exact_index(pair.plus, 5) and spectral.is_exact_index(pair.minus, 5)


def _vertex_json(vertex: Vertex) -> list[int]:
    return [vertex[0], vertex[1] + 1]


def _resolve_dimensions(
    pair: BigraphPair, dimensions: PairDimensions | None
) -> PairDimensions | None:
    if dimensions is not None:
        return dimensions

    if not is_index_five(pair):
        return None

    return pair_dimensions(pair)


def _needs_index_five(check_name: str, reference: str) -> Verdict:
    return Verdict(
        check_name,
        Outcome.NOT_APPLICABLE,
        {"reason": "norm squared is not exactly 5"},
        reference,
    )


def _sides(pair: BigraphPair) -> list[tuple[str, Bigraph]]:
    return [("plus", pair.plus), ("minus", pair.minus)]


def _canonical_match(pair: BigraphPair, names: Sequence[str]) -> str | None:
    for name in names:
        if bigraph_pairs.pair_isomorphic(
            pair, catalog.lookup(name).pair, allow_opposite=True
        ):
            return name

    return None


ONE_ST_REFERENCE = "index 5 1-supertransitive dichotomy"


def _shared_parent_structure(graph: Bigraph, dimensions: spectral.DimensionVector) -> bool:
    """
    Both depth-2 vertices meet one common depth-3 vertex of dimension √5,
    which meets a single depth-4 vertex of dimension 1
    """

    children = [
        {child for child, _ in graph.children((2, index))}
        for index in range(graph.layer_size(2))
    ]
    common = set.intersection(*children) if children else set[Vertex]()
    if len(common) != 1:
        return False

    shared = next(iter(common))
    if dimensions[shared] != SQRT5:
        return False

    below = graph.children(shared)
    return len(below) == 1 and dimensions[below[0][0]] == ONE


def one_supertransitive_screen(
    pair: BigraphPair, dimensions: PairDimensions | None = None
) -> Verdict:
    name = "one_supertransitive_screen"

    if spectral.supertransitivity(pair.plus) != 1:
        return Verdict(name, Outcome.NOT_APPLICABLE, {}, ONE_ST_REFERENCE)

    resolved = _resolve_dimensions(pair, dimensions)
    if resolved is None:
        return _needs_index_five(name, ONE_ST_REFERENCE)

    depth_two = sorted(resolved.plus.at_depth(2))
    witness: dict[str, object] = {"depth2_dimensions": [str(d) for d in depth_two]}

    if depth_two == [ONE] * 4:
        witness["case"] = "all_units"
    elif depth_two == [QSqrt5(2)] * 2:
        witness["case"] = "two_of_dimension_two"
        witness["shared_parent"] = _shared_parent_structure(pair.plus, resolved.plus)
    else:
        return Verdict(name, Outcome.ELIMINATED, witness, ONE_ST_REFERENCE)

    matched = _canonical_match(pair, (catalog.Z5, catalog.D10))
    if matched is not None:
        witness["matched"] = matched
        return Verdict(name, Outcome.PASSES, witness, ONE_ST_REFERENCE)

    return Verdict(
        name,
        Outcome.ELIMINATED_EXTERNAL,
        witness,
        ONE_ST_REFERENCE,
        notes="annular multiplicity argument, not mechanised",
    )


DUAL_DIMENSION_REFERENCE = "dual objects have equal dimension"


def dual_dimension_mismatch(
    pair: BigraphPair, dimensions: PairDimensions | None = None
) -> Verdict:
    name = "dual_dimension_mismatch"

    resolved = _resolve_dimensions(pair, dimensions)
    if resolved is None:
        return _needs_index_five(name, DUAL_DIMENSION_REFERENCE)

    for side, graph in _sides(pair):
        values = resolved.side(side)
        for vertex in graph.even_vertices():
            partner = graph.dual(vertex)
            if values[vertex] != values[partner]:
                return Verdict(
                    name,
                    Outcome.ELIMINATED,
                    {
                        "graph": side,
                        "vertex": _vertex_json(vertex),
                        "dual": _vertex_json(partner),
                        "dimensions": [str(values[vertex]), str(values[partner])],
                    },
                    DUAL_DIMENSION_REFERENCE,
                )

    return Verdict(name, Outcome.PASSES, {}, DUAL_DIMENSION_REFERENCE)


SUBUNIT_REFERENCE = "every object has dimension at least 1"


def subunit_vertex(pair: BigraphPair, dimensions: PairDimensions | None = None) -> Verdict:
    name = "subunit_vertex"

    resolved = _resolve_dimensions(pair, dimensions)
    if resolved is None:
        return _needs_index_five(name, SUBUNIT_REFERENCE)

    for side, _ in _sides(pair):
        for vertex, value in resolved.side(side).items():
            if value < ONE:
                return Verdict(
                    name,
                    Outcome.ELIMINATED,
                    {
                        "graph": side,
                        "vertex": _vertex_json(vertex),
                        "dimension": str(value),
                        "approximately": float(value),
                    },
                    SUBUNIT_REFERENCE,
                )

    return Verdict(name, Outcome.PASSES, {}, SUBUNIT_REFERENCE)


GROUP_REFERENCE = "dimension-1 objects form a group; self-dual ones are its involutions and identity"

# group order -> possible numbers of self-inverse elements (identity included)
SELF_INVERSE_COUNTS: dict[int, frozenset[int]] = {
    1: frozenset({1}),
    2: frozenset({2}),
    3: frozenset({1}),
    4: frozenset({2, 4}),
    5: frozenset({1}),
    6: frozenset({2, 4}),
}


def invertible_group_obstruction(
    pair: BigraphPair, dimensions: PairDimensions | None = None
) -> Verdict:
    name = "invertible_group_obstruction"

    resolved = _resolve_dimensions(pair, dimensions)
    if resolved is None:
        return _needs_index_five(name, GROUP_REFERENCE)

    witness: dict[str, object] = {}
    applicable = False

    for side, graph in _sides(pair):
        values = resolved.side(side)
        units = [v for v in graph.even_vertices() if values[v] == ONE]
        order = len(units)
        self_dual = sum(1 for v in units if graph.dual(v) == v)
        witness[side] = {"order": order, "self_dual": self_dual}

        allowed = SELF_INVERSE_COUNTS.get(order)
        if allowed is None:
            continue

        applicable = True
        if self_dual not in allowed:
            return Verdict(
                name,
                Outcome.ELIMINATED,
                {
                    "graph": side,
                    "order": order,
                    "self_dual": self_dual,
                    "allowed": sorted(allowed),
                    "units": [_vertex_json(v) for v in units],
                },
                GROUP_REFERENCE,
            )

    if not applicable:
        return Verdict(name, Outcome.NOT_APPLICABLE, witness, GROUP_REFERENCE)

    return Verdict(name, Outcome.PASSES, witness, GROUP_REFERENCE)


SPOKE_REFERENCE = "2^n spoke principal graphs come only from F_q^x inside F_q x F_q^x"


def is_prime_power(q: int) -> bool:
    return q > 1 and len(sp.factorint(q)) == 1


def spoke_2n_obstruction(
    pair: BigraphPair, dimensions: PairDimensions | None = None
) -> Verdict:
    name = "spoke_2n_obstruction"

    params = graph_ops.spoke_params(pair.plus)
    if params is None:
        return Verdict(name, Outcome.NOT_APPLICABLE, {}, SPOKE_REFERENCE)

    witness: dict[str, object] = {"n": params.n, "q": params.q}

    if not is_prime_power(params.q):
        witness["q_prime_power"] = False
        return Verdict(name, Outcome.ELIMINATED, witness, SPOKE_REFERENCE)

    if params.q != 5:
        return Verdict(
            name,
            Outcome.PASSES,
            witness,
            SPOKE_REFERENCE,
            notes=f"no canonical pair embedded for q = {params.q}",
        )

    canonical = catalog.lookup(catalog.SPOKE_CANONICAL).pair
    iso = bigraph_pairs.pair_isomorphic(pair, canonical, allow_opposite=True)
    witness["matches_canonical"] = iso is not None

    if iso is None:
        return Verdict(name, Outcome.ELIMINATED, witness, SPOKE_REFERENCE)

    return Verdict(name, Outcome.PASSES, witness, SPOKE_REFERENCE)


SCHOU_REFERENCE = "4-star principal graphs admitting a connection"


def schou_family(arms: Sequence[int]) -> str | None:
    """
    Name of the admissible 4-star family containing the sorted arm lengths
    """

    a, b, c, d = sorted(arms)

    if a == b and c == d:
        return "S(j,j,k,k)"
    if b == a + 1 and c == a + 1 and 1 <= d - a <= 3:
        return "S(j,j+1,j+1,j+m), 1<=m<=3"
    if (a, b, c, d) == (1, 2, 2, 5):
        return "S(1,2,2,5)"
    if b == a + 1 and c == a + 2 and 2 <= d - a <= 4:
        return "S(j,j+1,j+2,j+m), 2<=m<=4"
    if b == c == d == a + 2:
        return "S(j,j+2,j+2,j+2)"

    return None


def schou_star_obstruction(
    pair: BigraphPair, dimensions: PairDimensions | None = None
) -> Verdict:
    name = "schou_star_obstruction"

    plus_profile = graph_ops.star_profile(pair.plus)
    minus_profile = graph_ops.star_profile(pair.minus)

    if (
        plus_profile is None
        or minus_profile is None
        or plus_profile.arm_count != 4
        or plus_profile.arms != minus_profile.arms
        or plus_profile.star_arm != minus_profile.star_arm
    ):
        return Verdict(name, Outcome.NOT_APPLICABLE, {}, SCHOU_REFERENCE)

    witness: dict[str, object] = {"star": str(plus_profile), "star_arm": plus_profile.star_arm}
    family = schou_family(plus_profile.arms)

    if family is None:
        return Verdict(name, Outcome.ELIMINATED, witness, SCHOU_REFERENCE)

    witness["family"] = family
    return Verdict(name, Outcome.PASSES, witness, SCHOU_REFERENCE)


CONNECTION_REFERENCE = "triple-branch shape needs equal dimensions at the depth-2 and branching depth-4 vertices"


def connection_prerequisite(
    pair: BigraphPair, dimensions: PairDimensions | None = None
) -> Verdict:
    name = "connection_prerequisite"

    shape = catalog.lookup(catalog.TRIPLE_BRANCH_SHAPE).pair
    if bigraph_pairs.pair_isomorphic(pair, shape, allow_opposite=True) is None:
        return Verdict(name, Outcome.NOT_APPLICABLE, {}, CONNECTION_REFERENCE)

    resolved = _resolve_dimensions(pair, dimensions)
    if resolved is None:
        return _needs_index_five(name, CONNECTION_REFERENCE)

    graph = pair.plus
    depth_two = (2, 0)
    branching = next(v for v in graph.vertices() if v[0] == 4 and graph.valence(v) > 1)

    left = resolved.plus[depth_two]
    right = resolved.plus[branching]
    witness: dict[str, object] = {
        "depth2_vertex": _vertex_json(depth_two),
        "depth4_vertex": _vertex_json(branching),
        "dimensions": [str(left), str(right)],
    }

    if left != right:
        return Verdict(name, Outcome.ELIMINATED, witness, CONNECTION_REFERENCE)

    return Verdict(name, Outcome.PASSES, witness, CONNECTION_REFERENCE)


STAR_ARM_REFERENCE = "a 4-star principal graph carries the star on a longest arm"


def star_on_longest_arm(
    pair: BigraphPair, dimensions: PairDimensions | None = None
) -> Verdict:
    name = "star_on_longest_arm"

    applicable = False
    for side, graph in _sides(pair):
        profile = graph_ops.star_profile(graph)
        if profile is None or profile.arm_count != 4:
            continue

        applicable = True
        if not profile.star_on_longest_arm:
            return Verdict(
                name,
                Outcome.ELIMINATED,
                {"graph": side, "star": str(profile), "star_arm": profile.star_arm},
                STAR_ARM_REFERENCE,
            )

    if not applicable:
        return Verdict(name, Outcome.NOT_APPLICABLE, {}, STAR_ARM_REFERENCE)

    return Verdict(name, Outcome.PASSES, {}, STAR_ARM_REFERENCE)


EXTERNAL_REFERENCE = "eliminated by a cited result outside this workbench"


def external_citation(
    pair: BigraphPair, dimensions: PairDimensions | None = None
) -> Verdict:
    name = "external_citation"

    matched = _canonical_match(pair, catalog.EXTERNAL_ELIMINATIONS)
    if matched is None:
        return Verdict(name, Outcome.NOT_APPLICABLE, {}, EXTERNAL_REFERENCE)

    return Verdict(
        name,
        Outcome.ELIMINATED_EXTERNAL,
        {"matched": matched},
        EXTERNAL_REFERENCE,
        notes=catalog.lookup(matched).expected_fate.detail or "",
    )


Check = Callable[[BigraphPair, PairDimensions | None], Verdict]

BATTERY: tuple[tuple[str, Check], ...] = (
    ("one_supertransitive_screen", one_supertransitive_screen),
    ("dual_dimension_mismatch", dual_dimension_mismatch),
    ("subunit_vertex", subunit_vertex),
    ("invertible_group_obstruction", invertible_group_obstruction),
    ("spoke_2n_obstruction", spoke_2n_obstruction),
    ("schou_star_obstruction", schou_star_obstruction),
    ("connection_prerequisite", connection_prerequisite),
    ("star_on_longest_arm", star_on_longest_arm),
    ("external_citation", external_citation),
)


def run_battery(
    pair: BigraphPair,
    short_circuit: bool = False,
    dimensions: PairDimensions | None = None,
) -> list[Verdict]:
    verdicts: list[Verdict] = []
    eliminated = False

    for name, check in BATTERY:
        if eliminated and short_circuit:
            verdicts.append(Verdict(name, Outcome.NOT_APPLICABLE, {"skipped": True}))
            continue

        verdict = check(pair, dimensions)
        logger.debug(f"{name}: {verdict.outcome.value}")
        verdicts.append(verdict)

        if verdict.outcome == Outcome.ELIMINATED:
            eliminated = True

    return verdicts


def first_elimination(verdicts: Sequence[Verdict]) -> Verdict | None:
    return next((v for v in verdicts if v.outcome == Outcome.ELIMINATED), None)
