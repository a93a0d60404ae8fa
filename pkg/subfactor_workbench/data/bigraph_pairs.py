import logging
import random
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import subfactor_workbench.data.bigraph_models as bigraph_models
import subfactor_workbench.spectral as spectral
from subfactor_workbench.data.bigraph_models import Bigraph, Vertex

logger = logging.getLogger(__name__)

Perms = tuple[tuple[int, ...], ...]


class PairMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class BigraphPair:
    """
    Principal graph (plus) and dual principal graph (minus). Odd vertices
    are identified by their position inside each odd layer.
    """

    plus: Bigraph
    minus: Bigraph
    advisories: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if abs(self.plus.depth - self.minus.depth) > 1:
            raise PairMismatchError(
                f"Depths {self.plus.depth} and {self.minus.depth} differ by more than one"
            )

        for depth in range(1, self.depth + 1, 2):
            plus_size = self.plus.layer_size(depth)
            minus_size = self.minus.layer_size(depth)
            if plus_size != minus_size:
                raise PairMismatchError(
                    f"Odd depth {depth} has {plus_size} vertices in the principal graph "
                    + f"and {minus_size} in the dual principal graph"
                )

    @property
    def depth(self) -> int:
        return max(self.plus.depth, self.minus.depth)

    def odd_vertices(self) -> list[Vertex]:
        return self.plus.odd_vertices()

    def graph(self, side: str) -> Bigraph:
        match side:
            case "plus":
                return self.plus
            case "minus":
                return self.minus
            case _:
                raise ValueError(f"Unknown side {side!r}")

    def strings(self) -> tuple[str, str]:
        return (
            bigraph_models.serialize_bigraph(self.plus),
            bigraph_models.serialize_bigraph(self.minus),
        )


@dataclass(frozen=True)
class PairIso:
    """
    plus_perms[d][i] is the image index of vertex i at depth d. When swapped
    is set the target is the opposite of the second pair.
    """

    plus_perms: Perms
    minus_perms: Perms
    swapped: bool = False

    def inverse(self) -> "PairIso":
        plus_inverse = _invert_all(self.plus_perms)
        minus_inverse = _invert_all(self.minus_perms)

        if self.swapped:
            return PairIso(minus_inverse, plus_inverse, swapped=True)

        return PairIso(plus_inverse, minus_inverse)

    def to_json(self) -> dict[str, object]:
        return {
            "swapped": self.swapped,
            "plus": [[i + 1 for i in perm] for perm in self.plus_perms],
            "minus": [[i + 1 for i in perm] for perm in self.minus_perms],
        }


def _invert(perm: Sequence[int]) -> tuple[int, ...]:
    inverse = [0] * len(perm)
    for index, image in enumerate(perm):
        inverse[image] = index

    return tuple(inverse)


def _invert_all(perms: Perms) -> Perms:
    return tuple(_invert(perm) for perm in perms)


def make_pair(plus: Bigraph, minus: Bigraph) -> BigraphPair:
    advisories: list[str] = []
    if not spectral.norms_agree(plus, minus):
        advisories.append("principal and dual principal graphs have different norms")

    for advisory in advisories:
        logger.warning(f"make_pair: {advisory}")

    return BigraphPair(plus=plus, minus=minus, advisories=tuple(advisories))


def pair_from_strings(plus_text: str, minus_text: str) -> BigraphPair:
    return make_pair(
        bigraph_models.parse_bigraph(plus_text),
        bigraph_models.parse_bigraph(minus_text),
    )


def opposite(pair: BigraphPair) -> BigraphPair:
    return BigraphPair(plus=pair.minus, minus=pair.plus, advisories=pair.advisories)


def _layer_matches(
    constraints: Sequence[tuple[Bigraph, Bigraph, Sequence[int]]],
    depth: int,
    dual_constraint: tuple[Sequence[int], Sequence[int]] | None,
) -> Iterator[tuple[int, ...]]:
    """
    Backtracking over bijections of one layer that carry every source row onto
    the target row permuted by the already chosen lower-layer bijection.
    """

    size = constraints[0][0].layer_size(depth)

    # candidate_rows[c][j]: target row j rewritten in source lower-layer order
    candidate_rows: list[list[tuple[int, ...]]] = []
    for source, target, lower in constraints:
        rows = target.edges[depth - 1]
        candidate_rows.append(
            [tuple(row[lower[k]] for k in range(len(lower))) for row in rows]
        )

    assignment: list[int] = []
    used = [False] * size

    def compatible(i: int, j: int) -> bool:
        for c, (source, _, _) in enumerate(constraints):
            if source.edges[depth - 1][i] != candidate_rows[c][j]:
                return False

        if dual_constraint is not None:
            source_duals, target_duals = dual_constraint
            partner = source_duals[i]
            if partner == i and target_duals[j] != j:
                return False
            if partner < i and target_duals[j] != assignment[partner]:
                return False

        return True

    def backtrack() -> Iterator[tuple[int, ...]]:
        i = len(assignment)
        if i == size:
            yield tuple(assignment)
            return

        for j in range(size):
            if used[j] or not compatible(i, j):
                continue

            used[j] = True
            assignment.append(j)
            yield from backtrack()
            _ = assignment.pop()
            used[j] = False

    yield from backtrack()


def isomorphisms(
    p: BigraphPair, q: BigraphPair, respect_duals: bool = True
) -> Iterator[PairIso]:
    """
    Depth-preserving bijections of both graphs, shared on odd layers, that
    preserve multiplicities (and dual involutions when respect_duals is set)
    """

    if p.plus.layer_sizes != q.plus.layer_sizes:
        return
    if p.minus.layer_sizes != q.minus.layer_sizes:
        return

    def dual_constraint(
        source: Bigraph, target: Bigraph, depth: int
    ) -> tuple[Sequence[int], Sequence[int]] | None:
        if not respect_duals:
            return None

        return (source.duals[depth // 2], target.duals[depth // 2])

    def extend(
        depth: int, plus_perms: list[tuple[int, ...]], minus_perms: list[tuple[int, ...]]
    ) -> Iterator[PairIso]:
        if depth > p.depth:
            yield PairIso(tuple(plus_perms), tuple(minus_perms))
            return

        plus_has = depth <= p.plus.depth
        minus_has = depth <= p.minus.depth

        if depth % 2 == 1:
            constraints: list[tuple[Bigraph, Bigraph, Sequence[int]]] = []
            if plus_has:
                constraints.append((p.plus, q.plus, plus_perms[-1]))
            if minus_has:
                constraints.append((p.minus, q.minus, minus_perms[-1]))

            for perm in _layer_matches(constraints, depth, None):
                yield from extend(
                    depth + 1,
                    plus_perms + [perm] if plus_has else plus_perms,
                    minus_perms + [perm] if minus_has else minus_perms,
                )
            return

        plus_options: list[tuple[int, ...] | None] = [None]
        if plus_has:
            plus_options = list(
                _layer_matches(
                    [(p.plus, q.plus, plus_perms[-1])],
                    depth,
                    dual_constraint(p.plus, q.plus, depth),
                )
            )

        minus_options: list[tuple[int, ...] | None] = [None]
        if minus_has:
            minus_options = list(
                _layer_matches(
                    [(p.minus, q.minus, minus_perms[-1])],
                    depth,
                    dual_constraint(p.minus, q.minus, depth),
                )
            )

        for plus_perm in plus_options:
            for minus_perm in minus_options:
                yield from extend(
                    depth + 1,
                    plus_perms + [plus_perm] if plus_perm is not None else plus_perms,
                    minus_perms + [minus_perm] if minus_perm is not None else minus_perms,
                )

    if respect_duals and (
        p.plus.duals[0] != q.plus.duals[0] or p.minus.duals[0] != q.minus.duals[0]
    ):
        return

    yield from extend(1, [(0,)], [(0,)])


def pair_isomorphic(
    p: BigraphPair, q: BigraphPair, allow_opposite: bool = False
) -> PairIso | None:
    for iso in isomorphisms(p, q):
        return iso

    if allow_opposite:
        for iso in isomorphisms(p, opposite(q)):
            return PairIso(iso.plus_perms, iso.minus_perms, swapped=True)

    return None


def relabel_pair(pair: BigraphPair, plus_perms: Perms, minus_perms: Perms) -> BigraphPair:
    for depth in range(1, pair.depth + 1, 2):
        if plus_perms[depth] != minus_perms[depth]:
            raise PairMismatchError(f"Relabelling differs on odd depth {depth}")

    return BigraphPair(
        plus=bigraph_models.relabel_bigraph(pair.plus, plus_perms),
        minus=bigraph_models.relabel_bigraph(pair.minus, minus_perms),
        advisories=pair.advisories,
    )


def random_relabel(pair: BigraphPair, rng: random.Random) -> tuple[BigraphPair, PairIso]:
    plus_perms: list[tuple[int, ...]] = [(0,)]
    minus_perms: list[tuple[int, ...]] = [(0,)]

    for depth in range(1, pair.depth + 1):
        if depth % 2 == 1:
            perm = list(range(max(pair.plus.layer_size(depth), pair.minus.layer_size(depth))))
            rng.shuffle(perm)
            if depth <= pair.plus.depth:
                plus_perms.append(tuple(perm))
            if depth <= pair.minus.depth:
                minus_perms.append(tuple(perm))
            continue

        if depth <= pair.plus.depth:
            perm = list(range(pair.plus.layer_size(depth)))
            rng.shuffle(perm)
            plus_perms.append(tuple(perm))
        if depth <= pair.minus.depth:
            perm = list(range(pair.minus.layer_size(depth)))
            rng.shuffle(perm)
            minus_perms.append(tuple(perm))

    iso = PairIso(tuple(plus_perms), tuple(minus_perms))
    return relabel_pair(pair, iso.plus_perms, iso.minus_perms), iso
