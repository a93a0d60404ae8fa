import itertools
import logging
from dataclasses import dataclass

import subfactor_workbench.data.bigraph_pairs as bigraph_pairs
from subfactor_workbench.data.bigraph_models import Bigraph, Layer, Vertex
from subfactor_workbench.data.bigraph_pairs import BigraphPair

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StarProfile:
    arms: tuple[int, ...]  # ascending
    star_arm: int  # 0 when the star vertex is the centre
    center: Vertex

    @property
    def arm_count(self) -> int:
        return len(self.arms)

    @property
    def star_on_longest_arm(self) -> bool:
        return self.star_arm == max(self.arms)

    def __str__(self) -> str:
        return f"S({','.join(str(arm) for arm in self.arms)})"

    def to_json(self) -> dict[str, object]:
        return {
            "arms": list(self.arms),
            "star_arm": self.star_arm,
            "center": [self.center[0], self.center[1] + 1],
            "star_on_longest_arm": self.star_on_longest_arm,
        }


@dataclass(frozen=True)
class SpokeParams:
    n: int  # number of arms of length 2
    q: int  # n + 1


def star_profile(graph: Bigraph) -> StarProfile | None:
    """
    Defined for trees with all multiplicities 1 and exactly one vertex of
    valence at least 3
    """

    if not graph.is_simply_laced():
        return None

    edge_count = sum(sum(row) for layer in graph.edges for row in layer)
    if edge_count != graph.vertex_count - 1:
        return None

    branch_vertices = [v for v in graph.vertices() if graph.valence(v) >= 3]
    if len(branch_vertices) != 1:
        return None

    center = branch_vertices[0]
    arms: list[int] = []
    star_arm = 0

    for first, _ in graph.neighbours(center):
        previous, current = center, first
        length = 1
        on_star_arm = current == (0, 0)

        while True:
            onward = [u for u, _ in graph.neighbours(current) if u != previous]
            if not onward:
                break

            previous, current = current, onward[0]
            length += 1
            on_star_arm = on_star_arm or current == (0, 0)

        arms.append(length)
        if on_star_arm:
            star_arm = length

    return StarProfile(arms=tuple(sorted(arms)), star_arm=star_arm, center=center)


def spoke_params(graph: Bigraph) -> SpokeParams | None:
    """
    Recognises the 2^n spoke: a star whose n arms all have length 2, star at the end of one
    """

    profile = star_profile(graph)
    if profile is None or any(arm != 2 for arm in profile.arms):
        return None

    if profile.star_arm != 2:
        return None

    return SpokeParams(n=profile.arm_count, q=profile.arm_count + 1)


def _translate_graph(graph: Bigraph, k: int) -> Bigraph:
    path_layers: tuple[Layer, ...] = tuple(((1,),) for _ in range(k))
    path_duals = tuple((0,) for _ in range(k // 2))

    return Bigraph(edges=path_layers + graph.edges, duals=path_duals + graph.duals)


def translate(pair: BigraphPair, k: int) -> BigraphPair:
    """
    Prepends a path of k vertices ahead of the star of both graphs
    """

    if k < 0 or k % 2 != 0:
        raise ValueError(f"Translation must be by a non-negative even amount, got {k}")

    return BigraphPair(
        plus=_translate_graph(pair.plus, k),
        minus=_translate_graph(pair.minus, k),
        advisories=pair.advisories,
    )


def stable_at_depth(graph: Bigraph, n: int) -> bool:
    if n < 0 or n >= graph.depth:
        raise ValueError(f"Depth {n} has no deeper layer in a graph of depth {graph.depth}")

    for index in range(graph.layer_size(n)):
        children = graph.children((n, index))
        if len(children) > 1 or any(m > 1 for _, m in children):
            return False

    return all(
        sum(1 for m in row if m > 0) == 1 and max(row) == 1 for row in graph.edges[n]
    )


def stable_from(graph: Bigraph) -> int:
    """
    Least n such that the graph is stable at every depth from n on
    """

    n = graph.depth
    while n > 0 and stable_at_depth(graph, n - 1):
        n -= 1

    return n


def pair_stable_at_depth(pair: BigraphPair, n: int) -> bool:
    return all(
        stable_at_depth(graph, n) for graph in (pair.plus, pair.minus) if n < graph.depth
    )


def _sprout(graph: Bigraph, parents: tuple[int, ...]) -> Bigraph:
    width = graph.layer_size(graph.depth)
    rows = tuple(
        tuple(1 if j == parent else 0 for j in range(width)) for parent in parents
    )
    new_depth = graph.depth + 1
    duals = graph.duals
    if new_depth % 2 == 0:
        duals = duals + (tuple(range(len(parents))),)

    return Bigraph(edges=graph.edges + (rows,), duals=duals)


def _one_level_extensions(pair: BigraphPair) -> list[BigraphPair]:
    """
    Both graphs gain the same positive number of pendant vertices at the
    next depth, at most one per deepest vertex. New odd vertices are shared
    by position, so every order of the minus parents is tried.
    """

    depth = pair.depth
    if pair.plus.depth != depth or pair.minus.depth != depth:
        return []

    plus_width = pair.plus.layer_size(depth)
    minus_width = pair.minus.layer_size(depth)

    minus_choices = itertools.permutations if (depth + 1) % 2 == 1 else itertools.combinations

    extensions: list[BigraphPair] = []
    for count in range(1, min(plus_width, minus_width) + 1):
        for plus_parents in itertools.combinations(range(plus_width), count):
            for minus_parents in minus_choices(range(minus_width), count):
                extensions.append(
                    BigraphPair(
                        plus=_sprout(pair.plus, plus_parents),
                        minus=_sprout(pair.minus, minus_parents),
                    )
                )

    return extensions


def _deduplicate(pairs: list[BigraphPair], seen: list[BigraphPair]) -> list[BigraphPair]:
    unique: list[BigraphPair] = []
    for candidate in pairs:
        if any(
            bigraph_pairs.pair_isomorphic(candidate, other) is not None
            for other in seen + unique
        ):
            continue

        unique.append(candidate)

    return unique


def stable_extensions(pair: BigraphPair, extra_depths: int) -> list[BigraphPair]:
    """
    All pairs obtained by appending up to extra_depths stable layers below
    the deepest layer, the unchanged pair included, up to isomorphism
    """

    results = [pair]
    frontier = [pair]

    for _ in range(extra_depths):
        grown = [
            extension
            for member in frontier
            for extension in _one_level_extensions(member)
        ]
        frontier = _deduplicate(grown, results)
        results.extend(frontier)

        if not frontier:
            break

    logger.debug(f"{len(results)} stable extensions within {extra_depths} extra depths")
    return results


def translated_stable_extensions(
    pair: BigraphPair, max_translation: int, extra_depths: int
) -> list[BigraphPair]:
    return [
        translate(extension, k)
        for k in range(0, max_translation + 1, 2)
        for extension in stable_extensions(pair, extra_depths)
    ]
