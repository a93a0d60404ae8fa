import pickle
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import ClassVar, Self, cast

# (depth, index within the depth layer), indices are 0-based internally
Vertex = tuple[int, int]

Layer = tuple[tuple[int, ...], ...]


class BigraphSyntaxError(ValueError):
    position: int

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class BigraphValidationError(ValueError):
    pass


@dataclass(frozen=True)
class Bigraph:
    """
    A principal graph truncated at a finite depth.

    edges[d - 1][i][j] is the multiplicity of the edge between vertex i at
    depth d and vertex j at depth d - 1. duals[k] is the dual involution of
    the even depth 2k.
    """

    MAX_MULTIPLICITY: ClassVar[int] = 9

    edges: tuple[Layer, ...]
    duals: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.edges) == 0:
            raise BigraphValidationError("A bigraph needs at least one layer")

        previous_size = 1
        for depth, layer in enumerate(self.edges, start=1):
            if len(layer) == 0:
                raise BigraphValidationError(f"Depth {depth} has no vertices")

            for index, row in enumerate(layer):
                if len(row) != previous_size:
                    raise BigraphValidationError(
                        f"Vertex {index + 1} at depth {depth} has {len(row)} slots "
                        + f"but depth {depth - 1} has {previous_size} vertices"
                    )

                if any(m < 0 or m > Bigraph.MAX_MULTIPLICITY for m in row):
                    raise BigraphValidationError(
                        f"Vertex {index + 1} at depth {depth} has a multiplicity out of range"
                    )

                if sum(row) == 0:
                    raise BigraphValidationError(
                        f"Vertex {index + 1} at depth {depth} is not connected to depth {depth - 1}"
                    )

            previous_size = len(layer)

        even_depths = self.depth // 2 + 1
        if len(self.duals) != even_depths:
            raise BigraphValidationError(
                f"Expected {even_depths} dual layers, got {len(self.duals)}"
            )

        for k, involution in enumerate(self.duals):
            size = self.layer_size(2 * k)
            if sorted(involution) != list(range(size)):
                raise BigraphValidationError(
                    f"Duals at depth {2 * k} are not a permutation of {size} vertices"
                )

            if any(involution[involution[i]] != i for i in range(size)):
                raise BigraphValidationError(
                    f"Duals at depth {2 * k} are not an involution"
                )

    @property
    def depth(self) -> int:
        return len(self.edges)

    def layer_size(self, depth: int) -> int:
        if depth == 0:
            return 1

        if depth < 0 or depth > self.depth:
            return 0

        return len(self.edges[depth - 1])

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return tuple(self.layer_size(d) for d in range(self.depth + 1))

    def vertices(self) -> Iterator[Vertex]:
        for depth in range(self.depth + 1):
            for index in range(self.layer_size(depth)):
                yield (depth, index)

    def even_vertices(self) -> list[Vertex]:
        return [v for v in self.vertices() if v[0] % 2 == 0]

    def odd_vertices(self) -> list[Vertex]:
        return [v for v in self.vertices() if v[0] % 2 == 1]

    @property
    def vertex_count(self) -> int:
        return sum(self.layer_sizes)

    def multiplicity(self, v: Vertex, w: Vertex) -> int:
        if v[0] == w[0] + 1:
            v, w = w, v

        if w[0] != v[0] + 1:
            return 0

        if w[1] >= self.layer_size(w[0]) or v[1] >= self.layer_size(v[0]):
            return 0

        return self.edges[w[0] - 1][w[1]][v[1]]

    def parents(self, v: Vertex) -> list[tuple[Vertex, int]]:
        depth, index = v
        if depth == 0:
            return []

        row = self.edges[depth - 1][index]
        return [((depth - 1, j), m) for j, m in enumerate(row) if m > 0]

    def children(self, v: Vertex) -> list[tuple[Vertex, int]]:
        depth, index = v
        if depth >= self.depth:
            return []

        return [
            ((depth + 1, i), row[index])
            for i, row in enumerate(self.edges[depth])
            if row[index] > 0
        ]

    def neighbours(self, v: Vertex) -> list[tuple[Vertex, int]]:
        return self.parents(v) + self.children(v)

    def valence(self, v: Vertex) -> int:
        return sum(m for _, m in self.neighbours(v))

    def dual(self, v: Vertex) -> Vertex:
        depth, index = v
        if depth % 2 == 1:
            raise ValueError(f"Duality of odd vertex {v} is not defined by a single graph")

        return (depth, self.duals[depth // 2][index])

    def is_simply_laced(self) -> bool:
        return all(m <= 1 for layer in self.edges for row in layer for m in row)

    def save_file(self, path: Path):
        with path.open("wb") as file:
            pickle.dump(self, file)

    @classmethod
    def load_file(cls, path: Path) -> Self:
        with path.open("rb") as file:
            return cast(Self, pickle.load(file))

    def __str__(self) -> str:
        return serialize_bigraph(self)


class _Scanner:
    text: str
    position: int

    def __init__(self, text: str):
        self.text = text
        self.position = 0

    def peek(self) -> str:
        if self.position >= len(self.text):
            return ""

        return self.text[self.position]

    def expect(self, literal: str):
        if not self.text.startswith(literal, self.position):
            raise BigraphSyntaxError(f"Expected {literal!r}", self.position)

        self.position += len(literal)

    def digit(self) -> int:
        character = self.peek()
        if not character.isdigit():
            raise BigraphSyntaxError("Expected a multiplicity digit", self.position)

        self.position += 1
        return int(character)

    def number(self) -> int:
        start = self.position
        while self.peek().isdigit():
            self.position += 1

        if start == self.position:
            raise BigraphSyntaxError("Expected a vertex index", self.position)

        return int(self.text[start : self.position])


def _parse_vertex_row(scanner: _Scanner) -> tuple[int, ...]:
    row = [scanner.digit()]
    while scanner.peek() == "x":
        scanner.expect("x")
        row.append(scanner.digit())

    return tuple(row)


def _parse_layer(scanner: _Scanner) -> Layer:
    layer = [_parse_vertex_row(scanner)]
    while scanner.peek() == "p":
        scanner.expect("p")
        layer.append(_parse_vertex_row(scanner))

    return tuple(layer)


def _parse_dual_layer(scanner: _Scanner) -> tuple[int, ...]:
    position = scanner.position
    images = [scanner.number()]
    while scanner.peek() == "x":
        scanner.expect("x")
        images.append(scanner.number())

    if any(image < 1 for image in images):
        raise BigraphSyntaxError("Dual indices are 1-based", position)

    return tuple(image - 1 for image in images)


def parse_bigraph(text: str) -> Bigraph:
    """
    Decodes `bwd<layer>v<layer>...duals<perm>v<perm>...`
    """

    scanner = _Scanner(text.strip())
    scanner.expect("bwd")

    layers = [_parse_layer(scanner)]
    while scanner.peek() == "v":
        scanner.expect("v")
        layers.append(_parse_layer(scanner))

    scanner.expect("duals")

    duals = [_parse_dual_layer(scanner)]
    while scanner.peek() == "v":
        scanner.expect("v")
        duals.append(_parse_dual_layer(scanner))

    if scanner.peek() != "":
        raise BigraphSyntaxError("Unexpected trailing input", scanner.position)

    return Bigraph(edges=tuple(layers), duals=tuple(duals))


def serialize_bigraph(graph: Bigraph) -> str:
    body = "v".join(
        "p".join("x".join(str(m) for m in row) for row in layer)
        for layer in graph.edges
    )
    duals = "v".join(
        "x".join(str(image + 1) for image in involution) for involution in graph.duals
    )

    return f"bwd{body}duals{duals}"


def relabel_bigraph(graph: Bigraph, perms: Sequence[Sequence[int]]) -> Bigraph:
    """
    perms[d][i] is the new index of vertex i at depth d (perms[0] must be (0,))
    """

    edges: list[Layer] = []
    for depth in range(1, graph.depth + 1):
        perm = perms[depth]
        lower = perms[depth - 1]
        rows: list[tuple[int, ...]] = [()] * len(perm)

        for index, row in enumerate(graph.edges[depth - 1]):
            new_row = [0] * len(row)
            for j, m in enumerate(row):
                new_row[lower[j]] = m
            rows[perm[index]] = tuple(new_row)

        edges.append(tuple(rows))

    duals: list[tuple[int, ...]] = []
    for k, involution in enumerate(graph.duals):
        perm = perms[2 * k]
        new_involution = [0] * len(involution)
        for index, image in enumerate(involution):
            new_involution[perm[index]] = perm[image]
        duals.append(tuple(new_involution))

    return Bigraph(edges=tuple(edges), duals=tuple(duals))
