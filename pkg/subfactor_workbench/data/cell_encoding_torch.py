import functools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import ClassVar

import torch

import subfactor_workbench.data.bigraph_pairs as bigraph_pairs
import subfactor_workbench.spectral as spectral
from subfactor_workbench.data.bigraph_models import Bigraph, Vertex
from subfactor_workbench.data.bigraph_pairs import BigraphPair
from subfactor_workbench.quadratic_field import SQRT5, QSqrt5

# (kind, even vertex, odd vertex); kind is one of top, left, right, bottom
EdgeKey = tuple[str, Vertex, Vertex]


class UnsupportedMultiplicityError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    """
    a, b are even vertices of the principal and dual principal graph, m, n
    odd vertices. The cell uses the edges a-m and dual(a)-n of the principal
    graph and dual(b)-m, b-n of the dual principal graph.
    """

    a: Vertex
    m: Vertex
    b: Vertex
    n: Vertex

    def to_json(self) -> list[list[int]]:
        return [[v[0], v[1] + 1] for v in (self.a, self.m, self.b, self.n)]


@dataclass(frozen=True)
class CellBlock:
    kind: str  # "ab" for the unitarity blocks, "mn" for the renormalized blocks
    key: tuple[Vertex, Vertex]
    rows: tuple[Vertex, ...]
    cols: tuple[Vertex, ...]
    cell_index: tuple[tuple[int, ...], ...]
    weights: tuple[tuple[float, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.cols))

    @property
    def is_square(self) -> bool:
        return len(self.rows) == len(self.cols)


@dataclass
class BlockGroupEncodingV1:
    """
    All blocks of one kind and one shape, stacked for batched products
    """

    def __init__(self, blocks: list[CellBlock]):
        self.kind = blocks[0].kind
        self.shape = blocks[0].shape
        self.index = torch.tensor(
            [block.cell_index for block in blocks], dtype=BlockGroupEncodingV1.index_dtype
        )
        self.weight = torch.tensor(
            [block.weights for block in blocks], dtype=BlockGroupEncodingV1.dtype
        )

    kind: str
    shape: tuple[int, int]
    index: torch.Tensor  # shape (blocks, rows, cols)
    weight: torch.Tensor  # shape (blocks, rows, cols)

    dtype: ClassVar[torch.dtype] = torch.float64
    index_dtype: ClassVar[torch.dtype] = torch.long


@dataclass
class CellComplex:
    pair: BigraphPair
    cells: list[Cell]
    ab_blocks: list[CellBlock]
    mn_blocks: list[CellBlock]
    plus_dimensions: dict[Vertex, float]
    minus_dimensions: dict[Vertex, float]
    cell_lookup: dict[Cell, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.cell_lookup:
            self.cell_lookup = {cell: k for k, cell in enumerate(self.cells)}

    @property
    def cell_count(self) -> int:
        return len(self.cells)

    @property
    def max_block_size(self) -> int:
        return max(
            (max(block.shape) for block in self.ab_blocks + self.mn_blocks), default=0
        )

    @property
    def all_square(self) -> bool:
        return all(block.is_square for block in self.ab_blocks + self.mn_blocks)

    def ab_block(self, a: Vertex, b: Vertex) -> CellBlock:
        for block in self.ab_blocks:
            if block.key == (a, b):
                return block

        raise KeyError(f"No unitarity block at {(a, b)}")

    @functools.cached_property
    def block_groups(self) -> list[BlockGroupEncodingV1]:
        grouped: dict[tuple[str, tuple[int, int]], list[CellBlock]] = defaultdict(list)
        for block in self.ab_blocks + self.mn_blocks:
            grouped[(block.kind, block.shape)].append(block)

        return [BlockGroupEncodingV1(blocks) for _, blocks in sorted(grouped.items())]

    @functools.cached_property
    def edge_keys(self) -> list[EdgeKey]:
        keys: dict[EdgeKey, None] = {}
        for cell in self.cells:
            for key in cell_edges(cell):
                keys[key] = None

        return list(keys)

    @functools.cached_property
    def incidence(self) -> list[list[tuple[int, int]]]:
        """
        incidence[k] lists (edge position, exponent) for cell k: a gauge
        multiplies the cell by top * conj(left) * conj(right) * bottom
        """

        position = {key: i for i, key in enumerate(self.edge_keys)}
        return [
            [(position[key], sign) for key, sign in zip(cell_edges(cell), EDGE_SIGNS)]
            for cell in self.cells
        ]

    def to_json(self) -> dict[str, object]:
        return {
            "cells": self.cell_count,
            "unitarity_blocks": len(self.ab_blocks),
            "renormalized_blocks": len(self.mn_blocks),
            "max_block_size": self.max_block_size,
            "all_square": self.all_square,
        }


EDGE_SIGNS: tuple[int, int, int, int] = (1, -1, -1, 1)


def cell_edges(cell: Cell) -> tuple[EdgeKey, EdgeKey, EdgeKey, EdgeKey]:
    return (
        ("top", cell.a, cell.m),
        ("left", cell.a, cell.n),
        ("right", cell.b, cell.m),
        ("bottom", cell.b, cell.n),
    )


def _adjacent(graph: Bigraph, even: Vertex, odd: Vertex) -> bool:
    return graph.multiplicity(even, odd) > 0


def _float_dimensions(graph: Bigraph, delta: QSqrt5) -> dict[Vertex, float]:
    return {v: float(d) for v, d in spectral.dimension_vector(graph, delta).items()}


def build_cells(pair: BigraphPair, delta: QSqrt5 = SQRT5) -> CellComplex:
    if not pair.plus.is_simply_laced() or not pair.minus.is_simply_laced():
        raise UnsupportedMultiplicityError("Cells are only built for multiplicity-free pairs")

    plus, minus = pair.plus, pair.minus
    plus_dimensions = _float_dimensions(plus, delta)
    minus_dimensions = _float_dimensions(minus, delta)
    odd = pair.odd_vertices()

    cells: list[Cell] = []
    ab_blocks: list[CellBlock] = []

    for a in plus.even_vertices():
        a_dual = plus.dual(a)
        for b in minus.even_vertices():
            b_dual = minus.dual(b)
            rows = tuple(m for m in odd if _adjacent(plus, a, m) and _adjacent(minus, b_dual, m))
            cols = tuple(n for n in odd if _adjacent(plus, a_dual, n) and _adjacent(minus, b, n))
            if not rows or not cols:
                continue

            indices: list[tuple[int, ...]] = []
            for m in rows:
                row: list[int] = []
                for n in cols:
                    row.append(len(cells))
                    cells.append(Cell(a=a, m=m, b=b, n=n))
                indices.append(tuple(row))

            ab_blocks.append(
                CellBlock(
                    kind="ab",
                    key=(a, b),
                    rows=rows,
                    cols=cols,
                    cell_index=tuple(indices),
                    weights=tuple(tuple(1.0 for _ in cols) for _ in rows),
                )
            )

    lookup = {cell: k for k, cell in enumerate(cells)}

    by_odd: dict[tuple[Vertex, Vertex], list[Cell]] = defaultdict(list)
    for cell in cells:
        by_odd[(cell.m, cell.n)].append(cell)

    mn_blocks: list[CellBlock] = []
    for (m, n), members in sorted(by_odd.items()):
        rows = tuple(sorted({cell.a for cell in members}))
        cols = tuple(sorted({cell.b for cell in members}))
        mn_blocks.append(
            CellBlock(
                kind="mn",
                key=(m, n),
                rows=rows,
                cols=cols,
                cell_index=tuple(
                    tuple(lookup[Cell(a=a, m=m, b=b, n=n)] for b in cols) for a in rows
                ),
                weights=tuple(
                    tuple(
                        math.sqrt(
                            plus_dimensions[a]
                            * minus_dimensions[b]
                            / (plus_dimensions[m] * plus_dimensions[n])
                        )
                        for b in cols
                    )
                    for a in rows
                ),
            )
        )

    return CellComplex(
        pair=pair,
        cells=cells,
        ab_blocks=ab_blocks,
        mn_blocks=mn_blocks,
        plus_dimensions=plus_dimensions,
        minus_dimensions=minus_dimensions,
        cell_lookup=lookup,
    )


def complex_automorphisms(complex_: CellComplex) -> list[tuple[int, ...]]:
    """
    Cell permutations induced by pair automorphisms (duals ignored) that
    carry the cell set onto itself. perm[k] is the image of cell k.
    """

    permutations: list[tuple[int, ...]] = []

    for iso in bigraph_pairs.isomorphisms(complex_.pair, complex_.pair, respect_duals=False):

        def plus_image(v: Vertex) -> Vertex:
            return (v[0], iso.plus_perms[v[0]][v[1]])

        def minus_image(v: Vertex) -> Vertex:
            return (v[0], iso.minus_perms[v[0]][v[1]])

        images: list[int] = []
        for cell in complex_.cells:
            image = complex_.cell_lookup.get(
                Cell(
                    a=plus_image(cell.a),
                    m=plus_image(cell.m),
                    b=minus_image(cell.b),
                    n=plus_image(cell.n),
                )
            )
            if image is None:
                break
            images.append(image)

        if len(images) == complex_.cell_count:
            permutations.append(tuple(images))

    return permutations
