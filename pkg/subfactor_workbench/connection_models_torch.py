# pyright: reportUnknownMemberType=false

from typing import override

import torch
import torch.nn as nn

import subfactor_workbench.data.cell_encoding_torch as encoding


def block_matrices(
    group: encoding.BlockGroupEncodingV1, values: torch.Tensor
) -> torch.Tensor:
    """
    Gathers the blocks of one group from the cell values. Renormalized blocks
    hold the weighted complex conjugates. Leading dimensions of values are
    kept as batch dimensions.

    Returns shape: (..., blocks, rows, cols)
    """

    gathered = values[..., group.index]
    if group.kind == "mn":
        gathered = gathered.conj()

    return gathered * group.weight


def unitarity_deviations(blocks: torch.Tensor) -> torch.Tensor:
    """
    Real and imaginary parts of AA* - I and A*A - I over the stacked blocks

    Returns shape: (..., deviations)
    """

    rows, cols = blocks.shape[-2], blocks.shape[-1]
    left = blocks @ blocks.mH - torch.eye(rows, dtype=blocks.dtype)
    right = blocks.mH @ blocks - torch.eye(cols, dtype=blocks.dtype)

    batch = blocks.shape[:-3]
    return torch.cat(
        [
            part.reshape(*batch, -1)
            for matrix in (left, right)
            for part in (matrix.real, matrix.imag)
        ],
        dim=-1,
    )


def unitarity_defect(blocks: torch.Tensor) -> torch.Tensor:
    """
    Sum over the stacked blocks A of |AA* - I|^2 + |A*A - I|^2
    """

    return (unitarity_deviations(blocks) ** 2).sum(dim=-1)


def residual_vector(complex_: encoding.CellComplex, values: torch.Tensor) -> torch.Tensor:
    """
    Returns shape: (..., deviations)
    """

    return torch.cat(
        [
            unitarity_deviations(block_matrices(group, values))
            for group in complex_.block_groups
        ],
        dim=-1,
    )


def connection_residual(
    complex_: encoding.CellComplex, values: torch.Tensor
) -> torch.Tensor:
    return (residual_vector(complex_, values) ** 2).sum(dim=-1)


class ConnectionModelV1(nn.Module):
    """
    Free complex cell values; forward() is the bi-unitarity residual
    """

    cell_complex: encoding.CellComplex
    real: nn.Parameter
    imag: nn.Parameter

    def __init__(
        self, cell_complex: encoding.CellComplex, initial: torch.Tensor | None = None
    ):
        super(ConnectionModelV1, self).__init__()

        self.cell_complex = cell_complex

        if initial is None:
            initial = torch.ones(cell_complex.cell_count, dtype=torch.complex128)

        self.real = nn.Parameter(initial.real.clone().to(torch.float64))
        self.imag = nn.Parameter(initial.imag.clone().to(torch.float64))

    def values(self) -> torch.Tensor:
        """
        Returns shape: (cells,) complex128
        """

        return torch.complex(self.real, self.imag)

    @override
    def forward(self) -> torch.Tensor:
        """
        Returns shape: ()
        """

        return connection_residual(self.cell_complex, self.values())
