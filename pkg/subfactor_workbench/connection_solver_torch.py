# pyright: reportAny=false
# pyright: reportUnknownMemberType=false

import functools
import logging
import math
import pathlib
import pickle
from dataclasses import dataclass, field
from typing import Self, cast

import networkx as nx
import numpy as np
import numpy.typing as npt
import sympy as sp
import torch

import subfactor_workbench.connection_models_torch as connection_models
import subfactor_workbench.data.cell_encoding_torch as encoding
from subfactor_workbench.config import WorkbenchConfig
from subfactor_workbench.data.bigraph_pairs import BigraphPair

logger = logging.getLogger(__name__)

ComplexArray = npt.NDArray[np.complex128]

# Residual below which a restart stops polishing
POLISH_RESIDUAL: float = 1e-26

# Gauss-Newton polish after the quasi-Newton phase; gauge directions fall below the cutoff
GAUSS_NEWTON_STEPS: int = 60
LSTSQ_RCOND: float = 1e-13

# Continuum heuristic: enough solutions, mostly distinct, spread out, no dominant gap
CONTINUUM_MIN_SOLUTIONS: int = 8
CONTINUUM_MAX_GAP_RATIO: float = 0.35
CONTINUUM_MIN_SPREAD: float = 0.05


@dataclass
class SolveResult:
    restarts: int
    tol: float
    seed: int
    residuals: list[float] = field(default_factory=list)
    solutions: list[ComplexArray] = field(default_factory=list)  # residual below tol
    best: ComplexArray | None = None
    best_residual: float = math.inf

    @property
    def converged(self) -> bool:
        return self.best_residual < self.tol

    @property
    def success_count(self) -> int:
        return len(self.solutions)

    def to_json(self) -> dict[str, object]:
        return {
            "restarts": self.restarts,
            "tol": self.tol,
            "seed": self.seed,
            "best_residual": self.best_residual,
            "converged": self.converged,
            "success_count": self.success_count,
            "residuals": self.residuals,
            "best": None
            if self.best is None
            else [[float(z.real), float(z.imag)] for z in self.best],
            "status": "numerical evidence",
        }

    def save_file(self, path: pathlib.Path):
        with path.open("wb") as file:
            pickle.dump(self, file)

    @classmethod
    def load_file(cls, path: pathlib.Path) -> Self:
        with path.open("rb") as file:
            return cast(Self, pickle.load(file))


def residual(complex_: encoding.CellComplex, values: ComplexArray) -> float:
    with torch.no_grad():
        return float(
            connection_models.connection_residual(
                complex_, torch.as_tensor(values, dtype=torch.complex128)
            )
        )


def initial_moduli(complex_: encoding.CellComplex) -> torch.Tensor:
    """
    Moduli fixed by 1x1 blocks, 1/sqrt(block size) elsewhere
    """

    moduli = torch.ones(complex_.cell_count, dtype=torch.float64)

    for block in complex_.ab_blocks:
        size = max(block.shape)
        for row in block.cell_index:
            for k in row:
                moduli[k] = 1.0 / math.sqrt(size)

    for block in complex_.mn_blocks:
        if block.shape == (1, 1):
            moduli[block.cell_index[0][0]] = 1.0 / block.weights[0][0]

    for block in complex_.ab_blocks:
        if block.shape == (1, 1):
            moduli[block.cell_index[0][0]] = 1.0

    return moduli


def _optimize(
    model: connection_models.ConnectionModelV1, max_rounds: int, max_iter: int
) -> float:
    optimizer = torch.optim.LBFGS(
        model.parameters(),
        lr=1.0,
        max_iter=max_iter,
        tolerance_grad=1e-20,
        tolerance_change=1e-30,
        history_size=50,
        line_search_fn="strong_wolfe",
    )

    def closure() -> torch.Tensor:
        optimizer.zero_grad()
        loss = model()
        loss.backward()
        return loss

    previous = math.inf
    current = math.inf
    for _ in range(max_rounds):
        _ = optimizer.step(closure)

        with torch.no_grad():
            current = float(model())

        if current < POLISH_RESIDUAL or not current < previous:
            break

        previous = current

    return current


def deviation_jacobian(
    complex_: encoding.CellComplex, values: torch.Tensor
) -> torch.Tensor:
    """
    Jacobian of the residual vector in the real coordinates (Re W, Im W).
    The deviations are quadratic in W, so unit central differences are exact.

    Returns shape: (deviations, 2 * cells)
    """

    n = complex_.cell_count
    directions = torch.eye(2 * n, dtype=torch.float64)
    steps = torch.complex(directions[:, :n], directions[:, n:])

    forward = connection_models.residual_vector(complex_, values + steps)
    backward = connection_models.residual_vector(complex_, values - steps)

    return ((forward - backward) / 2).T


def gauss_newton_polish(
    complex_: encoding.CellComplex,
    values: ComplexArray,
    max_steps: int = GAUSS_NEWTON_STEPS,
) -> tuple[ComplexArray, float]:
    """
    Minimum-norm least squares steps on the residual vector until it stops
    decreasing. Also converges, linearly, where the residual is only quartic.
    """

    n = complex_.cell_count

    with torch.no_grad():
        current_values = torch.as_tensor(values, dtype=torch.complex128)
        deviations = connection_models.residual_vector(complex_, current_values)
        current = float((deviations**2).sum())

        for _ in range(max_steps):
            if current < POLISH_RESIDUAL:
                break

            jacobian = deviation_jacobian(complex_, current_values)
            step = torch.linalg.lstsq(
                jacobian, -deviations.unsqueeze(-1), rcond=LSTSQ_RCOND, driver="gelsd"
            ).solution.squeeze(-1)

            candidate = current_values + torch.complex(step[:n], step[n:])
            candidate_deviations = connection_models.residual_vector(complex_, candidate)
            candidate_residual = float((candidate_deviations**2).sum())

            if not candidate_residual < current:
                break

            current_values = candidate
            deviations = candidate_deviations
            current = candidate_residual

        return current_values.numpy().copy(), current


def solve(
    complex_: encoding.CellComplex,
    restarts: int,
    tol: float,
    rng_seed: int,
    max_rounds: int = 20,
    max_iter: int = 200,
) -> SolveResult:
    """
    Minimises the bi-unitarity residual from random phases on the seeded
    moduli: LBFGS first, then a Gauss-Newton polish
    """

    generator = torch.Generator().manual_seed(rng_seed)
    moduli = initial_moduli(complex_)
    result = SolveResult(restarts=restarts, tol=tol, seed=rng_seed)

    for restart in range(restarts):
        phases = torch.rand(
            complex_.cell_count, generator=generator, dtype=torch.float64
        ) * (2 * math.pi)

        model = connection_models.ConnectionModelV1(complex_, torch.polar(moduli, phases))
        _ = _optimize(model, max_rounds, max_iter)

        with torch.no_grad():
            values = model.values().detach().numpy().copy()

        values, final = gauss_newton_polish(complex_, values)

        result.residuals.append(final)
        logger.debug(f"restart {restart}: residual {final:.3e}")

        if final < tol:
            result.solutions.append(values)

        if final < result.best_residual:
            result.best_residual = final
            result.best = values

    logger.info(
        f"{result.success_count}/{restarts} restarts below {tol:g}, best {result.best_residual:.3e}"
    )
    return result


def random_gauge(
    complex_: encoding.CellComplex, rng: np.random.Generator
) -> npt.NDArray[np.float64]:
    """
    One independent phase angle per edge key of the complex
    """

    return rng.uniform(0.0, 2 * math.pi, size=len(complex_.edge_keys))


def apply_gauge(
    complex_: encoding.CellComplex,
    values: ComplexArray,
    angles: npt.NDArray[np.float64],
) -> ComplexArray:
    shifts = np.array(
        [sum(sign * angles[edge] for edge, sign in cell) for cell in complex_.incidence]
    )
    return values * np.exp(1j * shifts)


def renormalize(
    complex_: encoding.CellComplex, values: ComplexArray, inverse: bool = False
) -> ComplexArray:
    """
    Cell values to renormalized-block entries sqrt(mu_a mu_b / (mu_m mu_n)) conj(W), or back
    """

    weights = np.empty(complex_.cell_count, dtype=np.float64)
    for block in complex_.mn_blocks:
        for index_row, weight_row in zip(block.cell_index, block.weights):
            for k, weight in zip(index_row, weight_row):
                weights[k] = weight

    if inverse:
        return np.conj(values / weights)

    return weights * np.conj(values)


@functools.cache
def _loop_basis_cached(
    rows: tuple[tuple[tuple[int, int], ...], ...], edge_count: int
) -> npt.NDArray[np.int64]:
    matrix = sp.zeros(edge_count, len(rows))
    for k, cell in enumerate(rows):
        for edge, sign in cell:
            matrix[edge, k] += sign

    vectors: list[list[int]] = []
    for vector in matrix.nullspace():
        denominators = [int(sp.Rational(x).q) for x in vector]
        scale = math.lcm(*denominators)
        vectors.append([int(sp.Rational(x) * scale) for x in vector])

    if not vectors:
        return np.zeros((0, len(rows)), dtype=np.int64)

    return np.array(vectors, dtype=np.int64)


def loop_basis(complex_: encoding.CellComplex) -> npt.NDArray[np.int64]:
    """
    Integer basis of exponent vectors k with sum_k k_c * (edge signs of c) = 0
    """

    rows = tuple(tuple(cell) for cell in complex_.incidence)
    return _loop_basis_cached(rows, len(complex_.edge_keys))


def gauge_invariants(
    complex_: encoding.CellComplex,
    values: ComplexArray,
    basis: npt.NDArray[np.int64] | None = None,
) -> ComplexArray:
    """
    Moduli of every cell followed by the loop products prod W^k (conjugates for negative k)
    """

    if basis is None:
        basis = loop_basis(complex_)

    moduli = np.abs(values).astype(np.complex128)
    if basis.shape[0] == 0:
        return moduli

    oriented = np.where(basis >= 0, values[np.newaxis, :], np.conj(values)[np.newaxis, :])
    products = np.prod(oriented ** np.abs(basis), axis=1)

    return np.concatenate([moduli, products])


def permute_cells(values: ComplexArray, permutation: tuple[int, ...]) -> ComplexArray:
    permuted = np.empty_like(values)
    permuted[list(permutation)] = values
    return permuted


@dataclass
class OrbitReport:
    solution_count: int
    orbit_count: int
    cluster_sizes: list[int]
    automorphism_count: int
    continuum: bool
    mst_gap_ratio: float | None
    max_intra_orbit_distance: float
    spread: float  # largest distance between any two solutions
    representatives: list[ComplexArray] = field(default_factory=list)

    def to_json(self) -> dict[str, object]:
        return {
            "solution_count": self.solution_count,
            "orbit_count": self.orbit_count,
            "cluster_sizes": self.cluster_sizes,
            "automorphism_count": self.automorphism_count,
            "continuum": self.continuum,
            "mst_gap_ratio": self.mst_gap_ratio,
            "max_intra_orbit_distance": self.max_intra_orbit_distance,
            "spread": self.spread,
            "status": "numerical evidence",
        }


def orbit_distances(
    complex_: encoding.CellComplex, solutions: list[ComplexArray]
) -> tuple[npt.NDArray[np.float64], int]:
    """
    Distances between invariant vectors, minimised over complex automorphisms
    """

    basis = loop_basis(complex_)
    automorphisms = encoding.complex_automorphisms(complex_) or [
        tuple(range(complex_.cell_count))
    ]

    images = [
        np.stack(
            [
                gauge_invariants(complex_, permute_cells(solution, perm), basis)
                for perm in automorphisms
            ]
        )
        for solution in solutions
    ]
    plain = [gauge_invariants(complex_, solution, basis) for solution in solutions]

    count = len(solutions)
    distances = np.zeros((count, count), dtype=np.float64)
    for i in range(count):
        for j in range(i + 1, count):
            distance = float(np.min(np.linalg.norm(images[i] - plain[j], axis=1)))
            distances[i, j] = distances[j, i] = distance

    return distances, len(automorphisms)


def orbit_report(
    complex_: encoding.CellComplex, solutions: list[ComplexArray], orbit_tol: float
) -> OrbitReport:
    distances, automorphism_count = orbit_distances(complex_, solutions)
    count = len(solutions)

    close = nx.Graph()
    complete = nx.Graph()
    close.add_nodes_from(range(count))
    complete.add_nodes_from(range(count))

    for i in range(count):
        for j in range(i + 1, count):
            complete.add_edge(i, j, weight=distances[i, j])
            if distances[i, j] < orbit_tol:
                close.add_edge(i, j)

    components = [sorted(component) for component in nx.connected_components(close)]
    components.sort(key=len, reverse=True)

    max_intra = max(
        (distances[i, j] for component in components for i in component for j in component),
        default=0.0,
    )

    gap_ratio: float | None = None
    if count >= 2:
        tree = nx.minimum_spanning_tree(complete)
        lengths = [float(data["weight"]) for _, _, data in tree.edges(data=True)]
        total = sum(lengths)
        gap_ratio = max(lengths) / total if total > 0 else 0.0

    spread = float(distances.max()) if count >= 2 else 0.0

    continuum = (
        count >= CONTINUUM_MIN_SOLUTIONS
        and len(components) > count / 2
        and spread >= CONTINUUM_MIN_SPREAD
        and gap_ratio is not None
        and gap_ratio < CONTINUUM_MAX_GAP_RATIO
    )

    return OrbitReport(
        solution_count=count,
        orbit_count=len(components),
        cluster_sizes=[len(component) for component in components],
        automorphism_count=automorphism_count,
        continuum=continuum,
        mst_gap_ratio=gap_ratio,
        max_intra_orbit_distance=float(max_intra),
        spread=spread,
        representatives=[solutions[component[0]] for component in components],
    )


def count_gauge_orbits(
    complex_: encoding.CellComplex,
    restarts: int,
    tol: float,
    rng_seed: int,
    orbit_tol: float = 1e-5,
) -> OrbitReport:
    result = solve(complex_, restarts, tol, rng_seed)
    return orbit_report(complex_, result.solutions, orbit_tol)


@dataclass
class ConnectionSolverTorch:
    pair: BigraphPair
    restarts: int = 100
    tol: float = 1e-10
    seed: int = 0
    orbit_tol: float = 1e-5

    progress_path: pathlib.Path | None = None
    result: SolveResult | None = None
    model: connection_models.ConnectionModelV1 | None = None

    @classmethod
    def from_config(cls, pair: BigraphPair, config: WorkbenchConfig) -> Self:
        return cls(
            pair=pair,
            restarts=config.restarts,
            tol=config.tol,
            seed=config.seed,
            orbit_tol=config.orbit_tol,
        )

    @functools.cached_property
    def cell_complex(self) -> encoding.CellComplex:
        return encoding.build_cells(self.pair)

    def solve(self) -> SolveResult:
        self.result = solve(self.cell_complex, self.restarts, self.tol, self.seed)

        if self.result.best is not None:
            self.model = connection_models.ConnectionModelV1(
                self.cell_complex, torch.as_tensor(self.result.best)
            )

        return self.result

    def count_orbits(self) -> OrbitReport:
        if self.result is None:
            _ = self.solve()

        assert self.result is not None
        return orbit_report(self.cell_complex, self.result.solutions, self.orbit_tol)

    def load(self, path: pathlib.Path | None = None):
        if path is None:
            path = self.progress_path

        if path is None:
            raise ValueError(
                "No path provided in either self.progress_path or argument path"
            )

        with path.open("rb") as file:
            self.progress_path = path
            self.pair, self.result = pickle.load(file)
            self.__dict__.pop("cell_complex", None)
            self.model = connection_models.ConnectionModelV1(self.cell_complex)
            _ = self.model.load_state_dict(torch.load(path.with_suffix(".pt")))

    def save(self, path: pathlib.Path | None = None):
        if path is None:
            path = self.progress_path

        if path is None:
            raise ValueError(
                "No path provided in either self.progress_path or argument path"
            )

        if self.model is None:
            raise ValueError("Nothing to save before solve()")

        with path.open("wb") as file:
            pickle.dump((self.pair, self.result), file)
            torch.save(self.model.state_dict(), path.with_suffix(".pt"))
