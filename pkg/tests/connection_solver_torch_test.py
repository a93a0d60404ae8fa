import pathlib

import numpy as np
import pytest
import torch

import subfactor_workbench.connection_models_torch as connection_models
import subfactor_workbench.connection_solver_torch as connection_solver
import subfactor_workbench.data.catalog as catalog
import subfactor_workbench.data.cell_encoding_torch as encoding
from subfactor_workbench.config import WorkbenchConfig
from subfactor_workbench.connection_solver_torch import ConnectionSolverTorch, SolveResult

import tests.log_setup as log_setup
from tests.cell_encoding_torch_test import fourier_values

logger = log_setup.get_logger(__name__, "logs/connection-solver-test.log")


@pytest.fixture(scope="module")
def z5_complex() -> encoding.CellComplex:
    return encoding.build_cells(catalog.lookup(catalog.Z5).pair)


def test_fourier_residual(z5_complex: encoding.CellComplex):
    assert connection_solver.residual(z5_complex, fourier_values(z5_complex)) < 1e-20


def test_gauge_invariants_ignore_gauge(z5_complex: encoding.CellComplex):
    rng = np.random.default_rng(3)
    values = fourier_values(z5_complex)
    gauged = connection_solver.apply_gauge(
        z5_complex, values, connection_solver.random_gauge(z5_complex, rng)
    )

    assert not np.allclose(gauged, values)
    assert connection_solver.residual(z5_complex, gauged) < 1e-20
    np.testing.assert_allclose(
        connection_solver.gauge_invariants(z5_complex, gauged),
        connection_solver.gauge_invariants(z5_complex, values),
        atol=1e-10,
    )


def test_loop_basis_is_in_the_kernel(z5_complex: encoding.CellComplex):
    basis = connection_solver.loop_basis(z5_complex)
    logger.info(f"{basis.shape = }")

    assert basis.shape[0] > 0
    assert basis.shape[1] == z5_complex.cell_count
    for vector in basis:
        totals = np.zeros(len(z5_complex.edge_keys), dtype=np.int64)
        for k, cell in enumerate(z5_complex.incidence):
            for edge, sign in cell:
                totals[edge] += sign * vector[k]
        assert not totals.any()


def test_renormalize_round_trip(z5_complex: encoding.CellComplex):
    values = fourier_values(z5_complex)
    renormalized = connection_solver.renormalize(z5_complex, values)

    np.testing.assert_allclose(np.abs(renormalized), 1 / np.sqrt(5))
    np.testing.assert_allclose(
        connection_solver.renormalize(z5_complex, renormalized, inverse=True), values
    )


def test_fourier_and_conjugate_share_an_orbit(z5_complex: encoding.CellComplex):
    rng = np.random.default_rng(11)
    values = fourier_values(z5_complex)
    solutions = [
        values,
        np.conj(values),
        connection_solver.apply_gauge(
            z5_complex, values, connection_solver.random_gauge(z5_complex, rng)
        ),
    ]

    report = connection_solver.orbit_report(z5_complex, solutions, orbit_tol=1e-6)
    logger.info(f"{report.to_json() = }")

    assert report.orbit_count == 1
    assert report.cluster_sizes == [3]
    assert report.automorphism_count == 576
    assert not report.continuum
    assert report.to_json()["status"] == "numerical evidence"


def test_solver_finds_the_hadamard_connection(z5_complex: encoding.CellComplex):
    result = connection_solver.solve(z5_complex, restarts=8, tol=1e-10, rng_seed=0)
    logger.info(f"{result.residuals = }")

    assert result.success_count >= 1
    assert result.converged
    assert result.best is not None

    report = connection_solver.orbit_report(z5_complex, result.solutions, orbit_tol=1e-3)
    assert report.orbit_count == 1


def test_solver_is_deterministic(z5_complex: encoding.CellComplex):
    first = connection_solver.solve(z5_complex, restarts=2, tol=1e-10, rng_seed=5, max_rounds=2)
    second = connection_solver.solve(z5_complex, restarts=2, tol=1e-10, rng_seed=5, max_rounds=2)

    assert first.residuals == second.residuals

@pytest.fixture(scope="module")
def s4_s5_complex() -> encoding.CellComplex:
    return encoding.build_cells(catalog.lookup(catalog.S4_S5).pair)


def test_residual_is_gauge_covariant(s4_s5_complex: encoding.CellComplex):
    rng = np.random.default_rng(17)
    count = s4_s5_complex.cell_count
    values = rng.normal(size=count) + 1j * rng.normal(size=count)
    gauged = connection_solver.apply_gauge(
        s4_s5_complex, values, connection_solver.random_gauge(s4_s5_complex, rng)
    )

    assert not np.allclose(gauged, values)
    assert connection_solver.residual(s4_s5_complex, gauged) == pytest.approx(
        connection_solver.residual(s4_s5_complex, values), rel=1e-10
    )


def test_deviation_jacobian(s4_s5_complex: encoding.CellComplex):
    rng = np.random.default_rng(19)
    count = s4_s5_complex.cell_count
    real = torch.tensor(rng.normal(size=count), requires_grad=True)
    imag = torch.tensor(rng.normal(size=count), requires_grad=True)

    deviations = connection_models.residual_vector(s4_s5_complex, torch.complex(real, imag))
    weights = torch.as_tensor(rng.normal(size=deviations.shape[0]))
    (weights * deviations).sum().backward()
    assert real.grad is not None and imag.grad is not None

    jacobian = connection_solver.deviation_jacobian(
        s4_s5_complex, torch.complex(real.detach(), imag.detach())
    )

    assert jacobian.shape == (deviations.shape[0], 2 * count)
    np.testing.assert_allclose(
        (jacobian.T @ weights).numpy(),
        torch.cat([real.grad, imag.grad]).numpy(),
        rtol=1e-9,
        atol=1e-9,
    )


def test_s4_s5_connection_is_unique(s4_s5_complex: encoding.CellComplex):
    result = connection_solver.solve(s4_s5_complex, restarts=10, tol=1e-10, rng_seed=0)
    logger.info(f"{result.residuals = }")

    assert result.success_count >= 2
    assert result.best is not None

    report = connection_solver.orbit_report(s4_s5_complex, result.solutions, orbit_tol=1e-5)
    logger.info(f"{report.to_json() = }")

    assert report.orbit_count == 1
    assert not report.continuum
    assert report.spread < 1e-5

    # the depth 3 renormalized block: squared moduli times 45, a real orthogonal pattern
    block = next(b for b in s4_s5_complex.mn_blocks if b.key == ((3, 0), (3, 0)))
    entries = connection_solver.renormalize(s4_s5_complex, result.best)
    squared = sorted(float(abs(entries[k]) ** 2 * 45) for row in block.cell_index for k in row)
    assert squared == pytest.approx([1, 3, 10, 12, 15, 18, 20, 24, 32], abs=1e-6)

    other = connection_solver.solve(s4_s5_complex, restarts=3, tol=1e-10, rng_seed=1)
    assert other.best is not None
    distances, _ = connection_solver.orbit_distances(s4_s5_complex, [result.best, other.best])
    assert distances[0, 1] < 1e-5


def test_2222_connections_form_a_continuum():
    complex_ = encoding.build_cells(catalog.lookup(catalog.Z4).pair)
    result = connection_solver.solve(complex_, restarts=30, tol=1e-10, rng_seed=0)

    report = connection_solver.orbit_report(complex_, result.solutions, orbit_tol=1e-5)
    logger.info(f"{report.to_json() = }")

    assert report.solution_count >= connection_solver.CONTINUUM_MIN_SOLUTIONS
    assert report.orbit_count > report.solution_count / 2
    assert report.spread >= connection_solver.CONTINUUM_MIN_SPREAD
    assert report.continuum



def test_solve_result_pickle(tmp_path: pathlib.Path):
    result = SolveResult(restarts=1, tol=1e-10, seed=0, residuals=[0.5])
    path = tmp_path / "result.pkl"

    result.save_file(path)
    loaded = SolveResult.load_file(path)

    assert loaded.residuals == [0.5]
    assert not loaded.converged
    assert loaded.to_json()["best"] is None


def test_solver_save_and_load(tmp_path: pathlib.Path):
    config = WorkbenchConfig(restarts=1, seed=2)
    solver = ConnectionSolverTorch.from_config(catalog.lookup(catalog.Z5).pair, config)

    with pytest.raises(ValueError):
        solver.save(tmp_path / "early.pkl")

    result = solver.solve()
    path = tmp_path / "solver.pkl"
    solver.save(path)

    restored = ConnectionSolverTorch(pair=catalog.lookup(catalog.D10).pair)
    restored.load(path)

    assert restored.pair == catalog.lookup(catalog.Z5).pair
    assert restored.result is not None
    assert restored.result.residuals == result.residuals
    assert restored.model is not None
    assert restored.cell_complex.cell_count == 25


if __name__ == "__main__":
    test_solver_finds_the_hadamard_connection(
        encoding.build_cells(catalog.lookup(catalog.Z5).pair)
    )
