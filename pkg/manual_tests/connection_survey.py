import json
from pathlib import Path

import dotenv

import subfactor_workbench.data.catalog as catalog
from subfactor_workbench.config import WorkbenchConfig
from subfactor_workbench.connection_solver_torch import ConnectionSolverTorch, OrbitReport

import manual_tests.log_setup as log_setup

logger = log_setup.get_logger(__name__, "logs/connection-survey.log")

cache_dir = Path("connection_cache")
cache_dir.mkdir(parents=True, exist_ok=True)

# Slow: a hundred restarts per pair
SURVEY = (catalog.S4_S5, catalog.Z4, catalog.Z5)


def check_outcome(name: str, orbits: OrbitReport):
    if name == catalog.Z4:
        assert orbits.continuum, f"{name}: expected a 1-parameter family"
        return

    assert orbits.orbit_count == 1, f"{name}: expected one orbit, got {orbits.orbit_count}"
    assert not orbits.continuum, f"{name}: unexpected continuum"


def survey_connections():
    restarts = int(dotenv.dotenv_values().get("restarts", None) or 100)
    config = WorkbenchConfig(restarts=restarts)

    summary = {}
    for name in SURVEY:
        solver = ConnectionSolverTorch.from_config(catalog.lookup(name).pair, config)
        solver.progress_path = cache_dir / f"{name.replace('/', '_')}.pkl"

        result = solver.solve()
        orbits = solver.count_orbits()
        logger.info(f"{name}: {result.success_count}/{result.restarts} converged, {orbits.to_json()}")

        if result.best is not None:
            solver.save()

        summary[name] = {"converged": result.success_count, "orbits": orbits.to_json()}
        check_outcome(name, orbits)

    print(json.dumps(summary, indent=2, default=str))


if __name__ == "__main__":
    survey_connections()
