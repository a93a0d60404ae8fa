import dataclasses
import logging
import pathlib
from dataclasses import dataclass
from typing import Self

import dotenv

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WorkbenchConfig:
    restarts: int = 100
    tol: float = 1e-10
    seed: int = 0
    orbit_tol: float = 1e-5
    log_path: pathlib.Path | None = None
    log_level: str = "WARNING"

    @classmethod
    def load(cls, env_path: pathlib.Path | None = None) -> Self:
        """
        Defaults overlaid with the keys of a .env file (restarts, tol, seed,
        orbit_tol, log_path, log_level). Without a path the defaults are used
        as they are; no .env is searched for.
        """

        config = cls()
        if env_path is None:
            return config

        if not env_path.exists():
            raise ValueError(f"Config file {env_path} does not exist")

        values = dotenv.dotenv_values(env_path)

        overrides: dict[str, object] = {}
        for field in dataclasses.fields(cls):
            raw = values.get(field.name, None)
            if raw is None or raw == "":
                continue

            try:
                overrides[field.name] = _convert(field.name, raw)
            except ValueError as error:
                raise ValueError(f"Config key {field.name!r}: {error}") from error

        if overrides:
            logger.info(f"Config overrides: {sorted(overrides)}")
            config = dataclasses.replace(config, **overrides)

        return config

    def with_overrides(self, **overrides: object) -> Self:
        present = {key: value for key, value in overrides.items() if value is not None}
        return dataclasses.replace(self, **present)


def _convert(name: str, raw: str) -> object:
    match name:
        case "restarts" | "seed":
            return int(raw)
        case "tol" | "orbit_tol":
            return float(raw)
        case "log_path":
            return pathlib.Path(raw)
        case "log_level":
            level = raw.upper()
            if level not in logging.getLevelNamesMapping():
                raise ValueError(f"unknown log level {raw!r}")
            return level
        case _:
            return raw
