"""Runtime settings: budgets and search schedule presets."""

import logging
import os
from pathlib import Path
from typing import Mapping

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from sfdesign.errors import ConfigError

logger = logging.getLogger(__name__)

BUDGET_ENV_VAR = "SFDESIGN_BUDGET"


class SearchParams(BaseModel):
    """Parameters shared by the stochastic design optimizers.

    Attributes:
        seed: Seed for the chain (restarts derive child seeds from it)
        max_iterations: Proposals per chain (sweeps for columnwise-pairwise)
        initial_temperature: Starting temperature/threshold; None picks it from
            the spread of random neighbour deltas
        cooling_factor: Multiplicative temperature decay, in (0, 1)
        cooling_interval: Proposals between decays; None means 100 * n
        threshold_stages: Number of linearly decaying thresholds for threshold accepting
        restarts: Independent chains; the best one wins, ties go to the lowest index
        workers: Threads used to run restarts
    """

    model_config = ConfigDict(frozen=True)

    seed: int = 0
    max_iterations: int = Field(2000, gt=0)
    initial_temperature: float | None = Field(None, gt=0)
    cooling_factor: float = Field(0.95, gt=0, lt=1)
    cooling_interval: int | None = Field(None, gt=0)
    threshold_stages: int = Field(20, gt=0)
    restarts: int = Field(1, gt=0)
    workers: int = Field(1, gt=0)


class Settings(BaseModel):
    """Library-wide settings resolved from defaults, a config file and the environment."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    exact_budget: int = Field(20_000_000, gt=0)
    grid_budget: int = Field(2_000_000, gt=0)
    max_iterations: int = Field(2000, gt=0)
    initial_temperature: float | None = Field(None, gt=0)
    cooling_factor: float = Field(0.95, gt=0, lt=1)
    threshold_stages: int = Field(20, gt=0)
    restarts: int = Field(1, gt=0)
    workers: int = Field(1, gt=0)

    def search_params(self, **overrides) -> SearchParams:
        """Build search parameters from the presets, with explicit overrides winning.

        Args:
            **overrides: Any SearchParams field; None values are ignored

        Returns:
            Validated SearchParams
        """
        values = {
            "max_iterations": self.max_iterations,
            "initial_temperature": self.initial_temperature,
            "cooling_factor": self.cooling_factor,
            "threshold_stages": self.threshold_stages,
            "restarts": self.restarts,
            "workers": self.workers,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        try:
            return SearchParams(**values)
        except ValidationError as e:
            raise ConfigError(str(e)) from e


def _parse_key_values(path: Path) -> dict[str, str]:
    values = {}
    for number, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = value
    return values


def load_settings(path: str | Path | None = None,
                  environ: Mapping[str, str] | None = None) -> Settings:
    """Resolve settings from defaults, an optional key=value file and the environment.

    Args:
        path: Optional config file with one key=value per line
        environ: Environment mapping (default: os.environ)

    Returns:
        Validated settings

    Raises:
        ConfigError: Unknown keys, unparsable values or out-of-range values
    """
    environ = os.environ if environ is None else environ
    values: dict[str, str] = {}
    if path is not None:
        values.update(_parse_key_values(Path(path)))
        logger.debug("Loaded %d settings from %s", len(values), path)
    budget = environ.get(BUDGET_ENV_VAR)
    if budget:
        values["exact_budget"] = budget
    if values.get("initial_temperature", "").lower() in ("none", "auto"):
        values.pop("initial_temperature")
    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigError(str(e)) from e
