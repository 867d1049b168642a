from __future__ import annotations

import numpy as np
import pytest

from beamlu.core.config import JacobiOptions, Settings
from beamlu.core.logging import configure_logging


@pytest.fixture(autouse=True)
def _quiet_logging() -> None:
    # rebinds the log stream per test; the CLI tests point it at capsys
    configure_logging(Settings(LOG_LEVEL="WARNING", LOG_JSON=False), quiet=True)


@pytest.fixture
def jacobi() -> JacobiOptions:
    return JacobiOptions()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=12345))
