import math

import numpy as np
import pytest

from pdcsim import (
    PumpParams,
    TaylorDispersion,
    build_grid,
)

DW = 2 * math.pi * 0.36e-3  # rad/fs
TAU = 80.0
LAMBDA_P = 0.775

WG0 = TaylorDispersion(30.0, 20.0, 0.0, 0.0, 0.0, 10.0)
WG1 = TaylorDispersion(30.0, 20.0, 30.0, 10.0, 10.0, 10.0)
WG2 = TaylorDispersion(30.0, 20.0, 300.0, -100.0, 100.0, 10.0)


@pytest.fixture(scope="session")
def pump():
    return PumpParams(LAMBDA_P, TAU)


@pytest.fixture(scope="session")
def grid63():
    """Small grid for fast solver tests; step widened to keep the band
    comparable to the production grid."""
    return build_grid(LAMBDA_P, 4 * DW, 63)


@pytest.fixture(scope="session")
def grid255():
    return build_grid(LAMBDA_P, DW, 255)


@pytest.fixture(scope="session")
def rng():
    return np.random.Generator(np.random.Philox(42))
