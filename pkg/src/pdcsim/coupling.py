"""z-dependent coupling matrix J and its spatially-averaged version (the TPA).

J[j, k](z) = S(Omega_j + Omega_k) * exp(i * dk(Omega_j, Omega_k) * z)

The modulus of J is z-independent, so the expensive pieces (the pump matrix S
and the mismatch matrix dk) are computed once per (grid, pump, dispersion) and
only the unit-modulus phase factor is reapplied per z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dispersion import Dispersion, delta_k
from .errors import ConfigurationError
from .grid import FrequencyGrid, PumpParams, pump_matrix

#: |x| below which sinc(x) falls back to its Taylor expansion 1 - x^2/6
_SINC_EPS = 1e-8


def _check_center(grid: FrequencyGrid, pump: PumpParams):
    if abs(grid.center - pump.omega0 / 2) > 1e-9 * pump.omega0:
        raise ConfigurationError(
            "frequency grid is not centered at half the pump frequency"
        )


class CouplingKernel:
    """Caches S and dk matrices for one (grid, pump, dispersion) triple."""

    def __init__(self, grid: FrequencyGrid, pump: PumpParams, dispersion: Dispersion):
        _check_center(grid, pump)
        self.grid = grid
        self.pump = pump
        self.dispersion = dispersion
        om = grid.detunings
        self.s_matrix = pump_matrix(pump, grid)
        self.dk_matrix = np.asarray(delta_k(dispersion, om[:, None], om[None, :]))

    def at(self, z: float) -> np.ndarray:
        """Coupling matrix J(z)."""
        if z == 0.0:
            return self.s_matrix.astype(complex)
        return self.s_matrix * np.exp(1j * self.dk_matrix * z)

    def phase_step(self, h: float) -> np.ndarray:
        """Elementwise propagator exp(i * dk * h) for advancing J by h."""
        return np.exp(1j * self.dk_matrix * h)

    def tpa_matrix(self) -> np.ndarray:
        """Spatial average of J over the device length (see ``tpa``)."""
        x = self.dk_matrix * self.dispersion.length_mm / 2
        return self.s_matrix * _sinc(x) * np.exp(1j * x)


@dataclass(frozen=True)
class CouplingMatrix:
    values: np.ndarray
    grid: FrequencyGrid
    z: float


@dataclass(frozen=True)
class TwoPhotonAmplitude:
    """Averaged coupling S * sinc(dk L / 2) * exp(i dk L / 2) at device length L."""

    values: np.ndarray
    grid: FrequencyGrid
    length_mm: float


def _sinc(x: np.ndarray) -> np.ndarray:
    """sin(x)/x with a series branch near zero."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SINC_EPS
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x**2 / 6.0, np.sin(safe) / safe)


def coupling_at(grid: FrequencyGrid, pump: PumpParams, dispersion: Dispersion,
                z: float) -> CouplingMatrix:
    kernel = CouplingKernel(grid, pump, dispersion)
    return CouplingMatrix(values=kernel.at(z), grid=grid, z=z)


def tpa(grid: FrequencyGrid, pump: PumpParams, dispersion: Dispersion,
        length_mm: float | None = None) -> TwoPhotonAmplitude:
    """Two-photon amplitude for a device of length L (defaults to the
    dispersion's own length)."""
    _check_center(grid, pump)
    length = dispersion.length_mm if length_mm is None else length_mm
    if not (length > 0):
        raise ConfigurationError("TPA length must be positive")
    om = grid.detunings
    dk = np.asarray(delta_k(dispersion, om[:, None], om[None, :]))
    x = dk * length / 2
    values = pump_matrix(pump, grid) * _sinc(x) * np.exp(1j * x)
    return TwoPhotonAmplitude(values=values, grid=grid, length_mm=length)
