"""Discrete frequency grid for the signal/idler fields and the pump spectral amplitude.

The grid is centered at half the pump carrier frequency omega0/2 so that the
degenerate point (zero detuning) is always a grid node. All frequencies are
angular frequencies in rad/fs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .constants import C_MM_FS
from .errors import ConfigurationError


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform frequency axis omega_j = center + (j - (M-1)/2) * step.

    ``center`` is omega0/2 [rad/fs], ``step`` is the bin width delta_omega
    [rad/fs] and ``size`` the (odd) number of points M.
    """

    center: float
    step: float
    size: int

    def __post_init__(self):
        if self.size < 1 or self.size % 2 == 0:
            raise ConfigurationError(f"grid size must be odd and positive, got {self.size}")
        if not (self.step > 0):
            raise ConfigurationError(f"grid step must be positive, got {self.step}")
        if not (self.center > 0):
            raise ConfigurationError(f"grid center must be positive, got {self.center}")

    @cached_property
    def detunings(self) -> np.ndarray:
        """Detuning axis Omega_j = omega_j - omega0/2, antisymmetric about 0."""
        j = np.arange(self.size, dtype=float) - (self.size - 1) / 2
        return j * self.step

    @cached_property
    def omegas(self) -> np.ndarray:
        return self.center + self.detunings

    @property
    def span(self) -> float:
        """Total covered bandwidth (M-1) * delta_omega."""
        return (self.size - 1) * self.step


@dataclass(frozen=True)
class PumpParams:
    """Gaussian pump pulse: central wavelength [um] and duration tau [fs].

    ``cw`` switches to the continuous-wave limit, where the pump spectral
    function degenerates to a Kronecker delta on Omega_s + Omega_i = 0.
    """

    wavelength_um: float
    duration_fs: float
    cw: bool = False

    def __post_init__(self):
        if not (self.wavelength_um > 0):
            raise ConfigurationError("pump wavelength must be positive")
        if not (self.duration_fs > 0):
            raise ConfigurationError("pump duration must be positive")

    @property
    def omega0(self) -> float:
        """Pump carrier angular frequency 2*pi*c/lambda_p [rad/fs]."""
        return 2 * math.pi * C_MM_FS / (self.wavelength_um * 1e-3)

    @property
    def amplitude_fwhm(self) -> float:
        """FWHM of the spectral amplitude S(Omega): 2*sqrt(2 ln 2)/tau."""
        return 2 * math.sqrt(2 * math.log(2)) / self.duration_fs


def build_grid(wavelength_um: float, step: float, size: int) -> FrequencyGrid:
    """Build a signal/idler grid centered at half the pump frequency.

    Raises ConfigurationError for even or too-small ``size`` and for
    non-positive ``step``.
    """
    if size < 3 or size % 2 == 0:
        raise ConfigurationError(f"grid size must be an odd integer >= 3, got {size}")
    if not (step > 0):
        raise ConfigurationError(f"grid step must be positive, got {step}")
    omega0 = 2 * math.pi * C_MM_FS / (wavelength_um * 1e-3)
    return FrequencyGrid(center=omega0 / 2, step=step, size=size)


def pump_amplitude(pump: PumpParams, omega_sum):
    """Pump spectral amplitude S(Omega) = exp(-tau^2 Omega^2 / 2).

    ``omega_sum`` is the detuning sum Omega_s + Omega_i; S peaks at 1 for
    Omega = 0 and is even. Not meaningful for cw pumps (use pump_matrix).
    """
    omega_sum = np.asarray(omega_sum, dtype=float)
    return np.exp(-(pump.duration_fs**2) * omega_sum**2 / 2)


def pump_matrix(pump: PumpParams, grid: FrequencyGrid) -> np.ndarray:
    """M x M matrix S[j, k] = S(Omega_j + Omega_k) over the grid.

    In the cw limit the matrix is the discrete delta on Omega_j + Omega_k = 0,
    i.e. ones on the anti-diagonal. This avoids the underflow of a huge tau.
    """
    if pump.cw:
        m = np.zeros((grid.size, grid.size))
        m[np.arange(grid.size), grid.size - 1 - np.arange(grid.size)] = 1.0
        return m
    om = grid.detunings
    return pump_amplitude(pump, om[:, None] + om[None, :])
