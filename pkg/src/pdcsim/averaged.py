"""Spatially-averaged (first-order Magnus) model.

Replacing the z-dependent coupling by the two-photon amplitude makes the
Heisenberg system z-independent, so the output Bogoliubov transform is
closed-form in the Schmidt basis of the TPA. With the SVD of the
delta_omega-weighted TPA matrix A = delta_omega * Jtilde = U diag(s) Vh
(Vbar = Vh^T holding the conjugated right modes) and r_k = Gamma * L * s_k:

    Ea = I + U (cosh r - 1) U^dag          Fa = i U sinh(r) Vh
    Eb = I + Vbar (cosh r - 1) Vbar^dag    Fb = i Vbar sinh(r) U^T

This convention is fixed by requiring equality with the direct RK4
integration of the averaged equations (``averaged_propagate_ode``), which is
the unambiguous formulation of the model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coupling import CouplingKernel, TwoPhotonAmplitude, tpa
from .dispersion import Dispersion
from .errors import CalibrationError, ConfigurationError
from .grid import FrequencyGrid, PumpParams
from .rigorous import BogoliubovTensors, SolverSettings, _integrate

#: singular values below this fraction of the leading one are dropped
_SCHMIDT_TRUNCATION = 1e-12


@dataclass
class SchmidtModes:
    """Schmidt decomposition of the delta_omega-weighted TPA.

    ``values`` are the singular values s_k (descending, truncated at the
    numerical noise floor). ``signal_modes``/``idler_modes`` are (M, K)
    arrays whose columns are orthonormal under the delta_omega-weighted
    inner product: delta_omega * sum_j |psi_k(omega_j)|^2 = 1.
    """

    values: np.ndarray
    signal_modes: np.ndarray
    idler_modes: np.ndarray
    grid: FrequencyGrid
    length_mm: float

    def reconstruct(self) -> np.ndarray:
        """Rebuild the (unweighted) TPA matrix from the kept modes."""
        u = self.signal_modes * math.sqrt(self.grid.step)
        vbar = self.idler_modes * math.sqrt(self.grid.step)
        return (u * self.values) @ vbar.T / self.grid.step

    def photon_number(self, gamma: float) -> float:
        """Closed-form N(Gamma) = sum_k sinh^2(Gamma L s_k)."""
        return float(np.sum(np.sinh(gamma * self.length_mm * self.values) ** 2))


def schmidt_decompose(amplitude: TwoPhotonAmplitude) -> SchmidtModes:
    """SVD of the delta_omega-weighted discrete TPA matrix."""
    values = amplitude.values
    if not np.all(np.isfinite(values)):
        raise ConfigurationError("TPA contains non-finite entries")
    grid = amplitude.grid
    u, s, vh = np.linalg.svd(values * grid.step)
    keep = s > _SCHMIDT_TRUNCATION * s[0] if s[0] > 0 else s > 0
    u, s, vh = u[:, keep], s[keep], vh[keep, :]
    scale = 1.0 / math.sqrt(grid.step)
    return SchmidtModes(
        values=s,
        signal_modes=u * scale,
        idler_modes=vh.T * scale,  # conjugated right modes, columns per mode
        grid=grid,
        length_mm=amplitude.length_mm,
    )


def averaged_bogoliubov(modes: SchmidtModes, gamma: float) -> BogoliubovTensors:
    """Closed-form hyperbolic Bogoliubov transform of the averaged model."""
    if gamma < 0:
        raise ConfigurationError("gain must be non-negative")
    grid = modes.grid
    r = gamma * modes.length_mm * modes.values
    u = modes.signal_modes * math.sqrt(grid.step)
    vbar = modes.idler_modes * math.sqrt(grid.step)
    eye = np.eye(grid.size, dtype=complex)
    cosh1 = np.cosh(r) - 1.0
    sinh = np.sinh(r)
    ea = eye + (u * cosh1) @ u.conj().T
    fa = 1j * (u * sinh) @ vbar.T
    eb = eye + (vbar * cosh1) @ vbar.conj().T
    fb = 1j * (vbar * sinh) @ u.T
    return BogoliubovTensors(ea=ea, fa=fa, eb=eb, fb=fb, gamma=gamma,
                             z=modes.length_mm, grid=grid)


def averaged_propagate_ode(grid: FrequencyGrid, pump: PumpParams,
                           dispersion: Dispersion, gamma: float,
                           settings: SolverSettings | None = None) -> BogoliubovTensors:
    """Direct RK4 integration of the averaged Heisenberg equations.

    Same contract as the rigorous ``propagate`` but with the z-independent
    TPA coupling on the right-hand side; serves as the cross-check oracle for
    ``averaged_bogoliubov``.
    """
    if gamma < 0:
        raise ConfigurationError("gain must be non-negative")
    settings = settings or SolverSettings()
    kernel = _FrozenKernel(CouplingKernel(grid, pump, dispersion))
    steps = settings.resolve_steps(dispersion.length_mm)
    return _integrate(kernel, gamma, steps)


class _FrozenKernel:
    """Coupling kernel that always returns the TPA, regardless of z."""

    def __init__(self, kernel: CouplingKernel):
        self.grid = kernel.grid
        self.dispersion = kernel.dispersion
        self._tpa = kernel.tpa_matrix().astype(complex)

    def at(self, z: float) -> np.ndarray:
        return self._tpa

    def phase_step(self, h: float) -> np.ndarray:
        return np.ones_like(self._tpa)


def averaged_calibrate(modes: SchmidtModes, target_n: float) -> float:
    """Gamma reaching ``target_n`` photons under the averaged model
    (closed-form monotone root)."""
    if not (target_n > 0):
        raise ConfigurationError("target photon number must be positive")
    from scipy.optimize import brentq
    lo, hi = 1e-12, 1e-6
    if modes.photon_number(lo) >= target_n:
        raise CalibrationError("target photon number below the calibratable range")
    while modes.photon_number(hi) < target_n:
        hi *= 4.0
        if hi > 1e9:
            raise CalibrationError("averaged-model bracket not found")
    return brentq(
        lambda g: math.log(modes.photon_number(g)) - math.log(target_n),
        lo, hi, xtol=1e-14, rtol=1e-10,
    )


def averaged_tensors(grid: FrequencyGrid, pump: PumpParams, dispersion: Dispersion,
                     gamma: float) -> BogoliubovTensors:
    """Convenience: Schmidt-decompose the TPA and apply the closed form."""
    modes = schmidt_decompose(tpa(grid, pump, dispersion))
    return averaged_bogoliubov(modes, gamma)
