"""Spectra, photon numbers, JSI and scalar metrics from Bogoliubov tensors.

With the dimensionless tensors (Etilde = E * delta_omega), the photon-number
spectral density is n_s(omega_j) = (1/delta_omega) * sum_k |Fa[j, k]|^2 and
the total photon number is N = delta_omega * sum_j n_s(omega_j).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSpectrumError,
    EmptySpectrumError,
    WidthExceedsGridError,
)
from .grid import FrequencyGrid
from .rigorous import BogoliubovTensors

#: bins at or below this fraction of the peak are zeroed by ``trim``
TRIM_THRESHOLD = 0.005

#: relative imaginary JSI residual above which a numerical warning is issued
_JSI_IMAG_WARN = 1e-4


@dataclass
class SpectralResult:
    """Per-bin photon-number densities and their total.

    ``asymmetry`` is the relative signal/idler photon-number mismatch
    |N_s - N_i| / N, which should sit at numerical noise level.
    """

    n_s: np.ndarray
    n_i: np.ndarray
    total: float
    asymmetry: float
    grid: FrequencyGrid


@dataclass
class JsiResult:
    values: np.ndarray
    imag_residual: float


@dataclass
class MetricsRecord:
    rsd: float
    overlap: float
    fwhm_s: float
    fwhm_i: float
    mean_s: float
    mean_i: float
    sigma_s: float
    sigma_i: float
    trim_threshold: float = TRIM_THRESHOLD

    def as_dict(self) -> dict:
        return {
            "rsd": self.rsd,
            "overlap": self.overlap,
            "fwhm_s": self.fwhm_s,
            "fwhm_i": self.fwhm_i,
            "mean_s": self.mean_s,
            "mean_i": self.mean_i,
            "sigma_s": self.sigma_s,
            "sigma_i": self.sigma_i,
            "trim_threshold": self.trim_threshold,
        }


def spectra(tensors: BogoliubovTensors) -> SpectralResult:
    step = tensors.grid.step
    n_s = np.sum(np.abs(tensors.fa) ** 2, axis=1) / step
    n_i = np.sum(np.abs(tensors.fb) ** 2, axis=1) / step
    total_s = step * float(n_s.sum())
    total_i = step * float(n_i.sum())
    total = 0.5 * (total_s + total_i)
    asym = abs(total_s - total_i) / total if total > 0 else 0.0
    return SpectralResult(n_s=n_s, n_i=n_i, total=total, asymmetry=asym,
                          grid=tensors.grid)


def jsi(tensors: BogoliubovTensors) -> JsiResult:
    """Joint spectral intensity (photon-number covariance) matrix.

    jsi[j, k] = Re[(conj(Fa) conj(Eb)^T)[j, k] * (Ea Fb^T)[j, k]]; the
    imaginary part is a numerical residual and is recorded, then discarded.
    """
    m1 = np.conj(tensors.fa) @ np.conj(tensors.eb).T
    m2 = tensors.ea @ tensors.fb.T
    product = m1 * m2
    scale = np.abs(product).max()
    residual = float(np.abs(product.imag).max() / scale) if scale > 0 else 0.0
    if residual > _JSI_IMAG_WARN:
        warnings.warn(
            f"JSI imaginary residual {residual:.3g} exceeds {_JSI_IMAG_WARN:.0e}",
            stacklevel=2,
        )
    return JsiResult(values=product.real, imag_residual=residual)


def trim(spectrum: np.ndarray, threshold: float = TRIM_THRESHOLD) -> np.ndarray:
    """Zero all bins at or below ``threshold`` times the peak value."""
    spectrum = np.asarray(spectrum, dtype=float)
    if spectrum.size == 0 or spectrum.max() <= 0:
        raise EmptySpectrumError("cannot trim an empty or all-zero spectrum")
    out = spectrum.copy()
    out[out <= threshold * spectrum.max()] = 0.0
    return out


def spectral_moments(axis: np.ndarray, values: np.ndarray) -> tuple[float, float]:
    """Weighted mean and standard deviation of a (possibly trimmed) spectrum."""
    values = np.asarray(values, dtype=float)
    norm = values.sum()
    if norm <= 0:
        raise EmptySpectrumError("spectrum has no weight")
    mean = float(np.dot(axis, values) / norm)
    var = float(np.dot((axis - mean) ** 2, values) / norm)
    return mean, np.sqrt(var)


def rsd(grid: FrequencyGrid, n_s: np.ndarray, n_i: np.ndarray,
        threshold: float = TRIM_THRESHOLD) -> float:
    """Relative spectral distance |mean_s - mean_i| / max(sigma_s, sigma_i).

    Means and widths are computed from tail-trimmed spectra so the result does
    not depend on grid-size-limited far tails.
    """
    axis = grid.omegas
    mean_s, sigma_s = spectral_moments(axis, trim(n_s, threshold))
    mean_i, sigma_i = spectral_moments(axis, trim(n_i, threshold))
    sigma = max(sigma_s, sigma_i)
    if sigma == 0:
        raise DegenerateSpectrumError("both spectra collapse to a single bin")
    return abs(mean_s - mean_i) / sigma


def overlap(n_s: np.ndarray, n_i: np.ndarray) -> float:
    """Normalized zero-lag cross-correlation of the two spectra, in [0, 1]."""
    n_s = np.asarray(n_s, dtype=float)
    n_i = np.asarray(n_i, dtype=float)
    norm = np.sqrt(np.dot(n_s, n_s) * np.dot(n_i, n_i))
    if norm == 0:
        raise EmptySpectrumError("overlap undefined for a zero-norm spectrum")
    return float(np.dot(n_s, n_i) / norm)


def fwhm(grid: FrequencyGrid, values: np.ndarray) -> float:
    """Full width at half maximum [rad/fs], outermost linear-interpolated
    crossings (deterministic for multi-lobed spectra)."""
    return fwhm_axis(grid.omegas, values)


def fwhm_axis(axis: np.ndarray, values: np.ndarray) -> float:
    values = np.asarray(values, dtype=float)
    peak = values.max()
    if peak <= 0:
        raise EmptySpectrumError("FWHM undefined for a non-positive spectrum")
    half = peak / 2
    above = values >= half
    if above[0] or above[-1]:
        raise WidthExceedsGridError("half-maximum not bracketed inside the grid")
    idx = np.nonzero(above)[0]
    lo, hi = idx[0], idx[-1]
    # linear interpolation on the outer flanks
    left = axis[lo - 1] + (half - values[lo - 1]) / (values[lo] - values[lo - 1]) * (
        axis[lo] - axis[lo - 1]
    )
    right = axis[hi] + (half - values[hi]) / (values[hi + 1] - values[hi]) * (
        axis[hi + 1] - axis[hi]
    )
    return float(right - left)


def metrics(result: SpectralResult, threshold: float = TRIM_THRESHOLD) -> MetricsRecord:
    """All scalar metrics for one spectral result.

    RSD uses trimmed spectra; the overlap and FWHM use the raw ones.
    """
    grid = result.grid
    axis = grid.omegas
    ts, ti = trim(result.n_s, threshold), trim(result.n_i, threshold)
    mean_s, sigma_s = spectral_moments(axis, ts)
    mean_i, sigma_i = spectral_moments(axis, ti)
    sigma = max(sigma_s, sigma_i)
    if sigma == 0:
        raise DegenerateSpectrumError("both spectra collapse to a single bin")
    return MetricsRecord(
        rsd=abs(mean_s - mean_i) / sigma,
        overlap=overlap(result.n_s, result.n_i),
        fwhm_s=fwhm(grid, result.n_s),
        fwhm_i=fwhm(grid, result.n_i),
        mean_s=mean_s,
        mean_i=mean_i,
        sigma_s=sigma_s,
        sigma_i=sigma_i,
        trim_threshold=threshold,
    )
