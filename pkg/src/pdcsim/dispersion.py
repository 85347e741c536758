"""Wavevector mismatch models for type-II waveguides.

Two parameterizations are supported:

* ``TaylorDispersion`` -- second-order expansion around the degenerate point,
  parameterized by the inverse-group-velocity mismatches alpha_{s,i} [fs/mm]
  and the group-velocity dispersions beta_{p,s,i} [fs^2/mm]:

      dk(Os, Oi) = alpha_s*Os + alpha_i*Oi
                   + (beta_p*(Os+Oi)^2 - beta_s*Os^2 - beta_i*Oi^2) / 2

  The zero-order term is removed by construction, so dk(0, 0) = 0.

* ``SellmeierDispersion`` -- full chromatic dispersion k(w) = n(w) w / c from
  two-pole Sellmeier refractive-index formulas plus a quasi-phase-matching
  offset k_qpm calibrated so that dk(0, 0) = 0 exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C_MM_FS, C_UM_FS
from .errors import ConfigurationError, DegenerateDispersionError


@dataclass(frozen=True)
class TaylorDispersion:
    alpha_s: float
    alpha_i: float
    beta_p: float
    beta_s: float
    beta_i: float
    length_mm: float

    def __post_init__(self):
        if not (self.length_mm > 0):
            raise ConfigurationError("waveguide length must be positive")
        vals = (self.alpha_s, self.alpha_i, self.beta_p, self.beta_s, self.beta_i)
        if not all(math.isfinite(v) for v in vals):
            raise ConfigurationError("dispersion parameters must be finite")


@dataclass(frozen=True)
class SellmeierCoefficients:
    """n^2(lambda) = constant + p1_num/(lambda^2 - p1_den) + p2_num/(lambda^2 - p2_den),
    wavelength in um."""

    constant: float
    p1_num: float
    p1_den: float
    p2_num: float
    p2_den: float

    def index(self, wavelength_um):
        l2 = np.asarray(wavelength_um, dtype=float) ** 2
        n2 = (
            self.constant
            + self.p1_num / (l2 - self.p1_den)
            + self.p2_num / (l2 - self.p2_den)
        )
        if np.any(n2 <= 1.0):
            raise ConfigurationError(
                "Sellmeier index not real and > 1 in the requested band "
                "(pole inside band?)"
            )
        return np.sqrt(n2)

    def wavevector(self, omega):
        """k(omega) = n(omega) * omega / c [1/mm], omega in rad/fs."""
        lam_um = 2 * math.pi * C_UM_FS / np.asarray(omega, dtype=float)
        return self.index(lam_um) * np.asarray(omega) / C_MM_FS


#: KTP bulk-like Sellmeier sets for the two relevant polarizations.
KTP_BETA = SellmeierCoefficients(3.45018, 0.04341, 0.04597, 16.98825, 39.43799)
KTP_GAMMA = SellmeierCoefficients(4.59423, 0.06206, 0.04763, 110.80672, 86.12171)


@dataclass(frozen=True)
class SellmeierDispersion:
    """Full-dispersion waveguide: pump, signal and idler Sellmeier sets.

    ``pump_wavelength_um`` fixes the degenerate point where k_qpm is
    calibrated; ``poling_period_um`` is informational (the calibrated k_qpm
    is reported back as an equivalent period via ``equivalent_poling_period``).
    ``use_taylor`` forces the second-order Taylor reduction inside delta_k.
    """

    n_pump: SellmeierCoefficients
    n_signal: SellmeierCoefficients
    n_idler: SellmeierCoefficients
    pump_wavelength_um: float
    length_mm: float
    poling_period_um: float | None = None
    use_taylor: bool = False

    def __post_init__(self):
        if not (self.length_mm > 0):
            raise ConfigurationError("waveguide length must be positive")
        if self.poling_period_um is not None and not (self.poling_period_um > 0):
            raise ConfigurationError("poling period must be positive")

    @property
    def omega0(self) -> float:
        return 2 * math.pi * C_MM_FS / (self.pump_wavelength_um * 1e-3)

    @property
    def k_qpm(self) -> float:
        """QPM offset chosen so that dk(0, 0) = 0 exactly."""
        w0 = self.omega0
        return (
            float(self.n_pump.wavevector(w0))
            - float(self.n_signal.wavevector(w0 / 2))
            - float(self.n_idler.wavevector(w0 / 2))
        )

    @property
    def equivalent_poling_period_um(self) -> float:
        return 2 * math.pi / self.k_qpm * 1e3


def ppktp_dispersion(length_mm: float, pump_wavelength_um: float = 0.775,
                     poling_period_um: float = 10.8,
                     use_taylor: bool = False) -> SellmeierDispersion:
    """Periodically poled KTP with a gamma -> (beta, gamma) process.

    The beta-polarized daughter is labeled "signal" so that alpha_s >= alpha_i.
    """
    return SellmeierDispersion(
        n_pump=KTP_GAMMA,
        n_signal=KTP_BETA,
        n_idler=KTP_GAMMA,
        pump_wavelength_um=pump_wavelength_um,
        length_mm=length_mm,
        poling_period_um=poling_period_um,
        use_taylor=use_taylor,
    )


@dataclass(frozen=True)
class CharacteristicTimes:
    """tau1 = |alpha_s - alpha_i| * L (group delay), tau2 = |kappa| (phase-matching
    curvature at zero detuning), both in fs; kappa keeps its sign."""

    tau1: float
    tau2: float
    kappa: float


Dispersion = TaylorDispersion | SellmeierDispersion


def delta_k(dispersion: Dispersion, omega_s, omega_i):
    """Wavevector mismatch dk(Omega_s, Omega_i) [1/mm] at given detunings [rad/fs]."""
    os_ = np.asarray(omega_s, dtype=float)
    oi = np.asarray(omega_i, dtype=float)
    if isinstance(dispersion, SellmeierDispersion):
        if dispersion.use_taylor:
            dispersion = sellmeier_to_taylor(dispersion)
        else:
            w0 = dispersion.omega0
            return (
                dispersion.n_pump.wavevector(w0 + os_ + oi)
                - dispersion.n_signal.wavevector(w0 / 2 + os_)
                - dispersion.n_idler.wavevector(w0 / 2 + oi)
                - dispersion.k_qpm
            )
    d = dispersion
    dk1 = d.alpha_s * os_ + d.alpha_i * oi
    dk2 = 0.5 * (d.beta_p * (os_ + oi) ** 2 - d.beta_s * os_**2 - d.beta_i * oi**2)
    return dk1 + dk2


def curvature(dispersion: Dispersion) -> float:
    """Signed curvature kappa [fs] of the implicit curve dk = 0 at zero detuning.

    kappa = [ai^2 (bp - bs) - 2 as ai bp + as^2 (bp - bi)] / (as^2 + ai^2)^(3/2)
    """
    if isinstance(dispersion, SellmeierDispersion):
        dispersion = sellmeier_to_taylor(dispersion)
    d = dispersion
    denom = (d.alpha_s**2 + d.alpha_i**2) ** 1.5
    if denom == 0:
        raise DegenerateDispersionError(
            "curvature undefined for alpha_s = alpha_i = 0"
        )
    num = (
        d.alpha_i**2 * (d.beta_p - d.beta_s)
        - 2 * d.alpha_s * d.alpha_i * d.beta_p
        + d.alpha_s**2 * (d.beta_p - d.beta_i)
    )
    return num / denom


def characteristic_times(dispersion: Dispersion) -> CharacteristicTimes:
    taylor = (
        sellmeier_to_taylor(dispersion)
        if isinstance(dispersion, SellmeierDispersion)
        else dispersion
    )
    kappa = curvature(taylor)
    tau1 = abs(taylor.alpha_s - taylor.alpha_i) * taylor.length_mm
    return CharacteristicTimes(tau1=tau1, tau2=abs(kappa), kappa=kappa)


def _derivatives(coeffs: SellmeierCoefficients, omega: float, h: float):
    """First and second omega-derivatives of k(omega) by central differences.

    Richardson-free 5-point stencils; h is chosen small against the Sellmeier
    scale but large against double-precision cancellation.
    """
    w = omega + h * np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    k = coeffs.wavevector(w)
    d1 = (k[0] - 8 * k[1] + 8 * k[3] - k[4]) / (12 * h)
    d2 = (-k[0] + 16 * k[1] - 30 * k[2] + 16 * k[3] - k[4]) / (12 * h**2)
    return float(d1), float(d2)


def sellmeier_to_taylor(sellmeier: SellmeierDispersion,
                        step: float = 1e-3) -> TaylorDispersion:
    """Extract (alpha_s, alpha_i, beta_p, beta_s, beta_i) at the degenerate point.

    alpha_{s,i} = k_p'(w0) - k_{s,i}'(w0/2); beta = k'' evaluated at the
    respective carrier. ``step`` is the finite-difference step [rad/fs].
    """
    if not (step > 0) or step < 1e-9:
        raise ConfigurationError("differentiation step underflow")
    w0 = sellmeier.omega0
    kp1, kp2 = _derivatives(sellmeier.n_pump, w0, step)
    ks1, ks2 = _derivatives(sellmeier.n_signal, w0 / 2, step)
    ki1, ki2 = _derivatives(sellmeier.n_idler, w0 / 2, step)
    return TaylorDispersion(
        alpha_s=kp1 - ks1,
        alpha_i=kp1 - ki1,
        beta_p=kp2,
        beta_s=ks2,
        beta_i=ki2,
        length_mm=sellmeier.length_mm,
    )
