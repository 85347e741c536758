import math

import numpy as np
import pytest
import sympy
from scipy.optimize import brentq

from pdcsim import (
    SellmeierCoefficients,
    SellmeierDispersion,
    TaylorDispersion,
    characteristic_times,
    curvature,
    delta_k,
    ppktp_dispersion,
    sellmeier_to_taylor,
)
from pdcsim.constants import C_MM_FS, C_UM_FS
from pdcsim.errors import ConfigurationError, DegenerateDispersionError

from conftest import WG0, WG1, WG2

EX1 = TaylorDispersion(29.15, -33.79, -338.0, 131.0, -265.0, 10.0)


def test_delta_k_vanishes_at_origin():
    for disp in (WG0, WG1, WG2, EX1, ppktp_dispersion(1.0)):
        assert delta_k(disp, 0.0, 0.0) == pytest.approx(0.0, abs=1e-12)


def test_wg1_characteristic_estimates():
    tau = 80.0
    os_, oi = 1.0 / tau, -1.0 / tau
    dk1 = WG1.alpha_s * os_ + WG1.alpha_i * oi
    assert dk1 == pytest.approx(0.125, rel=1e-12)
    # full mismatch minus the linear part isolates the quadratic term
    dk2 = float(delta_k(WG1, os_, oi)) - dk1
    assert dk2 == pytest.approx(-0.0015625, rel=1e-12)


def test_wg2_direct_substitution():
    os_ = oi = 0.0125
    dk1 = WG2.alpha_s * os_ + WG2.alpha_i * oi
    dk2 = float(delta_k(WG2, os_, oi)) - dk1
    assert dk1 == pytest.approx(0.625, rel=1e-12)
    # symbolic cross-check of the quadratic term
    s, i = sympy.symbols("s i")
    expr = (sympy.Rational(1, 2)
            * (300 * (s + i) ** 2 - (-100) * s**2 - 100 * i**2))
    expected = float(expr.subs({s: sympy.Rational(1, 80), i: sympy.Rational(1, 80)}))
    assert dk2 == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(0.09375, rel=1e-12)


def test_taylor_delta_k_exactly_quadratic(rng):
    # second differences along any fixed direction are constant
    for _ in range(5):
        disp = TaylorDispersion(*rng.uniform(-300, 300, size=5), length_mm=10.0)
        direction = rng.uniform(-1, 1, size=2)
        t = np.linspace(-0.05, 0.05, 41)
        vals = np.asarray(delta_k(disp, t * direction[0], t * direction[1]))
        second = np.diff(vals, 2)
        assert np.allclose(second, second[0], atol=1e-12 + 1e-9 * abs(second[0]))


def test_curvature_zero_without_gvd():
    assert curvature(WG0) == 0.0


def test_curvature_table_values():
    assert curvature(WG1) == pytest.approx(-10000 / 1300**1.5, rel=1e-12)
    assert abs(curvature(WG1)) == pytest.approx(0.21, abs=0.005)
    assert curvature(WG2) == pytest.approx(-20000 / 1300**1.5, rel=1e-12)
    assert abs(curvature(WG2)) == pytest.approx(0.42, abs=0.01)


def test_curvature_degenerate_error():
    flat = TaylorDispersion(0.0, 0.0, 10.0, 5.0, 5.0, 10.0)
    with pytest.raises(DegenerateDispersionError):
        curvature(flat)


def _isoline_curvature(disp, h=1e-4):
    """Trace the dk = 0 isoline near the origin and measure its curvature.

    Walk distance h along the tangent, then find the offset d back to the
    isoline along the unit gradient; for small h the curve deviates as
    d = -kappa h^2 / 2 (sign fixed by the circle x^2 + y^2 = R^2, whose
    curvature is +1/R under the gradient convention used here).
    """
    g = np.array([disp.alpha_s, disp.alpha_i], dtype=float)
    n = g / np.linalg.norm(g)
    t = np.array([-n[1], n[0]])

    def offset(h_signed):
        def f(d):
            p = h_signed * t + d * n
            return float(delta_k(disp, p[0], p[1]))
        lim = 10 * abs(h_signed)
        return brentq(f, -lim, lim, xtol=1e-16)

    d = 0.5 * (offset(h) + offset(-h))
    return -2.0 * d / h**2


def test_isoline_oracle_on_circle():
    # sanity-check the oracle against the unit circle (x+1)^2 + y^2 = 1,
    # realized as dk = 2x + x^2 + y^2
    circle = TaylorDispersion(2.0, 0.0, 0.0, -2.0, -2.0, 1.0)
    assert _isoline_curvature(circle) == pytest.approx(curvature(circle), rel=1e-4)
    assert curvature(circle) == pytest.approx(1.0, rel=1e-12)


def test_curvature_matches_traced_isoline(rng):
    checked = 0
    while checked < 20:
        params = rng.uniform(-300, 300, size=5)
        params[0] = rng.uniform(5, 35) * rng.choice([-1, 1])
        params[1] = rng.uniform(5, 35) * rng.choice([-1, 1])
        disp = TaylorDispersion(*params, length_mm=10.0)
        kappa = curvature(disp)
        if abs(kappa) < 1e-3:
            continue
        assert _isoline_curvature(disp) == pytest.approx(kappa, rel=1e-3)
        checked += 1


def test_characteristic_times_wg_table():
    for disp, tau2 in ((WG0, 0.0), (WG1, 0.21), (WG2, 0.42)):
        times = characteristic_times(disp)
        assert times.tau1 == pytest.approx(100.0, abs=1e-9)
        assert times.tau2 == pytest.approx(tau2, abs=0.01)


def test_characteristic_times_symmetric_group_velocity():
    disp = TaylorDispersion(25.0, 25.0, 10.0, 0.0, 0.0, 10.0)
    assert characteristic_times(disp).tau1 == 0.0


def test_characteristic_times_ex1():
    assert characteristic_times(EX1).tau1 == pytest.approx(629.4, rel=1e-6)


# --- Sellmeier ---------------------------------------------------------------


def test_ppktp_taylor_reduction_matches_reference():
    taylor = sellmeier_to_taylor(ppktp_dispersion(1.0))
    expected = dict(alpha_s=516.6, alpha_i=221.0, beta_p=292.3,
                    beta_s=30.9, beta_i=59.3)
    for key, value in expected.items():
        assert getattr(taylor, key) == pytest.approx(value, rel=0.01)


def test_ppktp_signal_idler_ordering():
    taylor = sellmeier_to_taylor(ppktp_dispersion(1.0))
    assert taylor.alpha_s >= taylor.alpha_i


def test_ppktp_equivalent_poling_period():
    assert ppktp_dispersion(1.0).equivalent_poling_period_um == pytest.approx(
        10.8, abs=0.1
    )


def test_dispersionless_medium_reduces_to_zero():
    const = SellmeierCoefficients(2.25, 0.0, -1.0, 0.0, -2.0)  # n = 1.5
    sell = SellmeierDispersion(const, const, const, 0.775, 10.0)
    taylor = sellmeier_to_taylor(sell)
    assert taylor.alpha_s == pytest.approx(0.0, abs=1e-7)
    assert taylor.alpha_i == pytest.approx(0.0, abs=1e-7)
    for beta in (taylor.beta_p, taylor.beta_s, taylor.beta_i):
        # second-derivative FD noise floor ~ k * eps / h^2 ~ 1e-6
        assert beta == pytest.approx(0.0, abs=1e-5)


def test_finite_difference_matches_symbolic_derivative():
    # independent oracle: differentiate k(omega) symbolically
    coeffs = ppktp_dispersion(1.0).n_signal
    w = sympy.symbols("w", positive=True)
    lam2 = (2 * sympy.pi * C_UM_FS / w) ** 2
    n = sympy.sqrt(coeffs.constant
                   + coeffs.p1_num / (lam2 - coeffs.p1_den)
                   + coeffs.p2_num / (lam2 - coeffs.p2_den))
    k = n * w / C_MM_FS
    w0 = ppktp_dispersion(1.0).omega0
    exact1 = float(sympy.diff(k, w).subs(w, w0 / 2))
    exact2 = float(sympy.diff(k, w, 2).subs(w, w0 / 2))
    from pdcsim.dispersion import _derivatives
    fd1, fd2 = _derivatives(coeffs, w0 / 2, 1e-3)
    assert fd1 == pytest.approx(exact1, rel=1e-6)
    assert fd2 == pytest.approx(exact2, rel=1e-6)


def test_sellmeier_delta_k_calibrated_to_zero(grid255):
    sell = ppktp_dispersion(1.0)
    assert float(delta_k(sell, 0.0, 0.0)) == pytest.approx(0.0, abs=1e-10)


def test_sellmeier_pole_in_band_rejected():
    bad = SellmeierCoefficients(1.0, -5.0, 0.04597, 0.0, -1.0)
    sell = SellmeierDispersion(bad, bad, bad, 0.775, 1.0)
    with pytest.raises(ConfigurationError):
        delta_k(sell, 0.0, 0.0)


def test_differentiation_step_underflow_rejected():
    with pytest.raises(ConfigurationError):
        sellmeier_to_taylor(ppktp_dispersion(1.0), step=1e-12)


def test_full_vs_taylor_sellmeier_agree_near_origin():
    full = ppktp_dispersion(1.0)
    forced = ppktp_dispersion(1.0, use_taylor=True)
    om = np.linspace(-5e-3, 5e-3, 11)
    a = np.asarray(delta_k(full, om, -om))
    b = np.asarray(delta_k(forced, om, -om))
    assert np.allclose(a, b, atol=1e-4 + 1e-3 * np.abs(a).max())
