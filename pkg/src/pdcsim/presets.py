"""Shipped run presets: benchmark waveguides and ensemble-study plans.

The wg0/wg1/wg2 trio shares the same group-velocity mismatch (alpha_s = 30,
alpha_i = 20 fs/mm, tau1 = 100 fs) and differs only in the second-order
dispersion: none, weak, strong. ex1/ex2, no-shift and random-star are fixed
example waveguides from the two characteristic-time regimes; ppktp is the
full-Sellmeier device with a 10 fs pump.
"""

from __future__ import annotations

import copy

from .errors import ConfigurationError

_DW_DEFAULT = 2 * 3.141592653589793 * 0.36e-3  # rad/fs

_WG = {
    # alpha_s, alpha_i [fs/mm], beta_p, beta_s, beta_i [fs^2/mm], L [mm]
    "wg0": dict(alpha_s=30.0, alpha_i=20.0, beta_p=0.0, beta_s=0.0, beta_i=0.0,
                length_mm=10.0),
    "wg1": dict(alpha_s=30.0, alpha_i=20.0, beta_p=30.0, beta_s=10.0, beta_i=10.0,
                length_mm=10.0),
    "wg2": dict(alpha_s=30.0, alpha_i=20.0, beta_p=300.0, beta_s=-100.0,
                beta_i=100.0, length_mm=10.0),
    "ex1": dict(alpha_s=29.15, alpha_i=-33.79, beta_p=-338.0, beta_s=131.0,
                beta_i=-265.0, length_mm=10.0),
    "ex2": dict(alpha_s=-5.49, alpha_i=-5.89, beta_p=-11.0, beta_s=-150.0,
                beta_i=320.0, length_mm=10.0),
    "no-shift": dict(alpha_s=200.0, alpha_i=100.0, beta_p=300.0, beta_s=150.0,
                     beta_i=100.0, length_mm=10.0),
    "random-star": dict(alpha_s=-33.9, alpha_i=-34.3, beta_p=144.0, beta_s=-137.0,
                        beta_i=-278.0, length_mm=10.0),
}


def _taylor_config(wg: str, target_n: float, label: str) -> dict:
    return {
        "schema_version": 1,
        "model": "rigorous",
        "grid": {"delta_omega": _DW_DEFAULT, "size": 255},
        "pump": {"lambda_p_um": 0.775, "tau_fs": 80.0, "cw": False},
        "dispersion": {"type": "taylor", **_WG[wg]},
        "gain": {"target_n": target_n},
        "solver": {},
        "outputs": {"formats": ["csv"]},
        "label": label,
    }


def _ppktp_config(target_n: float, label: str) -> dict:
    # 10 fs pump needs a wide band: dw chosen so the 255-point grid spans
    # about +-0.80 rad/fs around the degenerate frequency, comfortably above
    # the pump bandwidth yet inside the validity range of the Sellmeier fits
    # (the signal-polarization fit has a pole near -0.92 rad/fs detuning)
    return {
        "schema_version": 1,
        "model": "rigorous",
        "grid": {"delta_omega": 2 * 3.141592653589793 * 1.0e-3, "size": 255},
        "pump": {"lambda_p_um": 0.775, "tau_fs": 10.0, "cw": False},
        "dispersion": {"type": "sellmeier", "material": "ppktp",
                       "length_mm": 1.0, "poling_period_um": 10.8},
        "gain": {"target_n": target_n},
        "solver": {},
        "outputs": {"formats": ["csv"]},
        "label": label,
    }


RUN_PRESETS: dict[str, dict] = {}
for _name in _WG:
    RUN_PRESETS[f"{_name}-lowgain"] = _taylor_config(_name, 1e-5, f"{_name}-lowgain")
    RUN_PRESETS[f"{_name}-highgain"] = _taylor_config(_name, 1e5, f"{_name}-highgain")
RUN_PRESETS["ppktp-lowgain"] = _ppktp_config(6e-5, "ppktp-lowgain")
RUN_PRESETS["ppktp-highgain"] = _ppktp_config(1.6e6, "ppktp-highgain")

#: ensemble-study plans (see sampling.SamplePlan for field meanings)
PLAN_PRESETS: dict[str, dict] = {
    "fig-beta-zero": {
        "seed": 20240101, "count": 20, "beta_zero": True,
        "gain_ladder": [1e-5, 1.0, 10.0, 1e3, 1e5],
        "grid_size": 127,
    },
    "fig-beta-random": {
        "seed": 20240102, "count": 20, "beta_zero": False,
        "gain_ladder": [1e-5, 1.0, 10.0, 1e3, 1e5],
        "grid_size": 255,
    },
    "fig-landscape": {
        "seed": 20240103, "count": 50, "beta_zero": False,
        "gain_ladder": [10.0],
        "grid_size": 255,
        # admit strongly phase-matched devices (small group delay): with the
        # default 0.1 bound the tau1 < 0.3 tau region is empty
        "fwhm_max_frac": 0.2,
    },
}


def run_preset(name: str) -> dict:
    if name not in RUN_PRESETS:
        raise ConfigurationError(
            f"unknown preset '{name}' (known: {', '.join(sorted(RUN_PRESETS))})"
        )
    return copy.deepcopy(RUN_PRESETS[name])


def plan_preset(name: str) -> dict:
    if name not in PLAN_PRESETS:
        raise ConfigurationError(
            f"unknown plan preset '{name}' (known: {', '.join(sorted(PLAN_PRESETS))})"
        )
    return copy.deepcopy(PLAN_PRESETS[name])
