"""Declarative run configuration (JSON) and its validation."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .dispersion import (
    SellmeierCoefficients,
    SellmeierDispersion,
    TaylorDispersion,
    ppktp_dispersion,
)
from .errors import ConfigurationError
from .grid import FrequencyGrid, PumpParams, build_grid
from .rigorous import SolverSettings

SCHEMA_VERSION = 1

MODELS = ("rigorous", "averaged", "both")


@dataclass
class RunConfig:
    model: str
    grid_step: float
    grid_size: int
    pump_wavelength_um: float
    pump_duration_fs: float
    pump_cw: bool
    dispersion: TaylorDispersion | SellmeierDispersion
    gamma: float | None
    target_n: float | None
    solver: SolverSettings
    output_formats: tuple[str, ...] = ("csv",)
    label: str | None = None

    def make_grid(self) -> FrequencyGrid:
        return build_grid(self.pump_wavelength_um, self.grid_step, self.grid_size)

    def make_pump(self) -> PumpParams:
        return PumpParams(self.pump_wavelength_um, self.pump_duration_fs,
                          cw=self.pump_cw)

    def resolved_dict(self) -> dict:
        """JSON-serializable resolved form (also the content-hash input)."""
        disp = self.dispersion
        if isinstance(disp, TaylorDispersion):
            disp_dict = {"type": "taylor", **asdict(disp)}
        else:
            disp_dict = {
                "type": "sellmeier",
                "n_pump": asdict(disp.n_pump),
                "n_signal": asdict(disp.n_signal),
                "n_idler": asdict(disp.n_idler),
                "pump_wavelength_um": disp.pump_wavelength_um,
                "length_mm": disp.length_mm,
                "poling_period_um": disp.poling_period_um,
                "use_taylor": disp.use_taylor,
            }
        return {
            "schema_version": SCHEMA_VERSION,
            "model": self.model,
            "grid": {"delta_omega": self.grid_step, "size": self.grid_size},
            "pump": {
                "lambda_p_um": self.pump_wavelength_um,
                "tau_fs": self.pump_duration_fs,
                "cw": self.pump_cw,
            },
            "dispersion": disp_dict,
            "gain": (
                {"gamma": self.gamma} if self.gamma is not None
                else {"target_n": self.target_n}
            ),
            "solver": {
                "steps": self.solver.steps,
                "convergence_check": self.solver.convergence_check,
                "determinism": self.solver.determinism,
            },
            "outputs": {"formats": list(self.output_formats)},
            "label": self.label,
        }


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise ConfigurationError(f"missing required key '{key}' in {context}")
    return mapping[key]


def _parse_dispersion(d: dict):
    kind = _require(d, "type", "dispersion")
    if kind == "taylor":
        return TaylorDispersion(
            alpha_s=float(_require(d, "alpha_s", "taylor dispersion")),
            alpha_i=float(_require(d, "alpha_i", "taylor dispersion")),
            beta_p=float(_require(d, "beta_p", "taylor dispersion")),
            beta_s=float(_require(d, "beta_s", "taylor dispersion")),
            beta_i=float(_require(d, "beta_i", "taylor dispersion")),
            length_mm=float(_require(d, "length_mm", "taylor dispersion")),
        )
    if kind == "sellmeier":
        if d.get("material") == "ppktp":
            return ppktp_dispersion(
                length_mm=float(_require(d, "length_mm", "sellmeier dispersion")),
                pump_wavelength_um=float(d.get("pump_wavelength_um", 0.775)),
                poling_period_um=float(d.get("poling_period_um", 10.8)),
                use_taylor=bool(d.get("use_taylor", False)),
            )
        def coeffs(key):
            c = _require(d, key, "sellmeier dispersion")
            return SellmeierCoefficients(
                constant=float(c["constant"]),
                p1_num=float(c["p1_num"]), p1_den=float(c["p1_den"]),
                p2_num=float(c["p2_num"]), p2_den=float(c["p2_den"]),
            )
        return SellmeierDispersion(
            n_pump=coeffs("n_pump"),
            n_signal=coeffs("n_signal"),
            n_idler=coeffs("n_idler"),
            pump_wavelength_um=float(_require(d, "pump_wavelength_um",
                                              "sellmeier dispersion")),
            length_mm=float(_require(d, "length_mm", "sellmeier dispersion")),
            poling_period_um=d.get("poling_period_um"),
            use_taylor=bool(d.get("use_taylor", False)),
        )
    raise ConfigurationError(f"unknown dispersion type '{kind}'")


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigurationError("run config must be a JSON object")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigurationError(f"unsupported schema_version {version}")
    model = data.get("model", "rigorous")
    if model not in MODELS:
        raise ConfigurationError(f"model must be one of {MODELS}, got '{model}'")
    grid = _require(data, "grid", "run config")
    pump = _require(data, "pump", "run config")
    gain = _require(data, "gain", "run config")
    if ("gamma" in gain) == ("target_n" in gain):
        raise ConfigurationError("gain must contain exactly one of gamma / target_n")
    solver = data.get("solver", {})
    settings = SolverSettings(
        steps=solver.get("steps"),
        convergence_check=bool(solver.get("convergence_check", False)),
        determinism=bool(solver.get("determinism", False)),
    )
    outputs = data.get("outputs", {})
    cfg = RunConfig(
        model=model,
        grid_step=float(_require(grid, "delta_omega", "grid")),
        grid_size=int(_require(grid, "size", "grid")),
        pump_wavelength_um=float(_require(pump, "lambda_p_um", "pump")),
        pump_duration_fs=float(_require(pump, "tau_fs", "pump")),
        pump_cw=bool(pump.get("cw", False)),
        dispersion=_parse_dispersion(_require(data, "dispersion", "run config")),
        gamma=float(gain["gamma"]) if "gamma" in gain else None,
        target_n=float(gain["target_n"]) if "target_n" in gain else None,
        solver=settings,
        output_formats=tuple(outputs.get("formats", ["csv"])),
        label=data.get("label"),
    )
    # construct early so bad grid/pump parameters fail as config errors
    cfg.make_grid()
    cfg.make_pump()
    return cfg


def load_config(path: str | Path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file is not valid JSON: {exc}")
    return parse_config(data)
