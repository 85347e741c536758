"""Run orchestration: output directories, data files, manifests, sweeps."""

from __future__ import annotations

import csv
import hashlib
import json
import os
import shutil
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .averaged import averaged_calibrate, averaged_bogoliubov, schmidt_decompose
from .config import RunConfig
from .coupling import CouplingKernel, tpa
from .dispersion import (
    SellmeierDispersion,
    characteristic_times,
    sellmeier_to_taylor,
)
from .errors import ConfigurationError, PdcsimError
from .observables import jsi as compute_jsi
from .observables import metrics, spectra
from .rigorous import calibrate_gain, propagate
from .sampling import SamplePlan, landscape_table, run_study

DEFAULT_OUT_ROOT_ENV = "PDCSIM_OUT_ROOT"


def config_hash(cfg: RunConfig) -> str:
    blob = json.dumps(cfg.resolved_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def default_out_root() -> Path:
    return Path(os.environ.get(DEFAULT_OUT_ROOT_ENV, "runs"))


def _write_json_atomic(path: Path, payload: dict):
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    tmp.replace(path)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_spectra_csv(path: Path, grid, n_s, n_i):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega", "Omega", "n_s", "n_i"])
        for w, om, a, b in zip(grid.omegas, grid.detunings, n_s, n_i):
            writer.writerow([f"{w:.12g}", f"{om:.12g}", f"{a:.12g}", f"{b:.12g}"])


def write_matrix_csv(path: Path, grid, matrix, corner_label: str):
    """Matrix with detuning row/column headers; rows = signal axis."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([corner_label] + [f"{o:.12g}" for o in grid.detunings])
        for om, row in zip(grid.detunings, matrix):
            writer.writerow([f"{om:.12g}"] + [f"{v:.12g}" for v in row])


def write_matrix_bin(path: Path, grid, matrix, name: str):
    """Row-major little-endian float64 dump plus a JSON sidecar."""
    arr = np.ascontiguousarray(matrix, dtype="<f8")
    arr.tofile(path)
    _write_json_atomic(path.with_suffix(".json"), {
        "name": name,
        "dtype": "float64-le",
        "order": "row-major",
        "shape": list(arr.shape),
        "axis": "detuning [rad/fs]",
        "detunings": [float(x) for x in grid.detunings],
    })


def _model_outputs(out_dir: Path, cfg: RunConfig, tensors, kernel) -> dict:
    """Write spectra/JSI/metrics for one model's tensors; returns residuals."""
    grid = tensors.grid
    result = spectra(tensors)
    jsi_res = compute_jsi(tensors)
    record = metrics(result)

    write_spectra_csv(out_dir / "spectra.csv", grid, result.n_s, result.n_i)
    write_matrix_csv(out_dir / "jsi.csv", grid, jsi_res.values, "Omega_s\\Omega_i")
    if "bin" in cfg.output_formats:
        write_matrix_bin(out_dir / "jsi.bin", grid, jsi_res.values, "jsi")
    _write_json_atomic(out_dir / "metrics.json", {
        **record.as_dict(),
        "total_photons": result.total,
        "pair_asymmetry": result.asymmetry,
    })
    return {
        "commutator": tensors.commutator_residual(),
        "jsi_imag": jsi_res.imag_residual,
        "pair_asymmetry": result.asymmetry,
        "total_photons": result.total,
        "metrics": record.as_dict(),
    }


def simulate(cfg: RunConfig, out_dir: str | Path | None = None,
             overwrite: bool = False) -> Path:
    """Run one configuration and write its output directory.

    Directory name defaults to the content hash of the resolved config.
    Partial outputs are removed if the run fails.
    """
    if out_dir is None:
        out_dir = default_out_root() / config_hash(cfg)
    out_dir = Path(out_dir)
    if out_dir.exists() and any(out_dir.iterdir()) and not overwrite:
        raise ConfigurationError(f"output directory {out_dir} is not empty")
    out_dir.mkdir(parents=True, exist_ok=True)

    t0 = time.time()
    try:
        grid = cfg.make_grid()
        pump = cfg.make_pump()
        disp = cfg.dispersion
        kernel = CouplingKernel(grid, pump, disp)

        gamma = cfg.gamma
        achieved_n = None
        tensors = None
        if cfg.model in ("rigorous", "both"):
            if gamma is None:
                cal = calibrate_gain(cfg.target_n, grid, pump, disp, cfg.solver)
                gamma, achieved_n, tensors = cal.gamma, cal.photon_number, cal.tensors
            else:
                tensors = propagate(grid, pump, disp, gamma, cfg.solver,
                                    kernel=kernel)
                achieved_n = tensors.photon_number()
        modes = None
        if cfg.model in ("averaged", "both"):
            modes = schmidt_decompose(tpa(grid, pump, disp))
            if gamma is None:
                gamma = averaged_calibrate(modes, cfg.target_n)

        residuals = {}
        if cfg.model in ("rigorous", "both"):
            residuals["rigorous"] = _model_outputs(out_dir, cfg, tensors, kernel)
        if cfg.model in ("averaged", "both"):
            am_dir = out_dir if cfg.model == "averaged" else out_dir / "averaged"
            am_dir.mkdir(exist_ok=True)
            am_tensors = averaged_bogoliubov(modes, gamma)
            if achieved_n is None:
                achieved_n = am_tensors.photon_number()
            residuals["averaged"] = _model_outputs(am_dir, cfg, am_tensors, kernel)

        write_matrix_csv(out_dir / "dk_grid.csv", grid, kernel.dk_matrix,
                         "Omega_s\\Omega_i")

        times = characteristic_times(disp)
        extras = {}
        if isinstance(disp, SellmeierDispersion):
            extras["equivalent_poling_period_um"] = disp.equivalent_poling_period_um
            extras["taylor_reduction"] = asdict(sellmeier_to_taylor(disp))

        inventory = {}
        for p in sorted(out_dir.rglob("*")):
            if p.is_file() and p.name != "manifest.json":
                inventory[str(p.relative_to(out_dir))] = _sha256(p)

        _write_json_atomic(out_dir / "manifest.json", {
            "config": cfg.resolved_dict(),
            "code_version": __version__,
            "gamma": gamma,
            "achieved_n": achieved_n,
            "pump_amplitude_fwhm": pump.amplitude_fwhm if not pump.cw else None,
            "characteristic_times": asdict(times),
            "residuals": residuals,
            "wall_clock_s": time.time() - t0,
            "files": inventory,
            **extras,
        })
    except Exception:
        shutil.rmtree(out_dir, ignore_errors=True)
        raise
    return out_dir


def sweep_gain(cfg: RunConfig, target_ns: list[float],
               out_dir: str | Path | None = None) -> Path:
    """One simulate per target photon number, plus a summary table."""
    if sorted(target_ns) != list(target_ns):
        raise ConfigurationError("gain sweep targets must be ascending")
    out_dir = Path(out_dir) if out_dir is not None else (
        default_out_root() / f"sweep-gain-{config_hash(cfg)}"
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for target in target_ns:
        point_cfg = _with_gain(cfg, target)
        point_dir = out_dir / f"n{target:.3g}"
        try:
            simulate(point_cfg, point_dir, overwrite=True)
            manifest = json.loads((point_dir / "manifest.json").read_text())
            key = "rigorous" if cfg.model in ("rigorous", "both") else "averaged"
            m = manifest["residuals"][key]["metrics"]
            rows.append([target, manifest["gamma"], manifest["achieved_n"],
                         m["fwhm_s"], m["fwhm_i"], m["rsd"], m["overlap"], ""])
        except PdcsimError as exc:
            rows.append([target, "", "", "", "", "", "",
                         f"{type(exc).__name__}: {exc}"])
    with open(out_dir / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["target_n", "gamma", "achieved_n", "fwhm_s", "fwhm_i",
                         "rsd", "overlap", "error"])
        writer.writerows(rows)
    return out_dir


def sweep_pump_duration(cfg: RunConfig, taus: list[float], target_ns: list[float],
                        out_dir: str | Path | None = None) -> Path:
    """RSD(tau, N) table across pump durations and gain targets."""
    out_dir = Path(out_dir) if out_dir is not None else (
        default_out_root() / f"sweep-pump-{config_hash(cfg)}"
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for tau in taus:
        tau_cfg = _with_pump_duration(cfg, tau)
        for target in target_ns:
            point_cfg = _with_gain(tau_cfg, target)
            point_dir = out_dir / f"tau{tau:g}-n{target:.3g}"
            try:
                simulate(point_cfg, point_dir, overwrite=True)
                manifest = json.loads((point_dir / "manifest.json").read_text())
                key = "rigorous" if cfg.model in ("rigorous", "both") else "averaged"
                m = manifest["residuals"][key]["metrics"]
                rows.append([tau, target, manifest["gamma"], m["rsd"],
                             m["overlap"], ""])
            except PdcsimError as exc:
                rows.append([tau, target, "", "", "",
                             f"{type(exc).__name__}: {exc}"])
    with open(out_dir / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tau_fs", "target_n", "gamma", "rsd", "overlap", "error"])
        writer.writerows(rows)
    return out_dir


def _with_gain(cfg: RunConfig, target_n: float) -> RunConfig:
    import dataclasses
    return dataclasses.replace(cfg, gamma=None, target_n=target_n)


def _with_pump_duration(cfg: RunConfig, tau_fs: float) -> RunConfig:
    import dataclasses
    return dataclasses.replace(cfg, pump_duration_fs=tau_fs)


def run_sample_study(plan: SamplePlan, out_dir: str | Path,
                     progress=None) -> Path:
    """Execute an ensemble study and write samples.csv / landscape.csv."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = run_study(plan, progress=progress)
    ladder = list(plan.gain_ladder)
    with open(out_dir / "samples.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["index", "alpha_s", "alpha_i", "beta_p", "beta_s", "beta_i",
             "tau1", "tau2", "kappa", "accepted", "reason"]
            + [f"rsd_n{n:.3g}" for n in ladder]
            + [f"gamma_n{n:.3g}" for n in ladder]
        )
        for r in records:
            d = r.dispersion
            row = [r.index, d.alpha_s, d.alpha_i, d.beta_p, d.beta_s, d.beta_i,
                   r.tau1, r.tau2, r.kappa, int(r.screening.accepted),
                   r.screening.reason or ""]
            for n in ladder:
                row.append(r.gain_metrics[n].rsd if n in r.gain_metrics
                           else r.failures.get(n, ""))
            for n in ladder:
                row.append(r.gain_values.get(n, ""))
            writer.writerow(row)
    landscape_n = 10.0 if 10.0 in ladder else ladder[-1]
    table = landscape_table(records, landscape_n, plan.pump_duration_fs)
    with open(out_dir / "landscape.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tau1_over_tau", "tau2_over_tau", "rsd"])
        writer.writerows(table.tolist())
    _write_json_atomic(out_dir / "manifest.json", {
        "plan": {k: (list(v) if isinstance(v, tuple) else v)
                 for k, v in asdict(plan).items() if k != "solver"},
        "code_version": __version__,
        "accepted": len(records),
    })
    return out_dir


def render_handoff(run_dirs: list[str | Path], out_path: str | Path) -> Path:
    """Emit a render-manifest listing every plottable file under the runs."""
    entries = []
    for run in run_dirs:
        run = Path(run)
        if not run.exists():
            raise ConfigurationError(f"run directory not found: {run}")
        manifest_path = run / "manifest.json"
        pump_fwhm = None
        if manifest_path.exists():
            manifest = json.loads(manifest_path.read_text())
            pump_fwhm = manifest.get("pump_amplitude_fwhm")
        for jsi_path in sorted(run.rglob("jsi.csv")):
            dk = run / "dk_grid.csv"
            entries.append({
                "kind": "jsi",
                "data": str(jsi_path),
                "dk_grid": str(dk) if dk.exists() else None,
                "pump_fwhm": pump_fwhm,
                "title": f"{run.name}/{jsi_path.parent.name}"
                         if jsi_path.parent != run else run.name,
                "xlabel": "signal detuning [rad/fs]",
                "ylabel": "idler detuning [rad/fs]",
            })
        for sp in sorted(run.rglob("spectra.csv")):
            entries.append({
                "kind": "spectra",
                "data": str(sp),
                "title": f"{run.name}/{sp.parent.name}"
                         if sp.parent != run else run.name,
                "xlabel": "detuning [rad/fs]",
                "ylabel": "photon number density",
            })
        summary = run / "summary.csv"
        if summary.exists():
            header = summary.read_text().splitlines()[0]
            if header.startswith("target_n"):
                entries.append({"kind": "fwhm_curve", "data": str(summary),
                                "title": run.name})
                entries.append({"kind": "rsd_curve", "data": str(summary),
                                "title": run.name})
            elif header.startswith("tau_fs"):
                entries.append({"kind": "rsd_curve", "data": str(summary),
                                "title": run.name})
        landscape = run / "landscape.csv"
        if landscape.exists():
            entries.append({"kind": "landscape", "data": str(landscape),
                            "title": run.name})
    out_path = Path(out_path)
    _write_json_atomic(out_path, {"entries": entries})
    return out_path
