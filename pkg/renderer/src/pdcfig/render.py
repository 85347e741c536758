"""Rendering of manifest entries to PNG files."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .manifest import load_manifest, validate_entry

#: fixed output resolution; part of the deterministic-output contract
DPI = 150

_SAVE_KWARGS = dict(dpi=DPI, metadata={"Software": "pdcfig"})


@dataclass
class RenderError:
    index: int
    entry: dict
    message: str


def read_spectra(path: str | Path):
    """spectra.csv: omega, Omega, n_s, n_i columns."""
    rows = np.genfromtxt(path, delimiter=",", names=True)
    return rows["Omega"], rows["n_s"], rows["n_i"]


def read_matrix(path: str | Path):
    """Matrix CSV with detuning row/column headers (jsi.csv, dk_grid.csv)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        col_det = np.array([float(x) for x in header[1:]])
        row_det, values = [], []
        for row in reader:
            row_det.append(float(row[0]))
            values.append([float(x) for x in row[1:]])
    return np.array(row_det), col_det, np.array(values)


def read_summary(path: str | Path) -> dict[str, list]:
    """summary.csv from the gain/pump sweeps; error rows are skipped."""
    out: dict[str, list] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row.get("error"):
                continue
            for key, value in row.items():
                if key == "error":
                    continue
                out.setdefault(key, []).append(float(value))
    return out


def _finish(fig, out_path: Path):
    fig.savefig(out_path, **_SAVE_KWARGS)
    plt.close(fig)


def _render_jsi(entry: dict, out_path: Path):
    row_det, col_det, values = read_matrix(entry["data"])
    peak = np.abs(values).max()
    if peak > 0:
        values = values / peak
    fig, ax = plt.subplots(figsize=(4.6, 4.0))
    mesh = ax.pcolormesh(col_det, row_det, values, cmap="viridis",
                         vmin=0.0, vmax=1.0, shading="nearest")
    fig.colorbar(mesh, ax=ax, label="Normalized JSI")

    dk_path = entry.get("dk_grid")
    if dk_path and Path(dk_path).is_file():
        dk_rows, dk_cols, dk = read_matrix(dk_path)
        ax.contour(dk_cols, dk_rows, dk, levels=[0.0], colors="black",
                   linewidths=1.0)
    pump_fwhm = entry.get("pump_fwhm")
    if pump_fwhm:
        half = pump_fwhm / 2
        span = np.array([row_det[0], row_det[-1]])
        for sign in (-1.0, 1.0):
            ax.plot(span, sign * half - span, color="red", linewidth=1.0,
                    linestyle="--")
        ax.set_xlim(col_det[0], col_det[-1])
        ax.set_ylim(row_det[0], row_det[-1])
    ax.set_xlabel(entry.get("ylabel", "idler detuning [rad/fs]"))
    ax.set_ylabel(entry.get("xlabel", "signal detuning [rad/fs]"))
    ax.set_title(entry.get("title", ""))
    _finish(fig, out_path)


def _render_spectra(entry: dict, out_path: Path):
    det, n_s, n_i = read_spectra(entry["data"])
    fig, ax = plt.subplots(figsize=(4.6, 3.2))
    ax.plot(det, n_s, linestyle="--", label="signal")
    ax.plot(det, n_i, linestyle="-", label="idler")
    ax.set_xlabel(entry.get("xlabel", "detuning [rad/fs]"))
    ax.set_ylabel(entry.get("ylabel", "photon number density"))
    ax.set_title(entry.get("title", ""))
    ax.legend()
    _finish(fig, out_path)


def _render_curve(entry: dict, out_path: Path, columns: tuple[str, ...],
                  ylabel: str):
    table = read_summary(entry["data"])
    fig, ax = plt.subplots(figsize=(4.6, 3.2))
    if "tau_fs" in table:
        taus = sorted(set(table["tau_fs"]))
        for tau in taus:
            sel = [i for i, t in enumerate(table["tau_fs"]) if t == tau]
            for col in columns:
                ax.plot([table["target_n"][i] for i in sel],
                        [table[col][i] for i in sel],
                        marker="o", label=f"{col}, tau={tau:g} fs")
    else:
        for col in columns:
            ax.plot(table["target_n"], table[col], marker="o", label=col)
    ax.set_xscale("log")
    ax.set_xlabel("total photon number N")
    ax.set_ylabel(ylabel)
    ax.set_title(entry.get("title", ""))
    ax.legend()
    _finish(fig, out_path)


def _render_landscape(entry: dict, out_path: Path):
    rows = np.genfromtxt(entry["data"], delimiter=",", names=True)
    rows = np.atleast_1d(rows)
    fig, ax = plt.subplots(figsize=(4.6, 3.6))
    scatter = ax.scatter(rows["tau1_over_tau"], rows["tau2_over_tau"],
                         c=rows["rsd"], cmap="plasma", marker="*", s=60)
    fig.colorbar(scatter, ax=ax, label="RSD")
    ax.set_xlabel(r"$\tau_1/\tau$")
    ax.set_ylabel(r"$\tau_2/\tau$")
    ax.set_title(entry.get("title", ""))
    _finish(fig, out_path)


_RENDERERS = {
    "jsi": _render_jsi,
    "spectra": _render_spectra,
    "fwhm_curve": lambda e, p: _render_curve(e, p, ("fwhm_s", "fwhm_i"),
                                             "FWHM [rad/fs]"),
    "rsd_curve": lambda e, p: _render_curve(e, p, ("rsd",), "RSD"),
    "landscape": _render_landscape,
}


def render_entry(entry: dict, out_dir: Path, index: int) -> Path:
    """Render one manifest entry; returns the written image path."""
    validate_entry(entry)
    out_path = out_dir / f"{index:03d}-{entry['kind']}.png"
    _RENDERERS[entry["kind"]](entry, out_path)
    return out_path


def render(manifest_path: str | Path, out_dir: str | Path):
    """Render every entry of a manifest.

    Returns (written image paths, per-entry errors); a failing entry never
    blocks the remaining ones.
    """
    entries = load_manifest(manifest_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    errors: list[RenderError] = []
    for index, entry in enumerate(entries):
        try:
            written.append(render_entry(entry, out_dir, index))
        except Exception as exc:
            errors.append(RenderError(index, entry, str(exc)))
    return written, errors
