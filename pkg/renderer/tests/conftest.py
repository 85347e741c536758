import csv
import json

import numpy as np
import pytest


def write_matrix_csv(path, det, matrix, corner="Omega_s\\Omega_i"):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([corner] + [f"{o:.12g}" for o in det])
        for om, row in zip(det, matrix):
            writer.writerow([f"{om:.12g}"] + [f"{v:.12g}" for v in row])


@pytest.fixture
def fake_run(tmp_path):
    """A miniature run directory with every plottable file kind."""
    run = tmp_path / "run"
    run.mkdir()
    det = np.linspace(-0.1, 0.1, 21)

    with open(run / "spectra.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega", "Omega", "n_s", "n_i"])
        for om in det:
            writer.writerow([1.2 + om, om, np.exp(-(om / 0.03) ** 2),
                             np.exp(-((om - 0.01) / 0.03) ** 2)])

    jsi = np.exp(-((det[:, None] + det[None, :]) / 0.04) ** 2)
    write_matrix_csv(run / "jsi.csv", det, jsi)
    dk = 30 * det[:, None] + 20 * det[None, :]
    write_matrix_csv(run / "dk_grid.csv", det, dk)

    with open(run / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["target_n", "gamma", "achieved_n", "fwhm_s",
                         "fwhm_i", "rsd", "overlap", "error"])
        for n, w in ((1e-5, 0.05), (1.0, 0.055), (1e5, 0.07)):
            writer.writerow([n, n / 10, n, w, w * 1.1, 0.01 * w, 0.99, ""])
        writer.writerow([1e6, "", "", "", "", "", "", "DivergedError: boom"])

    with open(run / "landscape.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tau1_over_tau", "tau2_over_tau", "rsd"])
        for row in ((0.1, 0.002, 0.05), (1.5, 0.004, 0.6), (2.0, 0.001, 0.3)):
            writer.writerow(row)
    return run


@pytest.fixture
def fake_manifest(tmp_path, fake_run):
    entries = [
        {"kind": "jsi", "data": str(fake_run / "jsi.csv"),
         "dk_grid": str(fake_run / "dk_grid.csv"), "pump_fwhm": 0.03,
         "title": "demo"},
        {"kind": "spectra", "data": str(fake_run / "spectra.csv"),
         "title": "demo"},
        {"kind": "fwhm_curve", "data": str(fake_run / "summary.csv"),
         "title": "demo"},
        {"kind": "rsd_curve", "data": str(fake_run / "summary.csv"),
         "title": "demo"},
        {"kind": "landscape", "data": str(fake_run / "landscape.csv"),
         "title": "demo"},
    ]
    path = tmp_path / "render.json"
    path.write_text(json.dumps({"entries": entries}))
    return path
