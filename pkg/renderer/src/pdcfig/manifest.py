"""Render-manifest loading and per-entry validation."""

from __future__ import annotations

import json
from pathlib import Path

KINDS = ("jsi", "spectra", "rsd_curve", "fwhm_curve", "landscape")


class ManifestError(ValueError):
    """The manifest file itself is unusable."""


def load_manifest(path: str | Path) -> list[dict]:
    """Read a render-manifest and return its entry list.

    Raises ManifestError if the file is missing, not JSON, or not of the
    expected {"entries": [...]} shape. Per-entry problems (unknown kind,
    missing data file) are deferred to render time so one bad entry cannot
    block the others.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ManifestError(f"manifest not found: {path}")
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}")
    if not isinstance(data, dict) or not isinstance(data.get("entries"), list):
        raise ManifestError('manifest must be an object with an "entries" list')
    return data["entries"]


def validate_entry(entry: dict) -> None:
    """Raise ValueError if an entry cannot be rendered."""
    if not isinstance(entry, dict):
        raise ValueError("entry is not an object")
    kind = entry.get("kind")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r} (expected one of {KINDS})")
    data = entry.get("data")
    if not data:
        raise ValueError("entry has no data file")
    if not Path(data).is_file():
        raise ValueError(f"data file not found: {data}")
