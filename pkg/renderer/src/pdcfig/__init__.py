"""Publication-style figure renderer for pdcsim data files.

Consumes a render-manifest (JSON) plus the CSV files it points at and writes
one PNG per entry. No physics is computed here; all overlays (wavevector
mismatch grids, pump FWHM) arrive as data.
"""

__version__ = "0.1.0"

from .manifest import KINDS, load_manifest
from .render import RenderError, render, render_entry
