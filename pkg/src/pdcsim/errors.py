"""Exception hierarchy shared by all simulation modules."""


class PdcsimError(Exception):
    """Base class for all pdcsim errors."""


class ConfigurationError(PdcsimError):
    """Invalid grid, pump, dispersion or run-configuration parameters."""


class DegenerateDispersionError(PdcsimError):
    """Dispersion parameters for which a requested quantity is undefined
    (e.g. curvature with alpha_s = alpha_i = 0)."""


class DivergedError(PdcsimError):
    """Integration produced non-finite or absurdly large values.

    Attributes
    ----------
    z : float
        Position [mm] reached before divergence was detected.
    """

    def __init__(self, message, z):
        super().__init__(message)
        self.z = z


class CalibrationError(PdcsimError):
    """Gain calibration failed to bracket or converge on the target photon number."""


class EmptySpectrumError(PdcsimError):
    """A spectral metric was requested for an all-zero spectrum."""


class DegenerateSpectrumError(PdcsimError):
    """Spectrum too narrow for the requested statistic (e.g. zero standard deviation)."""


class WidthExceedsGridError(PdcsimError):
    """Half-maximum crossings of a spectrum are not bracketed inside the grid."""
