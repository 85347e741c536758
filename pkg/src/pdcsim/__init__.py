"""Simulation engine for pulsed single-pass type-II parametric down-conversion
in dispersive waveguides: rigorous spatially-ordered Bogoliubov evolution,
the spatially-averaged approximate model, spectral observables, and ensemble
studies of gain-induced spectral non-degeneracy."""

__version__ = "0.1.0"

from .averaged import (
    SchmidtModes,
    averaged_bogoliubov,
    averaged_calibrate,
    averaged_propagate_ode,
    averaged_tensors,
    schmidt_decompose,
)
from .coupling import CouplingKernel, coupling_at, tpa
from .dispersion import (
    CharacteristicTimes,
    SellmeierCoefficients,
    SellmeierDispersion,
    TaylorDispersion,
    characteristic_times,
    curvature,
    delta_k,
    ppktp_dispersion,
    sellmeier_to_taylor,
)
from .grid import (
    FrequencyGrid,
    PumpParams,
    build_grid,
    pump_amplitude,
    pump_matrix,
)
from .observables import (
    MetricsRecord,
    SpectralResult,
    fwhm,
    jsi,
    metrics,
    overlap,
    rsd,
    spectra,
    trim,
)
from .rigorous import (
    BogoliubovTensors,
    CalibrationResult,
    SolverSettings,
    calibrate_gain,
    propagate,
)
from .sampling import (
    SamplePlan,
    SampleRecord,
    draw_candidate,
    landscape_table,
    run_study,
    screen_low_gain,
)
