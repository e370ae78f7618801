"""
periomax
========

Detect periodic components in stationary time series through the maximum of
the normalized periodogram, calibrated by the Gumbel law, plus simulation
tools for checking that calibration on linear and nonlinear processes.
"""

from .errors import (
    DegenerateDataError,
    InsufficientProfileError,
    InvalidArgumentError,
    InvalidDataError,
    InvalidLengthError,
    PeriomaxError,
    ShapeError,
)
from .montecarlo import (
    EmpiricalSample,
    GumbelLaw,
    exact_max_exp_cdf,
    gumbel_cdf,
    gumbel_quantile,
    gumbel_sf,
    ks_distance,
    mc_pvalue,
    replicate,
)
from .peaks import (
    NormalizedOrdinates,
    TestReport,
    chiu_R,
    detect_peaks,
    fisher_g,
    max_test,
    normalize,
    order_stat_U,
)
from .rng import SeedSpec, make_rng
from .series import FourierGrid, Periodogram, TimeSeries, fourier_grid, parseval_check, periodogram
from .spectral import (
    LagWindowKernel,
    SpectralEstimate,
    autocovariance,
    exact_S_moments,
    lag_window_estimate,
    linear_spectral_density,
)

__version__ = "0.1.0"
