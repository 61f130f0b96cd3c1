"""Functional time series analysis in a finite orthonormal basis."""

from .basis import FourierBasis, Grid, make_fourier_basis, make_grid, project, reconstruct
from .moments import autocov, crosscov, decay_diagnostic, mean
from .operators import eigendecompose, hs_norm, outer, truncated_inverse
from .regression import (
    LinearFilter,
    RegressionFit,
    fit_lagged_timedomain,
    fit_linear,
    predict,
    select_K,
    stack,
)
from .simulate import NoiseSpec, ProcessSpec, gaussian_white_noise, simulate, simulate_far1, simulate_filtered
from .spectral import (
    FrequencyGrid,
    auto_spectral,
    cross_spectral,
    filter_coefficients,
    fit_lagged_spectral,
    frequency_response,
    response_of_filter,
    spectral_from_lagcovs,
)

__version__ = "0.1.0"
