"""Frequency-domain estimation of linear filters between functional series.

Conventions (used consistently throughout):

* spectral density ``F_theta = (1/2pi) sum_h w(h/q) C_h exp(+i h theta)``
  with ``C_h`` estimating ``E Y_h (x) X_0``;
* frequency response ``A(theta) = sum_k A_k exp(+i k theta)``;
* coefficient recovery ``A_k = (1/T) sum_j A(theta_j) exp(-i k theta_j)``.

With these signs ``F^{YX}_theta = A(theta) F^X_theta`` holds exactly at the
population level, e.g. the shift ``Y_t = X_{t-1}`` has response
``exp(i theta) I``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .moments import LagCovSequence, as_sample, lagcov_sequence
from .operators import DEFAULT_FLOOR, _truncated_inverse, hermitian_eigendecompose
from .regression import DEFAULT_TAU, LinearFilter, select_K_from_eigenvalues

__all__ = [
    "ConjugateSymmetryError",
    "DegenerateFrequencyWarning",
    "FrequencyGrid",
    "SpectralDensity",
    "FrequencyResponse",
    "WINDOWS",
    "default_bandwidth",
    "default_frequencies",
    "lag_window",
    "spectral_from_lagcovs",
    "auto_spectral",
    "cross_spectral",
    "frequency_response",
    "filter_coefficients",
    "response_of_filter",
    "fit_lagged_spectral",
]

WINDOWS = ("bartlett", "rect")
IMAG_TOL = 1e-6


class ConjugateSymmetryError(ValueError):
    """Recovered filter coefficients have a non-negligible imaginary part."""


class DegenerateFrequencyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FrequencyGrid:
    """Fourier frequencies ``theta_j = 2 pi j / T``, ``j = 0..T-1``."""

    T: int

    def __post_init__(self):
        if self.T < 1:
            raise ValueError(f"need at least one frequency, got T={self.T}")

    @property
    def thetas(self) -> NDArray:
        return 2 * np.pi * np.arange(self.T) / self.T


@dataclass(frozen=True)
class SpectralDensity:
    """Operator values ``values[j]`` at frequency ``grid.thetas[j]``."""

    grid: FrequencyGrid
    values: NDArray

    def __getitem__(self, j: int) -> NDArray:
        return self.values[j]


@dataclass(frozen=True)
class FrequencyResponse:
    grid: FrequencyGrid
    values: NDArray
    K_used: NDArray
    flagged: list[int] = field(default_factory=list)

    def __getitem__(self, j: int) -> NDArray:
        return self.values[j]


def _as_grid(grid: FrequencyGrid | int) -> FrequencyGrid:
    return grid if isinstance(grid, FrequencyGrid) else FrequencyGrid(int(grid))


def default_bandwidth(N: int) -> int:
    """Lag-window bandwidth ``ceil(N^(1/3))``."""
    return max(1, math.ceil(round(N ** (1 / 3), 12)))


def default_frequencies(q: int, support: tuple[int, int] = (0, 0)) -> int:
    return 2 * (q + max(abs(support[0]), abs(support[1]))) + 1


def lag_window(h: ArrayLike, q: int, window: str = "bartlett") -> NDArray:
    h = np.abs(np.asarray(h, dtype=float))
    if window == "rect":
        return np.where(h <= q, 1.0, 0.0)
    if window == "bartlett":
        if q == 0:
            return np.where(h == 0, 1.0, 0.0)
        return np.clip(1.0 - h / q, 0.0, None)
    raise ValueError(f"unknown window {window!r}, expected one of {WINDOWS}")


def spectral_from_lagcovs(
    C: LagCovSequence, grid: FrequencyGrid | int, window: str = "bartlett"
) -> SpectralDensity:
    """Lag-window estimate ``(1/2pi) sum_{|h|<=q} w(h/q) C_h exp(i h theta)``."""
    if not C.ops:
        raise ValueError("empty lag-covariance sequence")
    grid = _as_grid(grid)
    lags = np.array(C.lags)
    w = lag_window(lags, C.q, window)
    ops = np.stack([C.ops[h] for h in lags]) * w[:, None, None] / (2 * np.pi)
    phase = np.exp(1j * np.outer(grid.thetas, lags))
    return SpectralDensity(grid, np.einsum("jh,hab->jab", phase, ops))


def _spectral(Y, X, q, grid, window, centered) -> SpectralDensity:
    Y = as_sample(Y, "Y")
    if q is None:
        q = default_bandwidth(Y.shape[0])
    if grid is None:
        grid = 2 * q + 1
    return spectral_from_lagcovs(lagcov_sequence(Y, X, q, centered), grid, window)


def auto_spectral(
    X: ArrayLike,
    q: int | None = None,
    grid: FrequencyGrid | int | None = None,
    window: str = "bartlett",
    centered: bool = True,
) -> SpectralDensity:
    """Spectral density operator estimate of a single series."""
    return _spectral(X, None, q, grid, window, centered)


def cross_spectral(
    Y: ArrayLike,
    X: ArrayLike,
    q: int | None = None,
    grid: FrequencyGrid | int | None = None,
    window: str = "bartlett",
    centered: bool = True,
) -> SpectralDensity:
    """Cross-spectral operator estimate from cross-covariances at lags -q..q.

    ``q`` defaults to ``ceil(N^(1/3))`` and the grid to ``2q + 1`` frequencies.
    """
    X = as_sample(X, "X")
    return _spectral(Y, X, q, grid, window, centered)


def frequency_response(
    FYX: SpectralDensity,
    FX: SpectralDensity,
    K: int | None = None,
    tau: float = DEFAULT_TAU,
    floor: float = DEFAULT_FLOOR,
) -> FrequencyResponse:
    """Per-frequency ``F^{YX}_theta`` times the truncated inverse of ``F^X_theta``.

    Frequencies where the auto-spectrum is numerically zero get a zero
    response and are listed in ``flagged`` (a warning is emitted).
    """
    if FYX.grid != FX.grid:
        raise ValueError("cross- and auto-spectra are on different frequency grids")
    T = FX.grid.T
    out = np.zeros(FYX.values.shape, dtype=complex)
    K_used = np.zeros(T, dtype=int)
    flagged = []
    systems = [hermitian_eigendecompose(FX[j]) for j in range(T)]
    top = max(es.eigenvalues[0] for es in systems)
    for j, es in enumerate(systems):
        if not top > 0 or not es.eigenvalues[0] > 1e-14 * top:
            flagged.append(j)
            continue
        Kj = select_K_from_eigenvalues(es.eigenvalues, tau) if K is None else K
        inv, K_used[j] = _truncated_inverse(es, Kj, floor)
        out[j] = FYX[j] @ inv
    if flagged:
        warnings.warn(
            f"degenerate spectrum at frequency indices {flagged}; response set to zero",
            DegenerateFrequencyWarning,
            stacklevel=2,
        )
    return FrequencyResponse(FX.grid, out, K_used, flagged)


def filter_coefficients(
    R: FrequencyResponse | SpectralDensity, support: tuple[int, int]
) -> LinearFilter:
    """Inverse DFT ``A_k = (1/T) sum_j R(theta_j) exp(-i k theta_j)`` on ``support``.

    Raises
    ------
    ConjugateSymmetryError
        If the coefficients are not real to within 1e-6 (relative to their
        magnitude when that exceeds one).
    """
    kmin, kmax = support
    T = R.grid.T
    if T < kmax - kmin + 1:
        raise ValueError(f"{T} frequencies cannot resolve support {support}")
    lags = np.arange(kmin, kmax + 1)
    phase = np.exp(-1j * np.outer(lags, R.grid.thetas))
    coeffs = np.einsum("kj,jab->kab", phase, R.values) / T
    scale = max(1.0, float(np.max(np.abs(coeffs.real), initial=0.0)))
    resid = float(np.max(np.abs(coeffs.imag), initial=0.0))
    if resid > IMAG_TOL * scale:
        raise ConjugateSymmetryError(f"imaginary residue {resid:.3g} in filter coefficients")
    return LinearFilter({int(k): c.real.copy() for k, c in zip(lags, coeffs)}, (kmin, kmax))


def response_of_filter(
    F: LinearFilter, grid: FrequencyGrid | int, shape: tuple[int, int] | None = None
) -> FrequencyResponse:
    """Exact frequency response ``sum_k A_k exp(i k theta)`` on the grid."""
    grid = _as_grid(grid)
    shape = F.shape or shape
    if shape is None:
        raise ValueError("cannot infer operator shape of an empty filter")
    values = np.zeros((grid.T, *shape), dtype=complex)
    for k, Ak in F.ops.items():
        values += np.exp(1j * k * grid.thetas)[:, None, None] * Ak
    return FrequencyResponse(grid, values, np.full(grid.T, shape[1]))


def fit_lagged_spectral(
    X: ArrayLike,
    Y: ArrayLike,
    support: tuple[int, int] = (0, 0),
    q: int | None = None,
    T: int | None = None,
    K: int | None = None,
    tau: float = DEFAULT_TAU,
    floor: float = DEFAULT_FLOOR,
    window: str = "bartlett",
) -> LinearFilter:
    """Estimate ``{A_k}`` on ``support`` via spectral density operators.

    Defaults: ``q = ceil(N^(1/3))`` and ``T = 2 (q + max|k|) + 1``. ``K=None``
    picks the truncation per frequency by the cumulative variance rule.
    """
    X = as_sample(X, "X")
    Y = as_sample(Y, "Y")
    if X.shape[0] != Y.shape[0]:
        raise ValueError(f"samples have different lengths ({X.shape[0]} vs {Y.shape[0]})")
    if q is None:
        q = default_bandwidth(X.shape[0])
    grid = FrequencyGrid(default_frequencies(q, support) if T is None else T)
    FX = auto_spectral(X, q, grid, window)
    FYX = cross_spectral(Y, X, q, grid, window)
    R = frequency_response(FYX, FX, K, tau, floor)
    filt = filter_coefficients(R, support)
    filt.mean_x = X.mean(axis=0)
    filt.mean_y = Y.mean(axis=0)
    filt.info = {
        "bandwidth": q,
        "frequencies": grid.T,
        "window": window,
        "K_used": R.K_used.tolist(),
        "flagged": list(R.flagged),
    }
    return filt
