"""Empirical moments of functional time series in coefficient form.

A sample is an (N, d) array whose row t holds the basis coefficients of X_t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .operators import hs_norm

__all__ = [
    "InsufficientDataError",
    "LagCovSequence",
    "as_sample",
    "mean",
    "autocov",
    "crosscov",
    "lagcov_sequence",
    "decay_diagnostic",
]


class InsufficientDataError(ValueError):
    """Too few observations for the requested lag."""


def as_sample(X: ArrayLike, name: str = "sample") -> NDArray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"{name} must be an (N, d) array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} has non-finite coefficients")
    return X


def mean(X: ArrayLike) -> NDArray:
    X = as_sample(X)
    if X.shape[0] == 0:
        raise InsufficientDataError("mean of an empty sample")
    return X.mean(axis=0)


def _check_lag(N: int, h: int) -> None:
    # h = 0 is always allowed so a single centered curve gives the zero operator
    if h != 0 and abs(h) >= N - 1:
        raise InsufficientDataError(f"lag {h} needs more than {N} observations")


def crosscov(Y: ArrayLike, X: ArrayLike, h: int = 0, centered: bool = True) -> NDArray:
    """Lag-h cross-covariance ``(1/N) sum_t (Y_{t+h} - mean Y) (x) (X_t - mean X)``.

    Estimates ``E Y_h (x) X_0``. The divisor is N for every lag.
    """
    Y = as_sample(Y, "Y")
    X = as_sample(X, "X")
    if Y.shape[0] != X.shape[0]:
        raise ValueError(f"samples have different lengths ({Y.shape[0]} vs {X.shape[0]})")
    N = X.shape[0]
    if N == 0:
        raise InsufficientDataError("empty sample")
    _check_lag(N, h)
    if centered:
        Y = Y - Y.mean(axis=0)
        X = X - X.mean(axis=0)
    if h >= 0:
        return Y[h:].T @ X[: N - h] / N
    return Y[: N + h].T @ X[-h:] / N


def autocov(X: ArrayLike, h: int = 0, centered: bool = True) -> NDArray:
    """Lag-h autocovariance operator; ``autocov(X, -h) == autocov(X, h).T``."""
    if h < 0:
        return autocov(X, -h, centered).T
    return crosscov(X, X, h, centered)


@dataclass(frozen=True)
class LagCovSequence:
    """Covariance operators ``ops[h]`` for lags ``-q..q``."""

    ops: dict[int, NDArray]

    @property
    def q(self) -> int:
        return max(abs(h) for h in self.ops)

    @property
    def lags(self) -> list[int]:
        return sorted(self.ops)

    @property
    def d(self) -> int:
        return next(iter(self.ops.values())).shape[0]


def lagcov_sequence(
    Y: ArrayLike, X: ArrayLike | None = None, q: int = 0, centered: bool = True
) -> LagCovSequence:
    """Cross-covariances of Y with X (auto-covariances if X is None) at lags -q..q."""
    if X is None:
        ops = {}
        for h in range(q + 1):
            ops[h] = autocov(Y, h, centered)
            ops[-h] = ops[h].T
        return LagCovSequence(ops)
    return LagCovSequence({h: crosscov(Y, X, h, centered) for h in range(-q, q + 1)})


def decay_diagnostic(X: ArrayLike, q: int, centered: bool = True) -> NDArray:
    """HS norms of the autocovariance operators at lags 0..q."""
    return np.array([hs_norm(autocov(X, h, centered)) for h in range(q + 1)])
