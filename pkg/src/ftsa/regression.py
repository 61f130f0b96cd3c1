"""Time-domain estimators for functional linear and lagged regression.

The regression operator is estimated as ``C^{YX}_0`` composed with the
truncated inverse of ``C^X_0``. Lagged models ``Y_t = sum_k A_k X_{t-k}``
are handled by stacking ``(X_t, ..., X_{t-m})`` into one long curve and
fitting a single operator on the product space.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .moments import InsufficientDataError, as_sample, autocov, crosscov
from .operators import DEFAULT_FLOOR, _truncated_inverse, eigendecompose, hs_norm

__all__ = [
    "DEFAULT_TAU",
    "MAX_STACKED_DIM",
    "RegressionFit",
    "StackedSample",
    "LinearFilter",
    "select_K",
    "select_K_from_eigenvalues",
    "fit_linear",
    "stack",
    "fit_lagged_timedomain",
    "predict",
    "filter_distance",
]

DEFAULT_TAU = 0.85
MAX_STACKED_DIM = 256


@dataclass(frozen=True)
class RegressionFit:
    A_hat: NDArray
    K_used: int
    residual_variance: float
    mean_x: NDArray
    mean_y: NDArray

    def as_filter(self) -> LinearFilter:
        return LinearFilter(
            {0: self.A_hat},
            mean_x=self.mean_x,
            mean_y=self.mean_y,
            info={"K_used": self.K_used, "residual_variance": self.residual_variance},
        )


@dataclass(frozen=True)
class StackedSample:
    """Rows are ``Z_t = (X_t, X_{t-1}, ..., X_{t-m})`` for ``t = m..N-1``."""

    curves: NDArray
    m: int
    d: int

    def block(self, j: int) -> NDArray:
        """Lag-j block of every stacked curve, i.e. ``X_{t-j}``."""
        return self.curves[:, j * self.d : (j + 1) * self.d]


@dataclass
class LinearFilter:
    """Finite sequence of operators ``{A_k}`` acting as ``sum_k A_k X_{t-k}``.

    ``support`` defaults to the smallest interval containing the keys of
    ``ops``; lags inside the support but absent from ``ops`` are zero.
    ``mean_x``/``mean_y`` carry the centering used when the filter was fitted
    (zero when None).
    """

    ops: dict[int, NDArray]
    support: tuple[int, int] | None = None
    mean_x: NDArray | None = None
    mean_y: NDArray | None = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.ops = {int(k): np.asarray(v) for k, v in self.ops.items()}
        if self.support is None:
            if not self.ops:
                raise ValueError("empty filter needs an explicit support")
            self.support = (min(self.ops), max(self.ops))
        kmin, kmax = self.support = (int(self.support[0]), int(self.support[1]))
        if kmin > kmax:
            raise ValueError(f"invalid support {self.support}")
        if any(not kmin <= k <= kmax for k in self.ops):
            raise ValueError(f"operator lags {sorted(self.ops)} outside support {self.support}")
        shapes = {v.shape for v in self.ops.values()}
        if len(shapes) > 1:
            raise ValueError(f"operators have mixed shapes {shapes}")
        for v in self.ops.values():
            if not np.all(np.isfinite(v)):
                raise ValueError("filter has non-finite operator entries")

    @property
    def lags(self) -> range:
        return range(self.support[0], self.support[1] + 1)

    @property
    def shape(self) -> tuple[int, int] | None:
        if self.ops:
            return next(iter(self.ops.values())).shape
        if self.mean_y is not None and self.mean_x is not None:
            return (len(self.mean_y), len(self.mean_x))
        return None

    def __getitem__(self, k: int) -> NDArray:
        if k in self.ops:
            return self.ops[k]
        shape = self.shape
        if shape is None:
            raise ValueError("dimension of an empty filter is unknown")
        return np.zeros(shape)

    def hs_norms(self) -> dict[int, float]:
        return {k: hs_norm(self[k]) for k in self.lags}

    def compose(self, other: LinearFilter) -> LinearFilter:
        """Filter equivalent to applying ``other`` first, then ``self``."""
        out: dict[int, NDArray] = {}
        for j, Aj in self.ops.items():
            for i, Bi in other.ops.items():
                out[j + i] = out.get(j + i, 0) + Aj @ Bi
        support = (self.support[0] + other.support[0], self.support[1] + other.support[1])
        return LinearFilter(out, support)


def select_K_from_eigenvalues(eigenvalues: ArrayLike, tau: float = DEFAULT_TAU) -> int:
    """Smallest K whose leading eigenvalues explain a fraction ``tau`` of the total."""
    if not 0 < tau < 1:
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    lam = np.clip(np.sort(np.asarray(eigenvalues, dtype=float))[::-1], 0.0, None)
    total = lam.sum()
    if not total > 0:
        raise ValueError("degenerate covariance: no positive eigenvalues")
    frac = np.cumsum(lam) / total
    return int(np.argmax(frac >= tau - 1e-12)) + 1


def select_K(X: ArrayLike, tau: float = DEFAULT_TAU) -> int:
    return select_K_from_eigenvalues(eigendecompose(autocov(X, 0)).eigenvalues, tau)


def fit_linear(
    X: ArrayLike,
    Y: ArrayLike,
    K: int | None = None,
    tau: float = DEFAULT_TAU,
    floor: float = DEFAULT_FLOOR,
) -> RegressionFit:
    """Estimate A in ``Y_t = A(X_t) + eps_t``.

    Parameters
    ----------
    X, Y : (N, d_x), (N, d_y) arrays
        Regressor and response coefficients.
    K : int, optional
        Number of eigendirections of the covariance of X to invert. When
        None, chosen by the cumulative variance rule with fraction ``tau``.
    floor : float
        Eigenvalues below ``floor * lambda_1`` are never inverted.
    """
    X = as_sample(X, "X")
    Y = as_sample(Y, "Y")
    if X.shape[0] != Y.shape[0]:
        raise ValueError(f"samples have different lengths ({X.shape[0]} vs {Y.shape[0]})")
    if X.shape[0] < 2:
        raise InsufficientDataError("regression needs at least 2 observations")
    CX = autocov(X, 0)
    CYX = crosscov(Y, X, 0)
    es = eigendecompose(CX)
    if K is None:
        K = select_K_from_eigenvalues(es.eigenvalues, tau)
    inv, K_used = _truncated_inverse(es, K, floor)
    A_hat = CYX @ inv
    mx, my = X.mean(axis=0), Y.mean(axis=0)
    resid = (Y - my) - (X - mx) @ A_hat.T
    return RegressionFit(A_hat, K_used, float(np.mean(np.sum(resid**2, axis=1))), mx, my)


def stack(X: ArrayLike, m: int) -> StackedSample:
    X = as_sample(X)
    N, d = X.shape
    if m < 0:
        raise ValueError(f"max lag must be nonnegative, got {m}")
    if m >= N - 1:
        raise InsufficientDataError(f"max lag {m} needs more than {N} observations")
    Z = np.hstack([X[m - j : N - j] for j in range(m + 1)])
    return StackedSample(Z, m, d)


def fit_lagged_timedomain(
    X: ArrayLike,
    Y: ArrayLike,
    m: int,
    K: int | None = None,
    tau: float = DEFAULT_TAU,
    floor: float = DEFAULT_FLOOR,
    max_dim: int = MAX_STACKED_DIM,
) -> LinearFilter:
    """Fit ``Y_t = sum_{k=0}^m A_k X_{t-k} + eps_t`` by regression on stacked lags.

    Only times ``t = m..N-1`` enter the fit. Raises if the stacked dimension
    ``(m + 1) d`` exceeds ``max_dim``; use the spectral estimator instead.
    """
    X = as_sample(X, "X")
    Y = as_sample(Y, "Y")
    if X.shape[0] != Y.shape[0]:
        raise ValueError(f"samples have different lengths ({X.shape[0]} vs {Y.shape[0]})")
    d = X.shape[1]
    if (m + 1) * d > max_dim:
        raise ValueError(
            f"stacked dimension {(m + 1) * d} exceeds cap {max_dim}; "
            "use the spectral estimator for long lags or large d"
        )
    Z = stack(X, m)
    fit = fit_linear(Z.curves, Y[m:], K, tau, floor)
    ops = {k: fit.A_hat[:, k * d : (k + 1) * d] for k in range(m + 1)}
    # stacked mean blocks all estimate E X; use the first block
    return LinearFilter(
        ops,
        (0, m),
        mean_x=fit.mean_x[:d],
        mean_y=fit.mean_y,
        info={"K_used": fit.K_used, "residual_variance": fit.residual_variance},
    )


def predict(fit: RegressionFit | LinearFilter, X: ArrayLike) -> tuple[NDArray, range]:
    """Predicted responses ``sum_k A_k (X_{t-k} - mean_x) + mean_y``.

    Returns the predictions and the range of time indices t they refer to
    (those with the full history the filter needs).
    """
    filt = fit.as_filter() if isinstance(fit, RegressionFit) else fit
    X = as_sample(X, "X")
    N, d = X.shape
    kmin, kmax = filt.support
    start, stop = max(kmax, 0), min(N, N + kmin)
    if stop <= start:
        raise InsufficientDataError(f"filter support {filt.support} needs more than {N} observations")
    shape = filt.shape or (d, d)
    mx = np.zeros(d) if filt.mean_x is None else filt.mean_x
    my = np.zeros(shape[0]) if filt.mean_y is None else filt.mean_y
    Xc = X - mx
    Yhat = np.tile(my, (stop - start, 1))
    for k, Ak in filt.ops.items():
        Yhat += Xc[start - k : stop - k] @ Ak.T
    return Yhat, range(start, stop)


def filter_distance(est: LinearFilter, truth: LinearFilter) -> tuple[dict[int, float], float]:
    """Per-lag and total HS distance over the union of the two supports."""
    if est.shape is not None and truth.shape is not None and est.shape != truth.shape:
        raise ValueError(f"filters have operators of shape {est.shape} and {truth.shape}")
    shape = est.shape or truth.shape
    lo = min(est.support[0], truth.support[0])
    hi = max(est.support[1], truth.support[1])
    per_lag = {}
    for k in range(lo, hi + 1):
        a = est.ops.get(k, np.zeros(shape))
        b = truth.ops.get(k, np.zeros(shape))
        per_lag[k] = float(np.linalg.norm(a - b))
    return per_lag, float(np.sqrt(sum(v**2 for v in per_lag.values())))
