"""Reusable simulation designs for estimator comparisons."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .regression import LinearFilter, filter_distance, fit_lagged_timedomain
from .simulate import NoiseSpec, default_eigenvalues, gaussian_white_noise, random_operator, simulate_filtered
from .spectral import fit_lagged_spectral


@dataclass(frozen=True)
class FilterDesign:
    """White-noise input pushed through a random filter plus small output noise.

    Input coefficients have variances ``i^-2``, output noise ``noise_scale * i^-2``,
    and every true ``A_k`` is Gaussian rescaled to HS norm ``filter_hs``.
    """

    d: int = 3
    support: tuple[int, int] = (0, 1)
    noise_scale: float = 0.1
    filter_hs: float = 1.0
    design_seed: int = 2024

    def truth(self) -> LinearFilter:
        rng = np.random.default_rng(self.design_seed)
        lo, hi = self.support
        return LinearFilter({k: random_operator(self.d, rng, self.filter_hs) for k in range(lo, hi + 1)})

    def sample(self, N: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
        """Aligned ``(X, Y)`` with exactly N rows."""
        lo, hi = self.support
        extra = max(hi, 0) - min(lo, 0)
        X = gaussian_white_noise(NoiseSpec(self.d, seed=seed), N + extra)
        noise = NoiseSpec(self.d, tuple(default_eigenvalues(self.d, self.noise_scale)), seed=seed + 10**6)
        return simulate_filtered(X, self.truth(), noise)


def compare_estimators(design: FilterDesign, N: int, seeds, **spectral_kw) -> dict[str, list[float]]:
    """Total HS errors of both estimators and their mutual distance, per seed.

    The time-domain estimator is only run for causal supports ``[0, m]``.
    Both invert the full covariance (no truncation) unless ``K`` is given.
    """
    truth = design.truth()
    lo, hi = design.support
    K = spectral_kw.pop("K", design.d)
    out: dict[str, list[float]] = {"spectral": [], "time": [], "distance": []}
    for seed in seeds:
        X, Y = design.sample(N, seed)
        spec = fit_lagged_spectral(X, Y, design.support, K=K, **spectral_kw)
        out["spectral"].append(filter_distance(spec, truth)[1])
        if lo == 0:
            time = fit_lagged_timedomain(X, Y, hi, K=(hi + 1) * design.d)
            out["time"].append(filter_distance(time, truth)[1])
            out["distance"].append(filter_distance(spec, time)[1])
    return out
