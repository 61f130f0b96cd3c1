"""Seeded generators for functional white noise, FAR(1) and filtered series.

Everything is simulated directly in coefficient space. Random numbers come
from numpy's PCG64 bit generator seeded with the NoiseSpec's integer seed, so a
given (algorithm, seed) pair always reproduces the same sample.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .moments import InsufficientDataError, as_sample
from .regression import LinearFilter

__all__ = [
    "RNG_ALGORITHM",
    "NoiseSpec",
    "ProcessSpec",
    "default_eigenvalues",
    "gaussian_white_noise",
    "simulate_far1",
    "simulate_filtered",
    "simulate",
    "random_operator",
]

RNG_ALGORITHM = "numpy.random.Generator(PCG64)"


def default_eigenvalues(d: int, scale: float = 1.0) -> NDArray:
    """Decay law ``scale * i^-2``, i = 1..d."""
    return scale / np.arange(1, d + 1) ** 2.0


@dataclass(frozen=True)
class NoiseSpec:
    d: int
    eigenvalues: tuple[float, ...] | None = None
    seed: int = 0

    def __post_init__(self):
        lam = default_eigenvalues(self.d) if self.eigenvalues is None else self.eigenvalues
        lam = tuple(float(v) for v in lam)
        if len(lam) != self.d:
            raise ValueError(f"{len(lam)} eigenvalues for dimension {self.d}")
        if any(not v > 0 for v in lam):
            raise ValueError("noise eigenvalues must be positive")
        if any(b > a for a, b in zip(lam, lam[1:])):
            raise ValueError("noise eigenvalues must be nonincreasing")
        object.__setattr__(self, "eigenvalues", lam)

    @property
    def lam(self) -> NDArray:
        return np.array(self.eigenvalues)


@dataclass
class ProcessSpec:
    """Recipe for a simulated series.

    ``kind`` is ``"white"``, ``"far1"`` (needs ``ar_operator``) or
    ``"filtered"`` (needs ``filter``). For ``"filtered"`` the input series is
    white noise, or FAR(1) when ``ar_operator`` is also given, and
    ``output_noise`` (None for none) is added to the filtered response.
    """

    kind: str
    noise: NoiseSpec
    N: int
    filter: LinearFilter | None = None
    ar_operator: NDArray | None = None
    output_noise: NoiseSpec | None = None
    burn_in: int = 200

    def __post_init__(self):
        if self.kind not in ("white", "far1", "filtered"):
            raise ValueError(f"unknown process kind {self.kind!r}")
        if self.N < 0 or self.burn_in < 0:
            raise ValueError("N and burn_in must be nonnegative")
        if self.kind == "far1" and self.ar_operator is None:
            raise ValueError("far1 process needs an ar_operator")
        if self.kind == "filtered" and self.filter is None:
            raise ValueError("filtered process needs a filter")
        if self.ar_operator is not None:
            self.ar_operator = np.asarray(self.ar_operator, dtype=float)
            _check_stable(self.ar_operator)

    def digest(self) -> str:
        """SHA-256 of a canonical JSON rendering of the process."""
        payload = {
            "kind": self.kind,
            "noise": asdict(self.noise),
            "N": self.N,
            "burn_in": self.burn_in,
            "ar_operator": None if self.ar_operator is None else self.ar_operator.tolist(),
            "output_noise": None if self.output_noise is None else asdict(self.output_noise),
            "filter": None
            if self.filter is None
            else {
                "support": list(self.filter.support),
                "ops": {str(k): v.tolist() for k, v in sorted(self.filter.ops.items())},
            },
        }
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def _check_stable(psi: NDArray) -> None:
    rho = float(np.max(np.abs(np.linalg.eigvals(psi)), initial=0.0))
    if not rho < 1:
        raise ValueError(f"FAR(1) operator is unstable (spectral radius {rho:.4g} >= 1)")


def gaussian_white_noise(spec: NoiseSpec, N: int) -> NDArray:
    """N iid curves with independent N(0, lambda_i) coefficients."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    rng = np.random.default_rng(spec.seed)
    return rng.standard_normal((N, spec.d)) * np.sqrt(spec.lam)


def simulate_far1(spec: ProcessSpec) -> NDArray:
    """``X_t = Psi(X_{t-1}) + eps_t`` from a zero start, burn-in discarded."""
    psi = spec.ar_operator
    if psi is None:
        raise ValueError("far1 process needs an ar_operator")
    _check_stable(psi)
    eps = gaussian_white_noise(spec.noise, spec.N + spec.burn_in)
    X = np.empty_like(eps)
    prev = np.zeros(spec.noise.d)
    for t in range(eps.shape[0]):
        prev = X[t] = psi @ prev + eps[t]
    return X[spec.burn_in :]


def simulate_filtered(
    X: ArrayLike, filt: LinearFilter, noise: NoiseSpec | None = None
) -> tuple[NDArray, NDArray]:
    """Response ``Y_t = sum_k A_k X_{t-k} + eps_t`` on the valid index range.

    Returns ``(X', Y)`` where ``X'`` is X trimmed to the times at which Y is
    defined, so rows of the pair are aligned.
    """
    X = as_sample(X, "X")
    N = X.shape[0]
    kmin, kmax = filt.support
    start, stop = max(kmax, 0), min(N, N + kmin)
    if stop <= start:
        raise InsufficientDataError(f"filter support {filt.support} exceeds sample length {N}")
    d_out = filt.shape[0] if filt.shape else X.shape[1]
    Y = np.zeros((stop - start, d_out))
    for k, Ak in filt.ops.items():
        Y += X[start - k : stop - k] @ Ak.T
    if noise is not None:
        if noise.d != d_out:
            raise ValueError(f"output noise dimension {noise.d} != response dimension {d_out}")
        Y += gaussian_white_noise(noise, stop - start)
    return X[start:stop], Y


def simulate(spec: ProcessSpec) -> tuple[NDArray, NDArray | None]:
    """Run a :class:`ProcessSpec`; returns ``(X, Y)`` with Y None unless filtered."""
    if spec.kind == "white":
        return gaussian_white_noise(spec.noise, spec.N), None
    if spec.kind == "far1":
        return simulate_far1(spec), None
    if spec.ar_operator is not None:
        X = simulate_far1(spec)
    else:
        X = gaussian_white_noise(spec.noise, spec.N)
    return simulate_filtered(X, spec.filter, spec.output_noise)


def random_operator(d: int, rng: np.random.Generator, hs: float = 1.0) -> NDArray:
    """Gaussian random d x d operator rescaled to the given HS norm."""
    A = rng.standard_normal((d, d))
    return A * (hs / np.linalg.norm(A))
