"""Hilbert-Schmidt operators restricted to a d-dimensional basis span.

An operator is a (d, d) array whose entry (i, j) is ``<e_i, F(e_j)>``, so
applying it to a coefficient vector is a matrix-vector product. The same
functions accept complex (Hermitian) matrices for frequency-domain work.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "DegenerateOperatorError",
    "EigenSystem",
    "DEFAULT_FLOOR",
    "apply",
    "outer",
    "hs_norm",
    "symmetrize",
    "eigendecompose",
    "truncated_inverse",
    "apply_c",
    "hermitian_eigendecompose",
    "truncated_inverse_c",
]

DEFAULT_FLOOR = 1e-10
SYMMETRY_TOL = 1e-8


class DegenerateOperatorError(ValueError):
    """Raised when an operator has no positive spectrum to invert."""


class EigenSystem(NamedTuple):
    """Eigenvalues in nonincreasing order; ``eigenvectors[:, k]`` pairs with ``eigenvalues[k]``."""

    eigenvalues: NDArray
    eigenvectors: NDArray

    def reconstruct(self) -> NDArray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _square(F: ArrayLike) -> NDArray:
    F = np.asarray(F)
    if F.ndim != 2 or F.shape[0] != F.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {F.shape}")
    if not np.all(np.isfinite(F)):
        raise FloatingPointError("operator has non-finite entries")
    return F


def apply(F: ArrayLike, x: ArrayLike) -> NDArray:
    """Apply F to a coefficient vector, or row-wise to an (N, d) sample."""
    F = np.asarray(F)
    x = np.asarray(x)
    if x.shape[-1] != F.shape[1]:
        raise ValueError(f"operator of shape {F.shape} cannot act on dimension {x.shape[-1]}")
    return x @ F.T


apply_c = apply


def outer(f: ArrayLike, g: ArrayLike) -> NDArray:
    """The rank-one operator ``v -> <g, v> f``."""
    f = np.asarray(f)
    g = np.asarray(g)
    if f.shape != g.shape:
        raise ValueError(f"dimension mismatch: {f.shape} vs {g.shape}")
    return np.outer(f, np.conj(g))


def hs_norm(F: ArrayLike) -> float:
    return float(np.linalg.norm(np.asarray(F), "fro"))


def symmetrize(F: ArrayLike, tol: float = SYMMETRY_TOL) -> NDArray:
    """Return ``(F + F*) / 2`` after checking F is self-adjoint up to ``tol``.

    The tolerance is absolute for operators of unit scale and relative to the
    largest entry otherwise.
    """
    F = _square(F)
    asym = np.max(np.abs(F - F.conj().T), initial=0.0)
    scale = max(1.0, np.max(np.abs(F), initial=0.0))
    if asym > tol * scale:
        raise ValueError(f"operator is not self-adjoint (asymmetry {asym:.3g})")
    return (F + F.conj().T) / 2


def eigendecompose(F: ArrayLike) -> EigenSystem:
    """Eigenpairs of a self-adjoint operator, largest eigenvalue first."""
    lam, vec = np.linalg.eigh(symmetrize(F))
    return EigenSystem(lam[::-1].copy(), vec[:, ::-1].copy())


hermitian_eigendecompose = eigendecompose


def truncated_inverse(
    F: ArrayLike, K: int | None = None, floor: float = DEFAULT_FLOOR
) -> NDArray:
    """Regularized inverse ``sum_{k <= K'} e_k (x) e_k / lambda_k``.

    ``K'`` is ``K`` capped at the number of eigenvalues above
    ``floor * lambda_1``; ``K=None`` keeps every eigenvalue above the floor.

    Raises
    ------
    DegenerateOperatorError
        If the top eigenvalue is not positive.
    """
    inv, _ = _truncated_inverse(eigendecompose(F), K, floor)
    return inv


truncated_inverse_c = truncated_inverse


def _truncated_inverse(es: EigenSystem, K: int | None, floor: float) -> tuple[NDArray, int]:
    lam, vec = es
    d = lam.size
    if K is None:
        K = d
    if not 1 <= K <= d:
        raise ValueError(f"truncation level K={K} outside [1, {d}]")
    if not lam[0] > 0:
        raise DegenerateOperatorError(f"top eigenvalue {lam[0]:.3g} is not positive")
    K_eff = min(K, int(np.sum(lam > floor * lam[0])))
    v = vec[:, :K_eff]
    return (v / lam[:K_eff]) @ v.conj().T, K_eff
