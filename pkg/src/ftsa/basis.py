"""Uniform grids, the orthonormal Fourier basis and quadrature on [0, 1].

Curves live in two forms: a ``DiscreteCurve`` is a length-n array of values
on a :class:`Grid`, a ``Curve`` is a length-d array of basis coefficients.
Samples of curves are 2-D arrays with one curve per row.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "AliasingError",
    "Grid",
    "FourierBasis",
    "make_grid",
    "make_fourier_basis",
    "trapezoid_weights",
    "inner_product",
    "norm",
    "project",
    "reconstruct",
    "parseval_check",
]


class AliasingError(ValueError):
    """Basis dimension too large for the grid resolution."""


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``0 = t_1 < ... < t_n = 1``."""

    n: int
    points: NDArray = field(repr=False, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if self.n < 2 or pts.shape != (self.n,):
            raise ValueError(f"grid needs n >= 2 points, got n={self.n}")
        if pts[0] != 0.0 or pts[-1] != 1.0:
            raise ValueError("grid must start at 0 and end at 1")
        if np.ptp(np.diff(pts)) > 1e-12:
            raise ValueError("grid spacing must be uniform")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def weights(self) -> NDArray:
        return trapezoid_weights(self.n)


def make_grid(n: int) -> Grid:
    return Grid(n, np.linspace(0.0, 1.0, n))


def trapezoid_weights(n: int) -> NDArray:
    """Composite trapezoid weights for a uniform grid of n points on [0, 1]."""
    w = np.full(n, 1.0 / (n - 1))
    w[0] = w[-1] = 0.5 / (n - 1)
    return w


@dataclass(frozen=True)
class FourierBasis:
    """Orthonormal Fourier system evaluated on a grid.

    Row ordering is ``1, sqrt(2) cos(2 pi x), sqrt(2) sin(2 pi x),
    sqrt(2) cos(4 pi x), ...``; ``eval[i, j]`` is ``e_{i+1}(t_j)``.
    """

    d: int
    grid: Grid
    eval: NDArray = field(repr=False, compare=False)

    @property
    def weighted(self) -> NDArray:
        """``eval`` scaled by the quadrature weights, shape (d, n)."""
        return self.eval * self.grid.weights

    def gram(self) -> NDArray:
        return self.weighted @ self.eval.T


def make_fourier_basis(d: int, grid: Grid | int) -> FourierBasis:
    """Evaluate the first ``d`` Fourier basis functions on ``grid``.

    Parameters
    ----------
    d : int
        Number of basis functions, at least 1.
    grid : Grid or int
        Evaluation grid, or its number of points.

    Raises
    ------
    AliasingError
        If ``2 * d >= n``; the top frequencies would alias on the grid.
    """
    if isinstance(grid, (int, np.integer)):
        grid = make_grid(int(grid))
    if d < 1:
        raise ValueError(f"basis dimension must be >= 1, got {d}")
    if 2 * d >= grid.n:
        raise AliasingError(f"d={d} aliases on a grid of n={grid.n} points (need d < n/2)")
    x = grid.points
    rows = np.empty((d, grid.n))
    rows[0] = 1.0
    for i in range(1, d):
        k = (i + 1) // 2
        trig = np.cos if i % 2 == 1 else np.sin
        rows[i] = np.sqrt(2.0) * trig(2.0 * np.pi * k * x)
    rows.setflags(write=False)
    return FourierBasis(d, grid, rows)


def _values(f: ArrayLike, n: int, name: str = "curve") -> NDArray:
    f = np.asarray(f, dtype=float)
    if f.shape[-1] != n:
        raise ValueError(f"{name} has {f.shape[-1]} values, grid has {n}")
    if not np.all(np.isfinite(f)):
        raise ValueError(f"{name} has non-finite values")
    return f


def inner_product(f: ArrayLike, g: ArrayLike, grid: Grid) -> float:
    """Trapezoid approximation of the L2 inner product on [0, 1]."""
    f = _values(f, grid.n, "f")
    g = _values(g, grid.n, "g")
    return float(np.sum(grid.weights * f * g))


def norm(f: ArrayLike, grid: Grid) -> float:
    return float(np.sqrt(max(inner_product(f, f, grid), 0.0)))


def project(f: ArrayLike, basis: FourierBasis) -> NDArray:
    """Basis coefficients of discretized curve(s).

    ``f`` may be a single curve of length n or an (N, n) sample; the result
    has shape (d,) or (N, d) accordingly.
    """
    f = _values(f, basis.grid.n)
    return f @ basis.weighted.T


def reconstruct(c: ArrayLike, basis: FourierBasis) -> NDArray:
    """Evaluate the finite expansion ``sum_i c_i e_i`` on the basis grid."""
    c = np.asarray(c, dtype=float)
    if c.shape[-1] != basis.d:
        raise ValueError(f"coefficient vector has dimension {c.shape[-1]}, basis has {basis.d}")
    return c @ basis.eval


def parseval_check(f: ArrayLike, basis: FourierBasis) -> tuple[float, float]:
    """Return ``(||f||^2, sum_i <e_i, f>^2)``.

    The two agree for curves in the span of the basis; otherwise the second
    is smaller (Bessel's inequality).
    """
    f = _values(f, basis.grid.n)
    coeffs = project(f, basis)
    return inner_product(f, f, basis.grid), float(coeffs @ coeffs)
