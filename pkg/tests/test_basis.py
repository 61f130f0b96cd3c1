import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ftsa.basis import (
    AliasingError,
    Grid,
    inner_product,
    make_fourier_basis,
    make_grid,
    norm,
    parseval_check,
    project,
    reconstruct,
)

SQ2 = np.sqrt(2.0)
finite = st.floats(-10, 10, allow_nan=False)

# Dense-grid (n = 10^5 + 1) trapezoid coefficients of the step 1[x > 1/2]
# against 1, sqrt2 cos 2pi x, sqrt2 sin 2pi x, sqrt2 cos 4pi x, sqrt2 sin 4pi x.
STEP_COEFFS = np.array([0.49999499999999997, 7.071067811947884e-06, -0.450158157930457,
                        -7.071067811843801e-06, 0.0])


def step(x):
    return (x > 0.5).astype(float)


class TestGrid:
    def test_uniform(self):
        g = make_grid(11)
        assert g.points[0] == 0 and g.points[-1] == 1
        assert np.allclose(np.diff(g.points), 0.1)

    def test_rejects_bad_grids(self):
        with pytest.raises(ValueError):
            make_grid(1)
        with pytest.raises(ValueError):
            Grid(3, np.array([0.0, 0.2, 1.0]))
        with pytest.raises(ValueError):
            Grid(3, np.array([0.1, 0.5, 1.0]))


class TestFourierBasis:
    def test_constant_only(self, grid):
        b = make_fourier_basis(1, grid)
        assert b.eval.shape == (1, grid.n)
        assert np.all(b.eval == 1.0)
        assert inner_product(b.eval[0], b.eval[0], grid) == pytest.approx(1.0, abs=1e-14)

    def test_first_three_rows(self, grid):
        x = grid.points
        b = make_fourier_basis(3, grid)
        expected = np.stack([np.ones_like(x), SQ2 * np.cos(2 * np.pi * x), SQ2 * np.sin(2 * np.pi * x)])
        np.testing.assert_allclose(b.eval, expected, atol=1e-15)
        # independent trapezoid Gram via numpy
        gram = np.array([[np.trapezoid(u * v, x) for v in expected] for u in expected])
        np.testing.assert_allclose(gram, np.eye(3), atol=1e-8)
        np.testing.assert_allclose(b.gram(), np.eye(3), atol=1e-8)

    @pytest.mark.parametrize("d", [1, 2, 7, 15, 25])
    def test_gram_identity(self, grid, d):
        np.testing.assert_allclose(make_fourier_basis(d, grid).gram(), np.eye(d), atol=1e-6)

    def test_ordering(self, grid):
        b = make_fourier_basis(5, grid)
        x = grid.points
        np.testing.assert_allclose(b.eval[3], SQ2 * np.cos(4 * np.pi * x), atol=1e-14)
        np.testing.assert_allclose(b.eval[4], SQ2 * np.sin(4 * np.pi * x), atol=1e-14)

    def test_aliasing(self, grid):
        with pytest.raises(AliasingError):
            make_fourier_basis(600, grid)
        with pytest.raises(AliasingError):
            make_fourier_basis(6, make_grid(12))
        make_fourier_basis(5, make_grid(11))

    def test_dimension_must_be_positive(self, grid):
        with pytest.raises(ValueError):
            make_fourier_basis(0, grid)


class TestInnerProduct:
    def test_examples(self, grid):
        x = grid.points
        one = np.ones_like(x)
        assert inner_product(one, one, grid) == pytest.approx(1.0, abs=1e-14)
        s, c = SQ2 * np.sin(2 * np.pi * x), SQ2 * np.cos(2 * np.pi * x)
        assert abs(inner_product(s, c, grid)) < 1e-8
        assert inner_product(x, one, grid) == pytest.approx(0.5, abs=1e-6)

    def test_length_mismatch(self, grid):
        with pytest.raises(ValueError):
            inner_product(np.ones(10), np.ones(grid.n), grid)

    def test_norm_examples(self, grid):
        x = grid.points
        assert norm(np.zeros_like(x), grid) == 0
        assert norm(np.ones_like(x), grid) == pytest.approx(1.0)
        assert norm(2 * SQ2 * np.sin(2 * np.pi * x), grid) == pytest.approx(2.0, abs=1e-6)

    @given(st.data())
    def test_symmetric_bilinear(self, data):
        g = make_grid(51)
        vec = arrays(float, g.n, elements=finite)
        f, h, k = data.draw(vec), data.draw(vec), data.draw(vec)
        a, b = data.draw(finite), data.draw(finite)
        lhs = inner_product(a * f + b * h, k, g)
        rhs = a * inner_product(f, k, g) + b * inner_product(h, k, g)
        scale = 1 + abs(a) * norm(f, g) * norm(k, g) + abs(b) * norm(h, g) * norm(k, g)
        assert abs(lhs - rhs) <= 1e-10 * scale
        assert inner_product(f, k, g) == pytest.approx(inner_product(k, f, g), rel=1e-12, abs=1e-12)


class TestProjection:
    def test_constant(self, grid):
        b = make_fourier_basis(5, grid)
        np.testing.assert_allclose(project(np.ones(grid.n), b), [1, 0, 0, 0, 0], atol=1e-8)

    def test_linear_combination(self, grid):
        b = make_fourier_basis(5, grid)
        f = 3 * b.eval[1] + 0.5 * b.eval[3]
        np.testing.assert_allclose(project(f, b), [0, 3, 0, 0.5, 0], atol=1e-10)

    def test_step_against_dense_quadrature(self, grid):
        b = make_fourier_basis(5, grid)
        # the jump sits on a grid node, so coarse trapezoid is O(h) accurate
        np.testing.assert_allclose(project(step(grid.points), b), STEP_COEFFS, atol=2e-3)
        assert STEP_COEFFS[2] == pytest.approx(-SQ2 / np.pi, abs=1e-9)

    def test_step_error_decreases_with_d(self, grid):
        f = step(grid.points)
        errs = []
        for d in (1, 3, 5, 7, 9, 11):
            b = make_fourier_basis(d, grid)
            errs.append(norm(f - reconstruct(project(f, b), b), grid))
        assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))

    def test_sample_shape(self, basis15, rng):
        c = rng.standard_normal((4, 15))
        vals = reconstruct(c, basis15)
        assert vals.shape == (4, 1001)
        np.testing.assert_allclose(project(vals, basis15), c, atol=1e-10)

    def test_grid_mismatch(self, basis15):
        with pytest.raises(ValueError):
            project(np.ones(100), basis15)
        with pytest.raises(ValueError):
            reconstruct(np.ones(3), basis15)


class TestReconstruct:
    def test_unit_vectors(self, basis15, grid):
        c = np.zeros(15)
        c[0] = 1
        np.testing.assert_allclose(reconstruct(c, basis15), 1.0)
        c = np.zeros(15)
        c[1] = 1
        np.testing.assert_allclose(reconstruct(c, basis15), SQ2 * np.cos(2 * np.pi * grid.points), atol=1e-14)

    @given(arrays(float, 15, elements=finite))
    def test_round_trip(self, c):
        b = make_fourier_basis(15, make_grid(1001))
        np.testing.assert_allclose(project(reconstruct(c, b), b), c, atol=1e-8)


class TestParseval:
    def test_exact_expansion(self, basis15):
        f = basis15.eval[0] + 2 * basis15.eval[2]
        lhs, rhs = parseval_check(f, basis15)
        assert lhs == pytest.approx(5.0, abs=1e-8)
        assert rhs == pytest.approx(5.0, abs=1e-8)

    def test_zero(self, basis15):
        assert parseval_check(np.zeros(1001), basis15) == (0.0, 0.0)

    def test_bessel_for_step(self, grid):
        b = make_fourier_basis(5, grid)
        lhs, rhs = parseval_check(step(grid.points), b)
        # dense-grid oracle: ||f||^2 = 1/2 and sum of squared coefficients
        assert lhs == pytest.approx(0.5, abs=1e-3)
        assert rhs == pytest.approx(float(STEP_COEFFS @ STEP_COEFFS), abs=3e-3)
        assert rhs < lhs

    @given(arrays(float, 15, elements=finite))
    def test_random_coefficients(self, c):
        b = make_fourier_basis(15, make_grid(1001))
        lhs, rhs = parseval_check(reconstruct(c, b), b)
        assert lhs == pytest.approx(float(c @ c), abs=1e-6 * (1 + c @ c))
        assert rhs == pytest.approx(lhs, abs=1e-6 * (1 + lhs))
