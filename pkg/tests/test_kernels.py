"""Kernel closed forms checked against quadrature identities and bounds.

The main oracles are integral identities with analytically known values:
applying the fourth-order kernel to a constant source must reproduce the
closed-form clamped solution of u'''' = const, and the slope kernels must
match their defining weighted integrals of the second-order kernel.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clampbeam.kernels import (
    KERNEL_BOUNDS,
    SLOPE_KERNEL_INTEGRAL,
    green2,
    green4,
    green4_dx,
    slope_kernel_left,
    slope_kernel_right,
)
from clampbeam.numerics import Grid, GridFunction, simpson

UNIT = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def _quad(fn, n=2000):
    g = Grid(n)
    return simpson(GridFunction.sample(g, fn))


class TestPointValues:
    def test_green4_center(self):
        # both branches at x = t = 1/2 give 1/192
        assert green4(0.5, 0.5) == pytest.approx(1.0 / 192.0, abs=1e-18)

    def test_green4_row_integral_center(self):
        # integral of the center row equals x^2(1-x)^2/24 = 1/384
        val = _quad(lambda t: green4(0.5, t))
        assert val == pytest.approx(1.0 / 384.0, abs=1e-15)

    def test_green2_center(self):
        assert green2(0.5, 0.5) == pytest.approx(0.25, abs=1e-18)

    def test_slope_kernel_center(self):
        assert slope_kernel_right(0.5) == pytest.approx(1.0 / 16.0, abs=1e-18)
        assert slope_kernel_left(0.5) == pytest.approx(1.0 / 16.0, abs=1e-18)

    def test_boundary_rows_vanish(self):
        t = np.linspace(0.0, 1.0, 11)
        for x in (0.0, 1.0):
            assert np.max(np.abs(green4(x, t))) == 0.0
            assert np.max(np.abs(green2(x, t))) == 0.0
        assert slope_kernel_left(0.0) == 0.0
        assert slope_kernel_left(1.0) == 0.0
        assert slope_kernel_right(0.0) == 0.0
        assert slope_kernel_right(1.0) == 0.0


class TestBoundsConstants:
    def test_frozen_values(self):
        assert KERNEL_BOUNDS.fourth_order == pytest.approx(0.0026041666666666665, rel=1e-15)
        assert KERNEL_BOUNDS.fourth_order_dx == pytest.approx(0.008018753738744803, rel=1e-15)
        assert KERNEL_BOUNDS.second_order == 0.125
        assert KERNEL_BOUNDS.slope == 0.042
        assert SLOPE_KERNEL_INTEGRAL == pytest.approx(1.0 / 24.0, rel=1e-16)

    def test_slope_bound_dominates_exact_integral(self):
        # the stored working constant 21/500 is a slight over-estimate of 1/24
        assert KERNEL_BOUNDS.slope >= SLOPE_KERNEL_INTEGRAL


class TestQuadratureIdentities:
    """Kernels against closed-form solutions of constant-source problems."""

    @pytest.mark.parametrize("x", [0.1, 0.25, 0.5, 0.68, 0.9])
    def test_green4_reproduces_clamped_solution(self, x):
        # u'''' = 24 with clamped ends has u = x^2 (1-x)^2
        val = 24.0 * _quad(lambda t: green4(x, t))
        assert val == pytest.approx(x**2 * (1 - x) ** 2, abs=1e-13)

    @pytest.mark.parametrize("x", [0.1, 0.25, 0.5, 0.68, 0.9])
    def test_green4_dx_reproduces_slope(self, x):
        # derivative of the same solution: 2x(1-x)(1-2x)
        val = 24.0 * _quad(lambda t: green4_dx(x, t))
        assert val == pytest.approx(2 * x * (1 - x) * (1 - 2 * x), abs=1e-12)

    @pytest.mark.parametrize("x", [0.1, 0.3, 0.5, 0.75])
    def test_green2_reproduces_poisson_solution(self, x):
        # u'' = 2 with zero ends has u = x(x-1) = -integral of G * 2
        val = -2.0 * _quad(lambda t: green2(x, t))
        assert val == pytest.approx(x * (x - 1), abs=1e-13)

    @pytest.mark.parametrize("t", [0.15, 0.4, 0.5, 0.62, 0.85])
    def test_slope_kernels_match_defining_integrals(self, t):
        left = _quad(lambda s: (1 - s) * green2(s, t))
        right = _quad(lambda s: s * green2(s, t))
        assert left == pytest.approx(slope_kernel_left(t), abs=1e-14)
        assert right == pytest.approx(slope_kernel_right(t), abs=1e-14)

    def test_slope_kernel_integrals(self):
        # both weights integrate to exactly 1/24 (they are cubics, so the
        # composite quadrature is exact up to rounding)
        for fn in (slope_kernel_left, slope_kernel_right):
            assert _quad(fn, n=16) == pytest.approx(SLOPE_KERNEL_INTEGRAL, abs=1e-16)


class TestProperties:
    @given(x=UNIT, t=UNIT)
    def test_green4_symmetric_nonnegative_bounded(self, x, t):
        a = green4(x, t)
        b = green4(t, x)
        assert a == pytest.approx(b, abs=1e-15)
        assert a >= 0.0
        assert a <= 1.0 / 192.0 + 1e-15

    @given(x=UNIT, t=UNIT)
    def test_green2_symmetric_nonnegative_bounded(self, x, t):
        a = green2(x, t)
        assert a == pytest.approx(green2(t, x), abs=1e-15)
        assert 0.0 <= a <= 0.25 + 1e-15

    @given(t=UNIT)
    def test_slope_kernels_nonnegative_and_mirrored(self, t):
        left = slope_kernel_left(t)
        right = slope_kernel_right(t)
        assert left >= -1e-18
        assert right >= -1e-18
        assert left == pytest.approx(slope_kernel_right(1.0 - t), abs=1e-15)

    @given(x=st.floats(min_value=0.02, max_value=0.98),
           t=st.floats(min_value=0.02, max_value=0.98))
    def test_green4_dx_is_x_derivative(self, x, t):
        # centered difference away from the diagonal kink
        if abs(x - t) < 0.02:
            return
        h = 1e-5
        fd = (green4(x + h, t) - green4(x - h, t)) / (2 * h)
        assert green4_dx(x, t) == pytest.approx(fd, abs=5e-9)

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(7)
        xs = rng.uniform(0, 1, 40)
        ts = rng.uniform(0, 1, 40)
        for fn in (green4, green4_dx, green2):
            vec = fn(xs, ts)
            scal = np.array([fn(float(a), float(b)) for a, b in zip(xs, ts)])
            np.testing.assert_allclose(vec, scal, rtol=0, atol=0)

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            green4(-0.1, 0.5)
        with pytest.raises(ValueError):
            green2(0.5, 1.2)
        with pytest.raises(ValueError):
            slope_kernel_left(2.0)
        # values a hair outside [0,1] are clipped, not rejected
        assert green4(-1e-13, 0.5) == 0.0
        assert np.isfinite(green4_dx(1.0 + 1e-13, 0.3))
