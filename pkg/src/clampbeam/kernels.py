"""Closed-form influence kernels for the clamped fourth-order problem on [0,1].

The linear problem

    u''''(x) = phi(x),   u(0) = u(1) = u'(0) = u'(1) = 0

has the representation u(x) = integral_0^1 green4(x,t) phi(t) dt, and its
slope is u'(x) = integral_0^1 green4_dx(x,t) phi(t) dt.  The second-order
Dirichlet problem u'' = g, u(0) = u(1) = 0 is represented through green2
(with a minus sign: u(x) = -integral green2(x,t) g(t) dt).  The two slope
kernels weight the source when expressing the end slopes of the chained
second-order formulation; both integrate to exactly 1/24 over [0,1].

All kernels are nonnegative on the unit square, continuous across the
diagonal, and vectorize over numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "KernelBounds",
    "KERNEL_BOUNDS",
    "SLOPE_KERNEL_INTEGRAL",
    "green4",
    "green4_dx",
    "green2",
    "slope_kernel_left",
    "slope_kernel_right",
]

# Inputs this close to [0,1] are snapped to the boundary instead of erroring.
_EDGE_TOL = 1e-12


@dataclass(frozen=True)
class KernelBounds:
    """Proven sup bounds for the integrated kernels.

    fourth_order     bounds sup_x int |green4(x,t)| dt        (exactly 1/384)
    fourth_order_dx  bounds sup_x int |green4_dx(x,t)| dt     (1/(72 sqrt 3))
    second_order     bounds sup_x int |green2(x,t)| dt        (exactly 1/8)
    slope            bounds int slope_kernel_{left,right} dt  (21/500, not sharp)
    """

    fourth_order: float = 1.0 / 384.0
    fourth_order_dx: float = 1.0 / (72.0 * math.sqrt(3.0))
    second_order: float = 1.0 / 8.0
    slope: float = 21.0 / 500.0


KERNEL_BOUNDS = KernelBounds()

# Exact common value of int_0^1 slope_kernel_left and ..._right; sharper than
# the documented 21/500 bound and used by the sharp quadrature tests.
SLOPE_KERNEL_INTEGRAL = 1.0 / 24.0


def _unit(value, name: str) -> np.ndarray:
    """Validate that value lies in [0,1] up to _EDGE_TOL and clamp it there."""
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    lo = float(np.min(arr))
    hi = float(np.max(arr))
    if lo < -_EDGE_TOL or hi > 1.0 + _EDGE_TOL:
        raise ValueError(f"{name} must lie in [0,1], got values in [{lo!r}, {hi!r}]")
    return np.clip(arr, 0.0, 1.0)


def _as_input_kind(out: np.ndarray, *inputs) -> float | np.ndarray:
    if all(np.ndim(p) == 0 for p in inputs):
        return float(out)
    return out


def green4(x, t):
    """Kernel of the clamped fourth-order problem.

    Piecewise polynomial, symmetric in (x,t), nonnegative, and bounded so that
    int_0^1 green4(x,t) dt = x^2 (1-x)^2 / 24 <= 1/384.
    """
    xv = _unit(x, "x")
    tv = _unit(t, "t")
    lower = tv * tv * (xv - 1.0) ** 2 * (3.0 * xv - 2.0 * tv * xv - tv)
    upper = xv * xv * (tv - 1.0) ** 2 * (3.0 * tv - 2.0 * tv * xv - xv)
    out = np.where(tv <= xv, lower, upper) / 6.0
    return _as_input_kind(out, x, t)


def green4_dx(x, t):
    """x-derivative of green4; represents the slope of the clamped solution.

    Satisfies sup_x int_0^1 |green4_dx(x,t)| dt = 1/(72 sqrt 3), attained at
    x = (3 -+ sqrt 3)/6 where the kernel keeps one sign in t.
    """
    xv = _unit(x, "x")
    tv = _unit(t, "t")
    lower = tv * tv * (1.0 - xv) * (2.0 * tv * xv - 3.0 * xv + 1.0)
    upper = (tv - 1.0) ** 2 * xv * (2.0 * tv - 2.0 * tv * xv - xv)
    out = np.where(tv <= xv, lower, upper) / 2.0
    return _as_input_kind(out, x, t)


def green2(x, t):
    """Kernel of the second-order Dirichlet problem, min(t,x) - tx.

    Symmetric triangular bump with int_0^1 green2(x,t) dt = x(1-x)/2 <= 1/8.
    """
    xv = _unit(x, "x")
    tv = _unit(t, "t")
    out = np.where(tv <= xv, tv * (1.0 - xv), xv * (1.0 - tv))
    return _as_input_kind(out, x, t)


def slope_kernel_left(t):
    """Weight of the source in the left end slope: t(1-t)(2-t)/6.

    Expanded, t^3/6 - t^2/2 + t/3; the factored form is used so the zeros
    at both endpoints are exact and nonnegativity is manifest.  Equals
    int_0^1 (1-s) green2(s,t) ds; integral 1/24.
    """
    tv = _unit(t, "t")
    out = tv * (1.0 - tv) * (2.0 - tv) / 6.0
    return _as_input_kind(out, t)


def slope_kernel_right(t):
    """Weight of the source in the right end slope: t(1-t)(1+t)/6.

    Expanded, -t^3/6 + t/6.  Equals int_0^1 s green2(s,t) ds; the mirror
    image of slope_kernel_left, slope_kernel_right(t) = slope_kernel_left(1-t).
    """
    tv = _unit(t, "t")
    out = tv * (1.0 - tv) * (1.0 + tv) / 6.0
    return _as_input_kind(out, t)
