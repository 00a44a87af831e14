"""Fixed-point iteration for the canonical clamped fourth-order problem.

The unknown is the triplet (phi, alpha, beta): the source phi(x) = u''''(x)
together with the end curvatures alpha = u''(0) and beta = u''(1).  One
iteration maps a triplet to the next by

  1. solving v'' = phi with v(0) = alpha, v(1) = beta        (v plays u''),
  2. solving u'' = v with u(0) = u(1) = 0,
  3. differentiating u and v to get y (slope) and z (third derivative),
  4. refreshing the source, phi_new = f(x, u, y, v, z),
  5. refreshing the curvatures from weighted integrals of phi_new,
     using the already-updated alpha when computing beta.

Under the contraction conditions (see analysis.check_conditions) the map has
a unique fixed point and the iterates converge geometrically; the errors
e(k) = max_i |u_k(x_i) - u_{k-1}(x_i)| then shrink to rounding level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .expr import ExprEvalError, evaluate
from .kernels import slope_kernel_left, slope_kernel_right
from .numerics import Grid, GridFunction, diff5, simpson, solve_second_order_bvp, sup_norm
from .problem import CanonicalProblem

__all__ = [
    "Triplet",
    "triplet_norm",
    "triplet_distance",
    "IterateProfile",
    "SolverConfig",
    "SolveReport",
    "SolverError",
    "DivergenceError",
    "IterationLimitError",
    "init_state",
    "step",
    "residual",
    "solve",
]


@dataclass(frozen=True)
class Triplet:
    """Iteration state: grid samples of the source plus the end curvatures."""

    source: GridFunction
    alpha: float
    beta: float

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ValueError("end curvatures must be finite")


def triplet_norm(state: Triplet) -> float:
    """Norm used by the contraction argument: sup|phi| + |alpha| + |beta|."""
    return sup_norm(state.source) + abs(state.alpha) + abs(state.beta)


def triplet_distance(s1: Triplet, s2: Triplet) -> float:
    return (
        sup_norm(GridFunction(s1.source.grid, s1.source.values - s2.source.values))
        + abs(s1.alpha - s2.alpha)
        + abs(s1.beta - s2.beta)
    )


@dataclass(frozen=True)
class IterateProfile:
    """The candidate solution an iteration state induces."""

    u: GridFunction
    du: GridFunction
    d2u: GridFunction
    d3u: GridFunction


@dataclass(frozen=True)
class SolverConfig:
    n: int = 100
    tol: float = 1e-15
    max_iter: int = 200
    divergence_window: int = 5

    def __post_init__(self):
        Grid(self.n)  # borrow the grid-size rule (even, >= 8)
        if not (np.isfinite(self.tol) and self.tol > 0):
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter!r}")
        if self.divergence_window < 2:
            raise ValueError(
                f"divergence_window must be at least 2, got {self.divergence_window!r}")


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a solve: final iterate, history and diagnostics.

    e_history[k-1] holds e(k) for k = 1..iterations; eu_history lines up
    with it and holds max-node errors against the exact solution when one
    is known.  first_step is the triplet distance after the very first
    application of the map, the quantity the a-priori error envelope needs.
    """

    converged: bool
    iterations: int
    e_history: np.ndarray
    eu_history: Optional[np.ndarray]
    profile: IterateProfile
    triplet: Triplet
    residual: float
    first_step: float
    failure: Optional[str] = None

    @property
    def grid(self) -> Grid:
        return self.profile.u.grid

    @property
    def final_e(self) -> float:
        return float(self.e_history[-1]) if len(self.e_history) else float("nan")

    @property
    def final_eu(self) -> Optional[float]:
        if self.eu_history is None or not len(self.eu_history):
            return None
        return float(self.eu_history[-1])


class SolverError(RuntimeError):
    """Iteration failed; .report holds the partial run for inspection."""

    def __init__(self, message: str, report: SolveReport):
        super().__init__(message)
        self.report = report


class DivergenceError(SolverError):
    pass


class IterationLimitError(SolverError):
    pass


def _source_values(problem: CanonicalProblem, grid: Grid, profile: IterateProfile
                   ) -> np.ndarray:
    out = evaluate(
        problem.rhs,
        grid.nodes,
        profile.u.values,
        profile.du.values,
        profile.d2u.values,
        profile.d3u.values,
    )
    return np.broadcast_to(np.asarray(out, dtype=float), grid.nodes.shape).copy()


def _profile_from(state: Triplet) -> IterateProfile:
    v = solve_second_order_bvp(state.source, state.alpha, state.beta)
    u = solve_second_order_bvp(v, 0.0, 0.0)
    return IterateProfile(u=u, du=diff5(u), d2u=v, d3u=diff5(v))


def init_state(problem: CanonicalProblem, grid: Grid) -> Triplet:
    """Starting triplet: source f(x,0,0,0,0), zero end curvatures."""
    zeros = np.zeros_like(grid.nodes)
    out = evaluate(problem.rhs, grid.nodes, zeros, zeros, zeros, zeros)
    vals = np.broadcast_to(np.asarray(out, dtype=float), grid.nodes.shape).copy()
    return Triplet(GridFunction(grid, vals), 0.0, 0.0)


def step(state: Triplet, problem: CanonicalProblem) -> tuple:
    """One application of the fixed-point map; also returns the profile used."""
    profile = _profile_from(state)
    grid = state.source.grid
    phi = GridFunction(grid, _source_values(problem, grid, profile))
    wl = slope_kernel_left(grid.nodes)
    wr = slope_kernel_right(grid.nodes)
    alpha = 3.0 * simpson(GridFunction(grid, wl * phi.values)) - state.beta / 2.0
    beta = 3.0 * simpson(GridFunction(grid, wr * phi.values)) - alpha / 2.0
    return Triplet(phi, alpha, beta), profile


def residual(state: Triplet, problem: CanonicalProblem) -> float:
    """How far a triplet is from being a fixed point of the map.

    Sum of the sup defect in the source equation and the absolute defects
    in the two curvature equations.
    """
    profile = _profile_from(state)
    grid = state.source.grid
    f_vals = _source_values(problem, grid, profile)
    src_defect = float(np.max(np.abs(state.source.values - f_vals)))
    wl = slope_kernel_left(grid.nodes)
    wr = slope_kernel_right(grid.nodes)
    i_left = simpson(GridFunction(grid, wl * state.source.values))
    i_right = simpson(GridFunction(grid, wr * state.source.values))
    left_defect = abs(i_left - (state.beta / 6.0 + state.alpha / 3.0))
    right_defect = abs(-i_right + (state.beta / 3.0 + state.alpha / 6.0))
    return src_defect + left_defect + right_defect


def solve(problem: CanonicalProblem, config: SolverConfig = SolverConfig(),
          exact=None) -> SolveReport:
    """Iterate to a fixed point; raises on divergence or iteration budget.

    exact overrides the problem's own exact solution for error tracking;
    pass a callable of the canonical coordinate returning node values.
    """
    grid = Grid(config.n)
    state0 = init_state(problem, grid)
    state, profile = step(state0, problem)
    first_step = triplet_distance(state, state0)

    if exact is not None:
        exact_gf = GridFunction.sample(grid, exact)
    else:
        exact_gf = problem.exact_on(grid)

    e_hist: list = []
    eu_hist: Optional[list] = [] if exact_gf is not None else None
    prev_u = profile.u.values
    prev_e = None
    increases = 0

    def _report(converged: bool, failure: Optional[str] = None) -> SolveReport:
        try:
            res = residual(state, problem)
        except ExprEvalError:
            res = float("inf")
        return SolveReport(
            converged=converged,
            iterations=len(e_hist),
            e_history=np.asarray(e_hist, dtype=float),
            eu_history=None if eu_hist is None else np.asarray(eu_hist, dtype=float),
            profile=profile,
            triplet=state,
            residual=res,
            first_step=first_step,
            failure=failure,
        )

    for _ in range(1, config.max_iter + 1):
        try:
            state, profile = step(state, problem)
        except ExprEvalError as err:
            raise DivergenceError(f"source evaluation broke down: {err}",
                                  _report(False, failure="divergence")) from err
        if not np.all(np.isfinite(profile.u.values)):
            raise DivergenceError("iterates are no longer finite",
                                  _report(False, failure="divergence"))
        e = float(np.max(np.abs(profile.u.values - prev_u)))
        e_hist.append(e)
        prev_u = profile.u.values
        if eu_hist is not None:
            eu_hist.append(float(np.max(np.abs(profile.u.values - exact_gf.values))))
        if e <= config.tol:
            return _report(True)
        if prev_e is not None and e > prev_e:
            increases += 1
        else:
            increases = 0
        prev_e = e
        if increases >= config.divergence_window:
            raise DivergenceError(
                f"successive-iterate errors grew for {increases} consecutive iterations",
                _report(False, failure="divergence"))
    raise IterationLimitError(
        f"no convergence to tol={config.tol:g} within {config.max_iter} iterations",
        _report(False, failure="iteration-limit"))
