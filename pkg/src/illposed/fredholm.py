"""Discretized first-kind integral equation with a step-function kernel.

The forward operator is cumulative integration on [0, 1], discretized by
the right-endpoint rule on a uniform grid so that the operator is exactly
lower-triangular with constant entries.  Its inverse is first differences,
which makes the instability of the problem reproducible in closed form: a
right-hand-side wiggle of amplitude delta comes back as a solution wiggle
of amplitude one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NumericalFailureError
from .linop import DenseOperator


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform right-endpoint grid y_i = i/n, i = 1..n, on [0, 1]."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError(f"grid size must be >= 1, got {self.n}")

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def points(self) -> np.ndarray:
        return np.arange(1, self.n + 1) * self.h


@dataclass(frozen=True, eq=False)
class FredholmProblem:
    """A cumulative-integration operator together with a right-hand side.

    ``delta`` records the perturbation scale when the right-hand side was
    built by :func:`ramp_rhs` with an oscillation, None otherwise.
    """

    grid: Grid
    operator: DenseOperator
    rhs: np.ndarray
    delta: float | None = None

    def __post_init__(self):
        n = self.grid.n
        if self.operator.matrix.shape != (n, n):
            raise InvalidInputError(
                f"operator must be {n}x{n}, got {self.operator.matrix.shape}"
            )
        expected = self.grid.h * np.tril(np.ones((n, n)))
        if not np.allclose(self.operator.matrix, expected, rtol=0, atol=1e-14):
            raise InvalidInputError(
                "operator must be lower-triangular with constant entries h "
                "(right-endpoint quadrature of the cumulative kernel)"
            )
        rhs = np.asarray(self.rhs, dtype=float)
        if rhs.shape != (n,):
            raise InvalidInputError(f"rhs must have shape ({n},), got {rhs.shape}")
        if not np.all(np.isfinite(rhs)):
            raise InvalidInputError("rhs must be finite")
        rhs = rhs.copy()
        rhs.flags.writeable = False
        object.__setattr__(self, "rhs", rhs)


def heaviside_operator(n: int) -> DenseOperator:
    """n x n cumulative-integration operator: K[i, j] = h for j <= i, else 0.

    (K f)_i is the right-endpoint Riemann sum of f over [0, y_i].  K is
    invertible; its inverse is the scaled first-difference operator.
    """
    if n < 2:
        raise InvalidInputError(f"need n >= 2 grid points, got {n}")
    return DenseOperator(np.tril(np.ones((n, n))) / n)


def oscillation_delta(n_osc: int) -> float:
    """Perturbation scale delta = 1 / (2 * n_osc * pi) for a whole number of oscillations."""
    if n_osc < 1 or n_osc != int(n_osc):
        raise InvalidInputError(f"n_osc must be a positive integer, got {n_osc}")
    return 1.0 / (2.0 * n_osc * math.pi)


def ramp_rhs(grid: Grid, n_osc: int | None = None) -> np.ndarray:
    """Right-hand side F(y) = y, optionally perturbed to y + delta*sin(y/delta).

    With n_osc oscillations, delta = 1/(2*n_osc*pi), so the perturbation has
    sup-norm delta and vanishes at y = 1.
    """
    y = grid.points
    if n_osc is None:
        return y
    delta = oscillation_delta(n_osc)
    return y + delta * np.sin(y / delta)


def analytic_perturbed_solution(grid: Grid, n_osc: int) -> np.ndarray:
    """Exact solution 1 + cos(y/delta) of the perturbed equation."""
    delta = oscillation_delta(n_osc)
    return 1.0 + np.cos(grid.points / delta)


def ramp_problem(n: int, n_osc: int | None = None) -> FredholmProblem:
    """Assemble the discretized problem, optionally with the perturbed right-hand side."""
    grid = Grid(n)
    delta = oscillation_delta(n_osc) if n_osc is not None else None
    return FredholmProblem(
        grid=grid,
        operator=heaviside_operator(n),
        rhs=ramp_rhs(grid, n_osc),
        delta=delta,
    )


def solve_unregularized(problem: FredholmProblem) -> np.ndarray:
    """Solve K f = F exactly by forward substitution.

    For the constant-entry triangular operator this collapses to scaled
    first differences, f_i = (F_i - F_{i-1}) / h with F_0 = 0.
    """
    k = problem.operator.matrix
    diag = np.diagonal(k)
    if np.any(diag == 0):
        raise NumericalFailureError("operator is singular: zero diagonal entry")
    h = problem.grid.h
    expected = h * np.tril(np.ones((problem.grid.n, problem.grid.n)))
    if np.array_equal(k, expected):
        return np.diff(problem.rhs, prepend=0.0) / h
    try:
        return np.linalg.solve(k, problem.rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"triangular solve failed: {exc}") from exc


@dataclass(frozen=True)
class InstabilityResult:
    """Measured input and output deviations of one perturbation experiment."""

    rhs_dev: float
    sol_dev: float
    amplification: float
    delta: float


def run_instability_experiment(n: int, n_osc: int) -> InstabilityResult:
    """Solve the perturbed problem and measure the blow-up.

    The right-hand side moves by at most delta while the solution moves by
    about one, so the amplification is about 1/delta = 2*n_osc*pi: it grows
    without bound as the perturbation shrinks.  Requires h <= delta/10 so
    the grid resolves the oscillation instead of aliasing it.
    """
    delta = oscillation_delta(n_osc)
    h = 1.0 / n
    if h > delta / 10:
        raise InvalidInputError(
            f"grid does not resolve the oscillation: need h <= delta/10, "
            f"got h = {h:.6g} > delta/10 = {delta / 10:.6g}"
        )
    grid = Grid(n)
    clean = ramp_rhs(grid)
    problem = ramp_problem(n, n_osc)
    solution = solve_unregularized(problem)
    rhs_dev = float(np.max(np.abs(problem.rhs - clean)))
    sol_dev = float(np.max(np.abs(solution - 1.0)))
    return InstabilityResult(
        rhs_dev=rhs_dev,
        sol_dev=sol_dev,
        amplification=sol_dev / rhs_dev,
        delta=delta,
    )


@dataclass(frozen=True)
class DensityCheck:
    """Mass and positivity evidence for a candidate conditional density."""

    integral: float
    min_value: float


def density_constraints_check(f: np.ndarray, grid: Grid) -> DensityCheck:
    """Report the quadrature mass h*sum(f) and the minimum value of f.

    A proper conditional density has integral 1 and min >= 0; the caller
    decides how much violation to tolerate.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.n,):
        raise InvalidInputError(f"density must have shape ({grid.n},), got {f.shape}")
    return DensityCheck(integral=float(grid.h * np.sum(f)), min_value=float(np.min(f)))


def regression_functional(density: np.ndarray, grid: Grid) -> float:
    """Mean of y under the density: the quadrature of y*f(y) over [0, 1].

    This linear functional is insensitive to the oscillatory perturbation
    that wrecks the density itself, which is the heart of the distinction
    between recovering f and recovering a smooth functional of f.
    """
    density = np.asarray(density, dtype=float)
    if density.shape != (grid.n,):
        raise InvalidInputError(f"density must have shape ({grid.n},), got {density.shape}")
    return float(grid.h * np.sum(grid.points * density))
