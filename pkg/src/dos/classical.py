"""
Classical quantities for the density-of-states oracles: turning points,
orbit periods and phase-space integrals.
"""
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy.integrate import quad, trapezoid
from scipy.optimize import brentq

Potential = Callable[[np.ndarray], np.ndarray]

_STEP = 1e-6


def _value(V: Potential, x: float) -> float:
    return float(V(np.asarray(x, dtype=float)))


def _slope(V: Potential, x: float) -> float:
    return (_value(V, x + _STEP) - _value(V, x - _STEP)) / (2 * _STEP)


def turning_points(V: Potential, energy: float, half_width: float, samples: int = 4001) -> List[float]:
    """Sorted roots of V(x) = E in (-L, L), bracketed on a grid and refined with brentq."""
    x = np.linspace(-half_width, half_width, samples)
    gap = np.asarray(V(x), dtype=float) - energy
    roots = []
    for i in np.flatnonzero(np.sign(gap[:-1]) * np.sign(gap[1:]) < 0):
        roots.append(brentq(lambda s: _value(V, s) - energy, x[i], x[i + 1], xtol=1e-14))
    roots.extend(float(x[i]) for i in np.flatnonzero(gap == 0))
    return sorted(roots)


def _regular_part(V: Potential, energy: float, end: float, x: float) -> float:
    gap = 2.0 * (energy - _value(V, x))
    if gap <= 0 or x == end:
        return 1.0 / np.sqrt(2.0 * abs(_slope(V, end)))
    return np.sqrt(abs(x - end) / gap)


def classical_period(V: Potential, energy: float, left: float, right: float) -> float:
    """T(E) = 2 int dx / sqrt(2(E - V)) between two simple turning points.

    Each half carries the inverse square-root endpoint singularity as an
    algebraic quadrature weight.
    """
    middle = 0.5 * (left + right)
    lower, _ = quad(lambda x: _regular_part(V, energy, left, x), left, middle,
                    weight="alg", wvar=(-0.5, 0.0), limit=200)
    upper, _ = quad(lambda x: _regular_part(V, energy, right, x), middle, right,
                    weight="alg", wvar=(0.0, -0.5), limit=200)
    return 2.0 * (lower + upper)


def classical_density(V: Potential, energy: float, half_width: float) -> float:
    """dA/dE, the sum of the periods of every orbit at energy E inside the box.

    Equal to the limit of (2 pi hbar) times the level density.
    """
    roots = turning_points(V, energy, half_width)
    total = 0.0
    for a, b in zip(roots, roots[1:]):
        if _value(V, 0.5 * (a + b)) < energy:
            total += classical_period(V, energy, a, b)
    return total


def classical_density_curve(V: Potential, energies: Sequence[float], half_width: float) -> np.ndarray:
    return np.array([classical_density(V, float(e), half_width) for e in energies])


def log_coefficient(curvature: float) -> float:
    """Coefficient c of -log|E - E0| in T(E) at a nondegenerate maximum: 2 / sqrt(|V''(0)|)."""
    return 2.0 / np.sqrt(abs(curvature))


def curvature_from_log(c: float) -> float:
    """|V''(0)| recovered from the log coefficient."""
    return (2.0 / c) ** 2


def phase_space_integral(V: Potential, f_grid: Sequence[float], f_values: Sequence[float],
                         x_range: Tuple[float, float], xi_max: float, points: int = 1201) -> float:
    """int int f(xi^2/2 + V(x)) dx dxi by the 2D trapezoid rule, f given by samples."""
    x = np.linspace(x_range[0], x_range[1], points)
    xi = np.linspace(-xi_max, xi_max, points)
    X, XI = np.meshgrid(x, xi, indexing="ij")
    H = 0.5 * XI ** 2 + np.asarray(V(X), dtype=float)
    F = np.interp(H, f_grid, f_values, left=0.0, right=0.0)
    return float(trapezoid(trapezoid(F, xi, axis=1), x))
