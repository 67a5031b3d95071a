"""
Eigenvalue predictions from the functional normal form, and two independent
perturbation-theory oracles for the hbar^2 coefficient.
"""
from fractions import Fraction
from typing import Callable, List, Union

import numpy as np

from src.errors import WrongSign
from src.normal_form.models import FunctionalNormalForm, PotentialJet

Number = Union[int, float, Fraction]

HALF = Fraction(1, 2)


def predict_eigenvalues(fnf: FunctionalNormalForm, e0: float, hbar: float, n_max: int) -> List[float]:
    """E_n = E0 + hbar(n + 1/2) + sum b^_{j,k} hbar^(2j) (hbar(n + 1/2))^k for n = 0..n_max.

    Raises:
        WrongSign: For a hyperbolic normal form
    """
    if fnf.sign != 1:
        raise WrongSign("eigenvalue prediction needs the bottom of a well")
    terms = [(float(v), 2 * j, k) for (j, k), v in fnf.coeffs.items()]
    predictions = []
    for n in range(n_max + 1):
        action = hbar * (n + 0.5)
        correction = sum(v * hbar ** p * action ** k for v, p, k in terms)
        predictions.append(float(e0) + action + correction)
    return predictions


def hbar2_coefficient(fnf: FunctionalNormalForm, n: int) -> Fraction:
    """Exact hbar^2 coefficient of E_n: b^_{0,2} (n + 1/2)^2 + b^_{1,0}."""
    if fnf.sign != 1:
        raise WrongSign("eigenvalue prediction needs the bottom of a well")
    return fnf.get(0, 2) * (n + HALF) ** 2 + fnf.get(1, 0)


def perturbation_oracle(a: Number, b: Number, n: int) -> Number:
    """Second-order Rayleigh-Schroedinger hbar^2 coefficient for V = x^2/2 + a x^3 + b x^4.

    Exact when a and b are rationals.
    """
    quartic = Fraction(3, 4) * b * (2 * n * n + 2 * n + 1)
    cubic = Fraction(1, 8) * a * a * (30 * n * n + 30 * n + 11)
    return quartic - cubic


def ladder_position(size: int) -> np.ndarray:
    """y = (a + a^dagger)/sqrt(2) in the number basis 0..size-1."""
    off = np.sqrt(np.arange(1, size) / 2.0)
    return np.diag(off, 1) + np.diag(off, -1)


def matrix_perturbation_oracle(a: float, b: float, n: int, basis_size: int = None) -> float:
    """The same hbar^2 coefficient from explicit oscillator matrix elements.

    In the scaled variable x = sqrt(hbar) y the perturbation is
    sqrt(hbar) a y^3 + hbar b y^4, so the hbar^2 coefficient is
    b <n|y^4|n> + a^2 sum_{m != n} |<m|y^3|n>|^2 / (n - m).
    """
    size = basis_size or n + 12
    y = ladder_position(size)
    y3 = y @ y @ y
    y4 = y3 @ y
    first = float(b) * y4[n, n]
    second = sum(y3[m, n] ** 2 / (n - m) for m in range(size) if m != n)
    return first + float(a) ** 2 * second


def jet_potential(jet: PotentialJet) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized V(x) = E0 + sigma x^2/2 + sum a_n x^n."""
    coeffs = np.array([float(jet.coefficient(n)) for n in range(jet.order + 1)])
    coeffs[0] = float(jet.e0)

    def potential(x: np.ndarray) -> np.ndarray:
        return np.polynomial.polynomial.polyval(x, coeffs)

    return potential
