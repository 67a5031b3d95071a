"""
Homological equation {Omega_sigma, P}_1 = Q - c * Omega_sigma^(N/2) on homogeneous
polynomials of degree N in (x, xi).

For every (N, sigma) the bracket operator is assembled once on the monomial
basis x^(N-i) xi^i, i = 0..N, and its exact pseudo-inverse is cached.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

from loguru import logger

from src.algebra.linalg import least_squares_inverse, left_kernel_vector
from src.algebra.weyl import Monomial, WeylPoly, bracket_j
from src.errors import NotHomogeneous


@dataclass(frozen=True)
class _HomologicalOperator:
    degree: int
    sign: int
    # P = inverse . rhs, where rhs is Q - cK (with a trailing 0 for even degree)
    inverse: Tuple[Tuple[Fraction, ...], ...]
    # c = functional . Q; all zeros for odd degree
    functional: Tuple[Fraction, ...]
    kernel: Tuple[Fraction, ...]


def _basis_coefficients(poly: WeylPoly, degree: int) -> List[Fraction]:
    return [poly.coefficient(degree - i, i) for i in range(degree + 1)]


def _from_basis(values: List[Fraction], degree: int) -> WeylPoly:
    return WeylPoly._from_dict({Monomial(degree - i, i, 0): v for i, v in enumerate(values)})


@lru_cache(maxsize=None)
def _operator(degree: int, sign: int) -> _HomologicalOperator:
    omega = WeylPoly.omega(sign)
    columns = [_basis_coefficients(bracket_j(omega, WeylPoly.monomial(degree - i, i), 1), degree)
               for i in range(degree + 1)]
    matrix = [[columns[c][r] for c in range(degree + 1)] for r in range(degree + 1)]
    if degree % 2:
        inverse = least_squares_inverse(matrix)
        zeros = tuple(Fraction(0) for _ in range(degree + 1))
        return _HomologicalOperator(degree, sign, tuple(map(tuple, inverse)), zeros, zeros)

    kernel = _basis_coefficients(omega ** (degree // 2), degree)
    ell = left_kernel_vector(matrix)
    norm = sum(a * b for a, b in zip(ell, kernel))
    ell = [v / norm for v in ell]
    augmented = matrix + [ell]
    inverse = least_squares_inverse(augmented)
    logger.debug(f"Assembled homological operator for degree {degree}, sign {sign:+d}")
    return _HomologicalOperator(degree, sign, tuple(map(tuple, inverse)), tuple(ell), tuple(kernel))


def _check_homogeneous(Q: WeylPoly, degree: Optional[int]) -> int:
    degrees = Q.spatial_degrees()
    if any(mono.n for mono, _ in Q.items()):
        raise NotHomogeneous(f"right-hand side depends on hbar: {Q}")
    if len(degrees) > 1:
        raise NotHomogeneous(f"right-hand side mixes degrees {degrees}: {Q}")
    if degrees and degree is not None and degrees[0] != degree:
        raise NotHomogeneous(f"right-hand side has degree {degrees[0]}, expected {degree}")
    if degrees:
        return degrees[0]
    return degree if degree is not None else 0


def homological_solve(Q: WeylPoly, sign: int, degree: Optional[int] = None) -> Tuple[WeylPoly, Fraction]:
    """Solve {Omega_sigma, P}_1 = Q - c * Omega_sigma^(N/2).

    Args:
        Q: Homogeneous hbar-free polynomial of degree N in (x, xi)
        sign: sigma = +1 (elliptic) or -1 (hyperbolic)
        degree: N, required only when Q is zero

    Returns:
        (P, c): c = 0 for odd N; for even N, P has zero component along
        Omega_sigma^(N/2)

    Raises:
        NotHomogeneous: If Q mixes degrees or contains hbar
    """
    degree = _check_homogeneous(Q, degree)
    if not Q:
        return WeylPoly.zero(), Fraction(0)
    op = _operator(degree, sign)
    q = _basis_coefficients(Q, degree)
    c = sum((a * b for a, b in zip(op.functional, q)), Fraction(0))
    rhs = [qi - c * ki for qi, ki in zip(q, op.kernel)]
    if degree % 2 == 0:
        rhs.append(Fraction(0))
    p = [sum((a * b for a, b in zip(row, rhs)), Fraction(0)) for row in op.inverse]
    return _from_basis(p, degree), c


def c_functional(Q: WeylPoly, sign: int) -> Fraction:
    """The resonant coefficient c_sigma(Q) of the homological equation."""
    degree = _check_homogeneous(Q, None)
    if not Q or degree % 2:
        return Fraction(0)
    op = _operator(degree, sign)
    return sum((a * b for a, b in zip(op.functional, _basis_coefficients(Q, degree))), Fraction(0))


def sigma_poly(N: int, sign: int) -> WeylPoly:
    """Sigma_(2N-1): the solution of {Omega_sigma, Sigma}_1 = x^(2N-1)."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    P, _ = homological_solve(WeylPoly.monomial(2 * N - 1, 0), sign)
    return P
