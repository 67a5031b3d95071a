"""
Closed-form potentials and symbols used as fixtures.
"""
from fractions import Fraction
from typing import Union

import sympy
from loguru import logger

from src.algebra.linalg import to_fraction
from src.algebra.weyl import WeylPoly
from src.errors import BadQuadraticPart, ParseError
from src.normal_form.models import PotentialJet

X = sympy.Symbol("x")

ZOLL_POTENTIAL = "(sqrt(1 + 2*x) - 1)**2 / 2"


def jet_from_expression(expr: Union[str, sympy.Expr], order: int = 10) -> PotentialJet:
    """Taylor-expand a potential V(x) at x = 0 into an exact jet.

    Args:
        expr: sympy expression or string in the variable ``x``
        order: Highest power a_order kept

    Raises:
        ParseError: If the expression cannot be parsed or a coefficient is irrational
        BadQuadraticPart: If V'(0) != 0 or V''(0) != +-1
    """
    if isinstance(expr, str):
        try:
            expr = sympy.sympify(expr, locals={"x": X})
        except (sympy.SympifyError, SyntaxError) as e:
            raise ParseError(f"cannot parse potential {expr!r}: {e}") from e
    poly = sympy.series(expr, X, 0, order + 1).removeO()
    coeffs = {}
    for n in range(order + 1):
        value = sympy.nsimplify(poly.coeff(X, n))
        if not value.is_Rational:
            raise ParseError(f"coefficient of x^{n} is not rational: {value}")
        coeffs[n] = to_fraction(value)
    if coeffs[1]:
        raise BadQuadraticPart(f"V'(0) = {coeffs[1]}, the origin is not a critical point")
    if abs(coeffs[2]) != Fraction(1, 2):
        raise BadQuadraticPart(f"V''(0) = {2 * coeffs[2]}, expected +1 or -1")
    sign = 1 if coeffs[2] > 0 else -1
    logger.debug(f"Expanded {expr} to order {order}")
    return PotentialJet.from_coefficients({n: coeffs[n] for n in range(3, order + 1)},
                                          sign=sign, e0=coeffs[0], order=order)


def zoll_jet(order: int = 10) -> PotentialJet:
    """Jet of V = (sqrt(1 + 2x) - 1)^2 / 2, classically conjugate to the harmonic oscillator."""
    return jet_from_expression(ZOLL_POTENTIAL, order)


def gauge_hamiltonian() -> WeylPoly:
    """((xi - 3x^2)^2 + x^2) / 2, a symbol gauge equivalent to Omega_+."""
    shifted = WeylPoly.xi() - WeylPoly.x() ** 2 * 3
    return (shifted ** 2 + WeylPoly.x() ** 2).scale(Fraction(1, 2))
