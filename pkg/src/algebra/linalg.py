"""
Exact dense linear algebra over the rationals, backed by sympy.
"""
from fractions import Fraction
from typing import List, Sequence

import sympy


def to_matrix(rows: Sequence[Sequence[Fraction]]) -> sympy.Matrix:
    """Build a sympy matrix with exact Rational entries."""
    return sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in map(Fraction, row)]
                         for row in rows])


def to_fraction(value) -> Fraction:
    """Convert a sympy Rational back to a Fraction."""
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def to_rows(matrix: sympy.Matrix) -> List[List[Fraction]]:
    """Convert a sympy matrix to nested lists of Fractions."""
    return [[to_fraction(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]


def left_kernel_vector(rows: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    """A nonzero row vector l with l.A = 0 (the left kernel must be one-dimensional)."""
    kernel = to_matrix(rows).T.nullspace()
    if len(kernel) != 1:
        raise ValueError(f"expected a one-dimensional left kernel, got dimension {len(kernel)}")
    return [to_fraction(v) for v in kernel[0]]


def least_squares_inverse(rows: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Exact left inverse (A^T A)^-1 A^T of a full-column-rank matrix."""
    a = to_matrix(rows)
    return to_rows((a.T * a).inv() * a.T)

