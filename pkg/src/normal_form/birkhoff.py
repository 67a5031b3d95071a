"""
Degree-by-degree quantum Birkhoff normalization.

At every graded degree n the transformed symbol exp((i/hbar) ad S) H is
recomputed from scratch; its degree-n part is split by powers of hbar and each
piece is reduced by the homological equation. Nothing is transcribed from
closed-form intermediate equations.
"""
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

from loguru import logger

from src.algebra.rational import RationalLike, as_rational
from src.algebra.weyl import WeylPoly, exp_ad
from src.errors import BadQuadraticPart, NonRealInput
from src.normal_form.homological import homological_solve
from src.normal_form.models import Generator, NormalFormSeries, PotentialJet


def jet_to_hamiltonian(jet: PotentialJet) -> WeylPoly:
    """Omega_sigma + sum_{n>=3} a_n x^n; E0 is kept on the normal form instead."""
    terms = {(n, 0, 0): jet.coefficient(n) for n in range(3, jet.order + 1)}
    return WeylPoly.omega(jet.sign) + WeylPoly(terms)


def check_hamiltonian(H: WeylPoly, sign: int):
    """Require even hbar powers and a quadratic part exactly Omega_sigma."""
    if not H.is_real():
        raise NonRealInput(f"symbol has odd powers of hbar: {H}")
    low = H.truncate(2)
    if low != WeylPoly.omega(sign):
        raise BadQuadraticPart(f"degree <= 2 part is {low}, expected {WeylPoly.omega(sign)}")


def birkhoff_forward(H: WeylPoly, sign: int, max_degree: int, e0: RationalLike = 0,
                     kernel_offsets: Optional[Mapping[Tuple[int, int], RationalLike]] = None
                     ) -> Tuple[NormalFormSeries, Generator]:
    """Compute the quantum Birkhoff normal form of H through graded degree ``max_degree``.

    Args:
        H: Symbol Omega_sigma + (terms of graded degree >= 3), even in hbar
        sign: sigma
        max_degree: Truncation in the grading deg(x^l xi^m hbar^n) = l + m + 2n
        e0: Base energy recorded on the result
        kernel_offsets: ``{(n, j): r}`` adds r hbar^(2j) Omega^((n-4j)/2) to S_n.
            These lie in the kernel of the bracket with Omega and must not
            change any coefficient.

    Returns:
        (NormalFormSeries, Generator)

    Raises:
        BadQuadraticPart: If the quadratic part of H is not Omega_sigma
        NonRealInput: If H has odd powers of hbar
    """
    check_hamiltonian(H, sign)
    offsets = {key: as_rational(v) for key, v in (kernel_offsets or {}).items()}
    omega = WeylPoly.omega(sign)
    hbar = WeylPoly.hbar()
    S = WeylPoly.zero()
    coeffs: Dict[Tuple[int, int], Fraction] = {}

    for n in range(3, max_degree + 1):
        transformed = exp_ad(S, H, n)
        part = transformed.homogeneous_part(n)
        for power, component in part.hbar_components().items():
            # power is even: exp_ad preserves the hbar parity of H
            j = power // 2
            spatial = n - 2 * power
            P, c = homological_solve(component, sign, degree=spatial)
            if spatial % 2 == 0:
                coeffs[(j, spatial // 2)] = c
            if P:
                S = S + hbar ** power * P
        for j in range(n // 4 + 1):
            r = offsets.get((n, j))
            spatial = n - 4 * j
            if r and spatial % 2 == 0:
                S = S + (hbar ** (2 * j) * omega ** (spatial // 2)).scale(r)
        logger.debug(f"Degree {n}: generator has {len(S)} terms")

    nf = NormalFormSeries(sign=sign, e0=as_rational(e0), coeffs=coeffs, max_degree=max_degree)
    logger.debug(f"Normal form through degree {max_degree}: {len(nf.coeffs)} nonzero coefficients")
    return nf, Generator(S)


def forward_jet(jet: PotentialJet, max_degree: int, **kwargs) -> Tuple[NormalFormSeries, Generator]:
    """birkhoff_forward applied to the Hamiltonian of a potential jet."""
    return birkhoff_forward(jet_to_hamiltonian(jet), jet.sign, max_degree, e0=jet.e0, **kwargs)


def classical_part(nf: NormalFormSeries) -> Dict[int, Fraction]:
    """The classical Birkhoff normal form {k: b_{0,k}}."""
    return nf.classical_part()


def normalization_residual(H: WeylPoly, generator: Generator, nf: NormalFormSeries) -> WeylPoly:
    """exp((i/hbar) ad S) H minus the normal-form symbol, truncated at the normal form's degree.

    Zero for every correctly computed pair.
    """
    transformed = exp_ad(generator.S, H, nf.max_degree)
    return transformed - nf.to_symbol().truncate(nf.max_degree)
