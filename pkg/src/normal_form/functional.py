"""
Conversion between the Weyl-symbol normal form and the operator-power form.

Star powers of Omega are polynomials in Omega and hbar^2:
Omega^{*k} = sum_i d_{k,i} hbar^(2i) Omega^(k-2i), with d_{k,0} = 1. The change of
basis between {hbar^(2j) Omega^k} and {hbar^(2j) Omega^{*k}} is unitriangular.
"""
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

from src.algebra.weyl import WeylPoly, star_product
from src.errors import NotAFunctionOfOmega
from src.normal_form.models import FunctionalNormalForm, NormalFormSeries

Key = Tuple[int, int]


@lru_cache(maxsize=None)
def omega_star_power(k: int, sign: int) -> WeylPoly:
    """Omega_sigma^{*k}, the k-fold Moyal power."""
    if k < 0:
        raise ValueError("power must be non-negative")
    if k == 0:
        return WeylPoly.constant(1)
    omega = WeylPoly.omega(sign)
    if k == 1:
        return omega
    return star_product(omega_star_power(k - 1, sign), omega, 2 * k)


def omega_expansion(poly: WeylPoly, sign: int) -> Dict[Key, Fraction]:
    """Write ``poly`` as sum d_{j,k} hbar^(2j) Omega_sigma^k.

    Raises:
        NotAFunctionOfOmega: If no such expansion exists
    """
    result: Dict[Key, Fraction] = {}
    remainder = poly
    for power, component in poly.hbar_components().items():
        if power % 2:
            raise NotAFunctionOfOmega(f"odd power hbar^{power} in {poly}")
        for spatial in component.spatial_degrees():
            if spatial % 2:
                raise NotAFunctionOfOmega(f"odd degree {spatial} part in {poly}")
            k = spatial // 2
            # the xi^(2k) coefficient of Omega^k is 2^-k
            lead = component.coefficient(0, spatial) * 2 ** k
            if lead:
                result[(power // 2, k)] = lead
                remainder = remainder - (WeylPoly.hbar() ** power * WeylPoly.omega(sign) ** k).scale(lead)
    if remainder:
        raise NotAFunctionOfOmega(f"{poly} is not a polynomial in Omega and hbar^2 (leftover {remainder})")
    return result


@lru_cache(maxsize=None)
def star_power_coefficients(k: int, sign: int) -> Tuple[Tuple[int, Fraction], ...]:
    """((i, d_{k,i}), ...) for i >= 1."""
    expansion = omega_expansion(omega_star_power(k, sign), sign)
    if expansion.get((0, k)) != 1:
        raise NotAFunctionOfOmega(f"leading coefficient of Omega^*{k} is not 1")
    return tuple(sorted((j, v) for (j, kk), v in expansion.items() if j > 0 and kk == k - 2 * j))


def weyl_to_functional(nf: NormalFormSeries) -> FunctionalNormalForm:
    """Rewrite sum b_{j,k} hbar^(2j) Omega^k in the basis hbar^(2j) Omega^{*k}.

    Back-substitution runs from the highest power of Omega down.
    """
    work: Dict[Key, Fraction] = dict(nf.coeffs)
    hats: Dict[Key, Fraction] = {}
    for k in range(max((k for _, k in work), default=0), -1, -1):
        for j in sorted(j for j, kk in work if kk == k):
            value = work[(j, k)]
            if not value:
                continue
            hats[(j, k)] = value
            for i, d in star_power_coefficients(k, nf.sign):
                key = (j + i, k - 2 * i)
                work[key] = work.get(key, Fraction(0)) - value * d
    return FunctionalNormalForm(sign=nf.sign, e0=nf.e0, coeffs=hats, max_degree=nf.max_degree)


def functional_to_weyl(fnf: FunctionalNormalForm) -> NormalFormSeries:
    """Inverse of ``weyl_to_functional``: expand each Omega^{*k} back into Omega^k."""
    coeffs: Dict[Key, Fraction] = {}
    for (j, k), value in fnf.coeffs.items():
        coeffs[(j, k)] = coeffs.get((j, k), Fraction(0)) + value
        for i, d in star_power_coefficients(k, fnf.sign):
            key = (j + i, k - 2 * i)
            coeffs[key] = coeffs.get(key, Fraction(0)) + value * d
    return NormalFormSeries(sign=fnf.sign, e0=fnf.e0, coeffs=coeffs, max_degree=fnf.max_degree)
