"""
Tests for the homological solver, the forward normalization and the
functional conversion.
"""
import random
from fractions import Fraction

import pytest
from loguru import logger

from src.algebra.weyl import WeylPoly, bracket_j
from src.errors import BadQuadraticPart, NonRealInput, NotAFunctionOfOmega, NotHomogeneous, ParseError
from src.inversion.inversion import reflect_jet, scale_jet
from src.normal_form.birkhoff import birkhoff_forward, forward_jet, jet_to_hamiltonian, normalization_residual
from src.normal_form.examples import gauge_hamiltonian, jet_from_expression, zoll_jet
from src.normal_form.functional import (functional_to_weyl, omega_expansion, omega_star_power,
                                        weyl_to_functional)
from src.normal_form.homological import c_functional, homological_solve, sigma_poly
from src.normal_form.models import FunctionalNormalForm, Generator, NormalFormSeries, PotentialJet, parse_sign
from src.spectra.study import computed_kappa

X, XI, HBAR = WeylPoly.x(), WeylPoly.xi(), WeylPoly.hbar()


def random_jet(rng: random.Random, order: int, sign: int = 1) -> PotentialJet:
    coeffs = [Fraction(rng.randint(-12, 12), rng.randint(1, 6)) for _ in range(order - 2)]
    coeffs[0] = coeffs[0] or Fraction(1)
    return PotentialJet(sign=sign, coeffs=tuple(coeffs))


@pytest.mark.parametrize("sign", [1, -1])
def test_homological_solution_satisfies_equation(sign):
    omega = WeylPoly.omega(sign)
    rng = random.Random(5)
    for degree in range(2, 9):
        Q = WeylPoly({(degree - i, i, 0): Fraction(rng.randint(-7, 7), rng.randint(1, 3))
                      for i in range(degree + 1)})
        P, c = homological_solve(Q, sign)
        kernel = omega ** (degree // 2) if degree % 2 == 0 else WeylPoly.zero()
        assert bracket_j(omega, P, 1) == Q - kernel.scale(c)
        if degree % 2:
            assert c == 0
        else:
            # no component along Omega^(N/2)
            assert c_functional(P, sign) == 0


def test_resonant_coefficients():
    assert homological_solve(X ** 4, 1)[1] == Fraction(3, 2)
    assert homological_solve(X ** 6, 1)[1] == Fraction(5, 2)
    assert homological_solve(WeylPoly.omega(1) ** 2, 1) == (WeylPoly.zero(), Fraction(1))
    assert homological_solve(WeylPoly.zero(), 1, degree=4) == (WeylPoly.zero(), Fraction(0))


def test_homological_rejects_inhomogeneous_input():
    with pytest.raises(NotHomogeneous):
        homological_solve(X ** 3 + X ** 4, 1)
    with pytest.raises(NotHomogeneous):
        homological_solve(HBAR ** 2 * X ** 2, 1)
    with pytest.raises(NotHomogeneous):
        homological_solve(X ** 3, 1, degree=5)


@pytest.mark.parametrize("sign", [1, -1])
def test_sigma_polynomials(sign):
    for N in range(1, 9):
        assert bracket_j(WeylPoly.omega(sign), sigma_poly(N, sign), 1) == X ** (2 * N - 1)


def test_first_coefficients_match_closed_form():
    rng = random.Random(2024)
    for _ in range(20):
        a, b = (Fraction(rng.randint(-20, 20), rng.randint(1, 7)) for _ in range(2))
        nf, _ = forward_jet(PotentialJet(coeffs=(a, b)), 4)
        assert nf.get(0, 2) == Fraction(-15, 4) * a * a + Fraction(3, 2) * b
        assert nf.get(1, 0) == Fraction(1, 2) * a * a


def test_kappa_is_one_half():
    assert computed_kappa() == Fraction(1, 2)


def test_gauge_equivalent_symbol_has_trivial_normal_form():
    nf, generator = birkhoff_forward(gauge_hamiltonian(), 1, 10)
    assert not nf.coeffs
    assert generator.S


def test_zoll_potential_is_classically_isochronous():
    nf, _ = forward_jet(zoll_jet(10), 10)
    logger.info(f"Zoll normal form: {nf.to_dict()['b']}")
    assert not nf.classical_part()
    assert nf.get(1, 0) != 0


@pytest.mark.parametrize("sign", [1, -1])
def test_normalization_is_exact(sign):
    jet = random_jet(random.Random(17 + sign), 8, sign)
    H = jet_to_hamiltonian(jet)
    nf, generator = birkhoff_forward(H, sign, 8)
    assert normalization_residual(H, generator, nf) == 0


def test_kernel_offsets_leave_normal_form_unchanged():
    jet = random_jet(random.Random(99), 8)
    plain, plain_generator = forward_jet(jet, 8)
    offsets = {(4, 0): 3, (6, 0): Fraction(-1, 2), (8, 1): 2, (8, 0): 5}
    shifted, shifted_generator = forward_jet(jet, 8, kernel_offsets=offsets)
    assert shifted.coeffs == plain.coeffs
    assert shifted_generator.S != plain_generator.S


def test_normal_form_is_even_in_x():
    jet = random_jet(random.Random(4), 10)
    assert forward_jet(reflect_jet(jet), 10)[0].coeffs == forward_jet(jet, 10)[0].coeffs


@pytest.mark.parametrize("t", [Fraction(2), Fraction(-3), Fraction(1, 2)])
def test_normal_form_scales_with_the_jet(t):
    jet = random_jet(random.Random(8), 10)
    nf, _ = forward_jet(jet, 10)
    scaled, _ = forward_jet(scale_jet(jet, t), 10)
    assert max(4 * j + 2 * k for j, k in nf.coeffs) == 10
    for (j, k), value in nf.coeffs.items():
        assert scaled.get(j, k) == value * t ** (4 * j + 2 * k - 2)
    assert set(scaled.coeffs) == set(nf.coeffs)


def test_forward_rejects_bad_symbols():
    with pytest.raises(BadQuadraticPart):
        birkhoff_forward(WeylPoly.omega(1) + X ** 2, 1, 4)
    with pytest.raises(BadQuadraticPart):
        birkhoff_forward(WeylPoly.omega(1) + X ** 3, -1, 4)
    with pytest.raises(NonRealInput):
        birkhoff_forward(WeylPoly.omega(1) + HBAR * X ** 3, 1, 6)


def test_functional_conversion():
    square = NormalFormSeries(coeffs={(0, 2): 1}, max_degree=4)
    hat = weyl_to_functional(square)
    assert hat.coeffs == {(0, 2): 1, (1, 0): Fraction(1, 4)}
    hyperbolic = weyl_to_functional(NormalFormSeries(sign=-1, coeffs={(0, 2): 1}, max_degree=4))
    assert hyperbolic.coeffs == {(0, 2): 1, (1, 0): Fraction(-1, 4)}
    cube = weyl_to_functional(NormalFormSeries(coeffs={(0, 3): 1}, max_degree=6))
    assert cube.coeffs == {(0, 3): 1, (1, 1): Fraction(5, 4)}


def test_functional_conversion_inverts():
    nf, _ = forward_jet(random_jet(random.Random(21), 10), 10)
    assert functional_to_weyl(weyl_to_functional(nf)).coeffs == nf.coeffs


def test_star_powers_are_functions_of_omega():
    for k in range(5):
        expansion = omega_expansion(omega_star_power(k, 1), 1)
        assert expansion[(0, k)] == 1
        assert all(kk == k - 2 * j for j, kk in expansion)
    with pytest.raises(NotAFunctionOfOmega):
        omega_expansion(X ** 2, 1)


def test_jet_from_expression():
    jet = jet_from_expression("x**2/2 + x**3/3 - x**4 + 1/5", order=6)
    assert jet.sign == 1 and jet.e0 == Fraction(1, 5)
    assert jet.coeffs == (Fraction(1, 3), Fraction(-1), Fraction(0), Fraction(0))
    assert jet_from_expression("-x**2/2 + x**4", order=4).sign == -1
    with pytest.raises(BadQuadraticPart):
        jet_from_expression("x**2 + x**3")
    with pytest.raises(BadQuadraticPart):
        jet_from_expression("x + x**2/2")
    with pytest.raises(ParseError):
        jet_from_expression("x**2/2 + sqrt(2)*x**3")


def test_models_round_trip_through_json():
    jet = PotentialJet.from_dict({"sign": "-", "E0": "1/3", "a": ["1", "-2/5"]})
    assert jet.to_dict() == {"sign": "-", "E0": "1/3", "a": ["1", "-2/5"]}
    nf, generator = forward_jet(jet, 6)
    assert NormalFormSeries.from_dict(nf.to_dict()) == nf
    fnf = weyl_to_functional(nf)
    assert FunctionalNormalForm.from_dict(fnf.to_dict()) == fnf
    assert "b_hat" in fnf.to_dict()
    assert Generator(WeylPoly.from_records(generator.to_dict()["S"])) == generator
    assert not hasattr(generator, "degree_part")


def test_series_validation():
    with pytest.raises(ParseError):
        NormalFormSeries(coeffs={(0, 1): 1})
    with pytest.raises(ParseError):
        NormalFormSeries(coeffs={(0, 6): 1}, max_degree=10)
    with pytest.raises(ParseError):
        PotentialJet.from_dict({"sign": "?", "a": []})


@pytest.mark.parametrize("value", [True, False, "true", 0, 2])
def test_sign_rejects_non_signs(value):
    with pytest.raises(ParseError):
        parse_sign(value)
    with pytest.raises(ParseError):
        PotentialJet.from_dict({"sign": value, "a": ["1"]})


def test_sign_accepts_symbols_and_units():
    assert [parse_sign(v) for v in ("+", "-", 1, -1, "+1", "-1")] == [1, -1, 1, -1, 1, -1]


def test_cubic_generator_and_resonances():
    S3 = -(X ** 2 * XI + XI ** 3 * Fraction(2, 3))
    assert homological_solve(X ** 3, 1) == (S3, Fraction(0))
    assert sigma_poly(1, 1) == -XI
    assert sigma_poly(2, 1) == S3
    assert c_functional(WeylPoly.omega(1) ** 3, 1) == 1
    assert c_functional(X ** 3 * XI, 1) == 0


@pytest.mark.parametrize("sign", [1, -1])
def test_sigma_leading_coefficients(sign):
    for N in range(2, 8):
        sigma = sigma_poly(N, sign)
        assert sigma.coefficient(2 * N - 2, 1) == -sign
        assert sigma.coefficient(2 * N - 4, 3) == Fraction(-(2 * N - 2), 3)


def test_zoll_quantum_shift_and_recovery():
    jet = zoll_jet(4)
    assert jet.coeffs == (Fraction(-1, 2), Fraction(5, 8))
    nf, _ = forward_jet(jet, 4)
    assert nf.get(0, 2) == 0
    assert nf.get(1, 0) == computed_kappa() / 4 == Fraction(1, 8)
