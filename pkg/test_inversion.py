"""
Tests for the inverse map from normal forms back to potential jets.
"""
import random
from fractions import Fraction

import pytest

from src.errors import DegenerateA3, NegativeDiscriminant, ZeroScale
from src.inversion.inversion import (delta_pathway_coefficient, expected_delta_pathway, fit_stage,
                                     invert_qbnf, invert_with_provenance, recover_a3_a4, reflect_jet,
                                     scale_jet)
from src.normal_form.birkhoff import forward_jet
from src.normal_form.models import NormalFormSeries, PotentialJet


def random_jet(rng: random.Random, order: int, sign: int = 1) -> PotentialJet:
    coeffs = [Fraction(rng.randint(-15, 15), rng.randint(1, 5)) for _ in range(order - 2)]
    coeffs[0] = coeffs[0] or Fraction(2, 3)
    return PotentialJet(sign=sign, coeffs=tuple(coeffs))


def test_stage_two_model():
    model = fit_stage(PotentialJet(), 2)
    assert model.gamma == Fraction(-15, 4)
    assert model.beta == Fraction(3, 2)
    assert model.delta == Fraction(1, 2)
    assert model.determinant == Fraction(-3, 4)
    assert model.to_dict()["beta"] == "3/2"


def test_recover_first_coefficients():
    assert recover_a3_a4(Fraction(-15, 4), Fraction(1, 2)) == (Fraction(1), Fraction(0), True)
    assert recover_a3_a4("3/2", "0") == (Fraction(0), Fraction(1), True)
    a3, a4, exact = recover_a3_a4(Fraction(-15, 4), Fraction(1, 2), sign_choice=-1)
    assert (a3, a4, exact) == (Fraction(-1), Fraction(0), True)
    # a_4 = (2/3) b_02 + 5 b_10
    rng = random.Random(1)
    for _ in range(10):
        b02, b10 = Fraction(rng.randint(-9, 9), rng.randint(1, 4)), Fraction(rng.randint(1, 9), 8)
        assert recover_a3_a4(b02, b10).a4 == Fraction(2, 3) * b02 + 5 * b10


def test_irrational_cubic_coefficient_is_flagged():
    a3, _, exact = recover_a3_a4(0, 1)
    assert not exact
    assert a3 * a3 < 2 < (a3 + Fraction(1, 2 ** 64)) ** 2


def test_negative_discriminant():
    with pytest.raises(NegativeDiscriminant):
        recover_a3_a4(0, -1)


@pytest.mark.parametrize("seed", range(10))
def test_round_trip(seed):
    jet = random_jet(random.Random(seed), 10)
    nf, _ = forward_jet(jet, 10)
    sign = 1 if jet.coefficient(3) > 0 else -1
    result = invert_with_provenance(nf, sign)
    assert result.exact
    assert result.jet == jet
    assert [stage.stage for stage in result.stages] == [2, 3, 4, 5]
    assert "provenance" in result.to_dict()


def test_round_trip_hyperbolic_quartic():
    jet = PotentialJet(sign=-1, e0=Fraction(1, 7), coeffs=(Fraction(-2, 3), Fraction(5, 2)))
    nf, _ = forward_jet(jet, 4)
    assert invert_qbnf(nf, -1) == jet


def test_sign_choice_reflects_the_jet():
    jet = random_jet(random.Random(12), 8)
    nf, _ = forward_jet(jet, 8)
    assert invert_qbnf(nf, -1) == reflect_jet(invert_qbnf(nf, 1))


def test_harmonic_normal_form_is_degenerate():
    nf, _ = forward_jet(PotentialJet(coeffs=(Fraction(0), Fraction(1))), 6)
    with pytest.raises(DegenerateA3):
        invert_qbnf(nf)
    with pytest.raises(DegenerateA3):
        invert_qbnf(NormalFormSeries(max_degree=6))
    with pytest.raises(DegenerateA3):
        fit_stage(PotentialJet(coeffs=(Fraction(0),)), 3)


@pytest.mark.parametrize("t", [Fraction(2), Fraction(-3), Fraction(1, 2)])
def test_scale_jet(t):
    jet = PotentialJet(coeffs=(Fraction(1), Fraction(-2), Fraction(3, 5)))
    scaled = scale_jet(jet, t)
    assert scaled.coeffs == (t, -2 * t ** 2, Fraction(3, 5) * t ** 3)
    assert scale_jet(scaled, 1 / t) == jet


def test_zero_scale():
    with pytest.raises(ZeroScale):
        scale_jet(PotentialJet(coeffs=(Fraction(1),)), 0)


def test_delta_pathway():
    assert expected_delta_pathway(2) == 1
    for N in range(2, 7):
        assert delta_pathway_coefficient(N) == expected_delta_pathway(N)


def test_stage_models_are_nondegenerate():
    prefix = random_jet(random.Random(31), 10)
    for N in range(2, 7):
        model = fit_stage(prefix, N)
        assert model.beta != 0
        assert model.delta != 0
        assert model.determinant != 0


def test_recover_trivial_and_zoll_coefficients():
    assert recover_a3_a4(0, 0) == (Fraction(0), Fraction(0), True)
    a3, a4, exact = recover_a3_a4(0, Fraction(1, 8), sign_choice=-1)
    assert (a3, a4, exact) == (Fraction(-1, 2), Fraction(5, 8), True)
